#ifndef DCM_SCENARIO_IO_HPP
#define DCM_SCENARIO_IO_HPP

#include <iosfwd>
#include <string>
#include <vector>

#include "dcm/sim.hpp"

namespace dcm {

/// Parse the sectioned key/value scenario format. Throws ParseError with
/// line/column on malformed input.
Scenario parse_scenario(std::istream& in);
Scenario load_scenario(const std::string& path);

/// Apply a flat `key=value` override (e.g. "controller=mccst", "r_c=0.7",
/// "steps=300") onto a parsed scenario. Throws UsageError on unknown keys.
void apply_override(Scenario& s, const std::string& key, const std::string& value);

/// Effective configuration echo, same format the parser accepts.
std::string format_scenario(const Scenario& s);

void write_trajectory_csv(std::ostream& out, const std::vector<StepRecord>& records);
void write_metrics_csv(std::ostream& out, const std::vector<StepRecord>& records);
void write_summary(std::ostream& out, const Scenario& s, const RunSummary& summary,
                   const std::vector<std::string>& overrides);

/// Grid sampling of the field for one transmitter, `x,y,rssi_db`, row-major
/// over the arena.
void write_field_grid_csv(std::ostream& out, const FieldSpec& field, int tx_id,
                          const Vec2& tx_pos, int rx_id, double resolution);

/// GP training-set snapshot, `tx_x,tx_y,rx_x,rx_y,y_shifted_db`.
void write_dataset_csv(std::ostream& out, const GpModel& model);

}  // namespace dcm

#endif
