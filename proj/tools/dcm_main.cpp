#include <CLI11.hpp>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <set>
#include <thread>

#include "dcm/scenario_io.hpp"

namespace fs = std::filesystem;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitError = 1;
constexpr int kExitConnectivityLoss = 2;
constexpr int kExitInfeasible = 3;

struct EmitSet {
    bool trajectory = true;
    bool metrics = true;
    bool summary = true;
    bool dataset = true;
    bool field_grid = true;
};

EmitSet parse_emit(const std::vector<std::string>& items) {
    if (items.empty()) {
        return {};
    }
    EmitSet e{false, false, false, false, false};
    for (const auto& item : items) {
        if (item == "trajectory") {
            e.trajectory = true;
        } else if (item == "metrics") {
            e.metrics = true;
        } else if (item == "summary") {
            e.summary = true;
        } else if (item == "dataset") {
            e.dataset = true;
        } else if (item == "field_grid") {
            e.field_grid = true;
        } else {
            throw dcm::UsageError("unknown emit kind: " + item);
        }
    }
    return e;
}

std::ofstream open_out(const fs::path& path) {
    if (fs::exists(path)) {
        std::cerr << "warning: overwriting " << path << "\n";
    }
    std::ofstream out(path);
    if (!out) {
        throw dcm::IoError("cannot write " + path.string());
    }
    return out;
}

dcm::Scenario load_with_overrides(const std::string& scenario_path,
                                  const std::vector<std::string>& sets) {
    dcm::Scenario s = dcm::load_scenario(scenario_path);
    for (const auto& kv : sets) {
        const auto eq = kv.find('=');
        if (eq == std::string::npos) {
            throw dcm::UsageError("--set expects key=value, got: " + kv);
        }
        dcm::apply_override(s, kv.substr(0, eq), kv.substr(eq + 1));
    }
    return s;
}

int run_command(const std::string& scenario_path, const std::string& out_dir,
                const std::vector<std::string>& sets, const std::vector<std::string>& emit_items) {
    const EmitSet emit = parse_emit(emit_items);
    dcm::Scenario s = load_with_overrides(scenario_path, sets);
    fs::create_directories(out_dir);

    dcm::ModelStore models;
    std::vector<dcm::StepRecord> records;
    bool disconnected = false;
    try {
        records = dcm::run(s, &models);
    } catch (const dcm::DisconnectedAtEntry& e) {
        std::cerr << "connectivity failure: " << e.what() << "\n";
        disconnected = true;
    }

    if (!records.empty()) {
        const dcm::RunSummary summary = dcm::summarize(s, records);
        if (emit.trajectory) {
            auto out = open_out(fs::path(out_dir) / "trajectory.csv");
            dcm::write_trajectory_csv(out, records);
        }
        if (emit.metrics) {
            auto out = open_out(fs::path(out_dir) / "metrics.csv");
            dcm::write_metrics_csv(out, records);
        }
        if (emit.summary) {
            auto out = open_out(fs::path(out_dir) / "summary.txt");
            dcm::write_summary(out, s, summary, sets);
        }
        if (emit.dataset) {
            for (const auto& [pair, model] : models) {
                auto out = open_out(fs::path(out_dir) / ("dataset_" + std::to_string(pair.first) +
                                                         "_" + std::to_string(pair.second) +
                                                         ".csv"));
                dcm::write_dataset_csv(out, model);
            }
        }
        if (emit.field_grid) {
            for (std::size_t i = 0; i < s.robots.size(); ++i) {
                auto out = open_out(fs::path(out_dir) / ("field_tx" + std::to_string(i) + ".csv"));
                const int rx = static_cast<int>((i + 1) % s.robots.size());
                dcm::write_field_grid_csv(out, s.field, static_cast<int>(i), s.robots[i].start, rx,
                                          0.1);
            }
        }
        if (summary.infeasible_count > 0) {
            return kExitInfeasible;
        }
        if (summary.min_lambda2 <= 0.0) {
            return kExitConnectivityLoss;
        }
    }
    return disconnected ? kExitConnectivityLoss : kExitOk;
}

int export_field_command(const std::string& scenario_path, const std::string& out_dir,
                         const std::vector<std::string>& sets, int tx, double resolution) {
    dcm::Scenario s = load_with_overrides(scenario_path, sets);
    if (tx < 0 || tx >= static_cast<int>(s.robots.size())) {
        throw dcm::UsageError("--tx out of range");
    }
    fs::create_directories(out_dir);
    auto out = open_out(fs::path(out_dir) / ("field_tx" + std::to_string(tx) + ".csv"));
    const int rx = static_cast<int>((tx + 1) % s.robots.size());
    dcm::write_field_grid_csv(out, s.field, tx, s.robots[tx].start, rx, resolution);
    return kExitOk;
}

int sweep_command(const std::string& out_dir, const std::vector<int>& robot_counts, int trials,
                  int steps, int jobs) {
    fs::create_directories(out_dir);

    struct Trial {
        int n = 0;
        int trial = 0;
        dcm::Scenario scenario;
    };
    std::vector<Trial> work;
    for (int n : robot_counts) {
        for (int t = 0; t < trials; ++t) {
            dcm::Scenario s = dcm::make_ring_scenario(n, static_cast<std::uint64_t>(1000 * n + t));
            if (steps > 0) {
                s.steps = steps;
            }
            work.push_back({n, t, std::move(s)});
        }
    }

    struct Result {
        dcm::RunSummary summary;
        bool disconnected = false;
        std::string error;
    };
    std::vector<Result> results(work.size());
    std::atomic<std::size_t> next{0};

    auto worker = [&]() {
        while (true) {
            const std::size_t k = next.fetch_add(1);
            if (k >= work.size()) {
                return;
            }
            const auto& w = work[k];
            const fs::path trial_dir =
                fs::path(out_dir) / ("n" + std::to_string(w.n)) / ("trial" + std::to_string(w.trial));
            fs::create_directories(trial_dir);
            try {
                std::vector<dcm::StepRecord> records = dcm::run(w.scenario);
                results[k].summary = dcm::summarize(w.scenario, records);
                {
                    std::ofstream out(trial_dir / "metrics.csv");
                    dcm::write_metrics_csv(out, records);
                }
                std::ofstream out(trial_dir / "summary.txt");
                dcm::write_summary(out, w.scenario, results[k].summary, {});
            } catch (const dcm::DisconnectedAtEntry& e) {
                results[k].disconnected = true;
                results[k].error = e.what();
            } catch (const std::exception& e) {
                results[k].error = e.what();
            }
        }
    };

    std::vector<std::thread> pool;
    const int n_threads = std::max(1, jobs);
    for (int i = 0; i < n_threads; ++i) {
        pool.emplace_back(worker);
    }
    for (auto& th : pool) {
        th.join();
    }

    auto out = open_out(fs::path(out_dir) / "sweep.csv");
    out << "n,trial,steps,min_min_dist,min_lambda2,mean_perturbation,std_perturbation,"
           "relaxation_count,infeasible_count,status\n";
    bool any_failure = false;
    for (std::size_t k = 0; k < work.size(); ++k) {
        const auto& w = work[k];
        const auto& r = results[k];
        std::string status = "ok";
        if (!r.error.empty()) {
            status = r.disconnected ? "disconnected" : "error";
        } else if (r.summary.infeasible_count > 0) {
            status = "infeasible";
        } else if (r.summary.min_lambda2 <= 0.0) {
            status = "lambda2_zero";
        }
        if (status != "ok") {
            any_failure = true;
        }
        out << w.n << "," << w.trial << "," << r.summary.steps << "," << r.summary.min_min_dist
            << "," << r.summary.min_lambda2 << "," << r.summary.mean_perturbation << ","
            << r.summary.std_perturbation << "," << r.summary.relaxation_count << ","
            << r.summary.infeasible_count << "," << status << "\n";
    }
    return any_failure ? kExitConnectivityLoss : kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Data-driven connectivity maintenance simulator"};
    app.require_subcommand(1);

    std::string scenario_path;
    std::string out_dir = "out";
    std::vector<std::string> sets;
    std::vector<std::string> emit_items;

    auto* run_cmd = app.add_subcommand("run", "Run one scenario and write its outputs");
    run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    run_cmd->add_option("--out", out_dir, "Output directory");
    run_cmd->add_option("--set", sets, "Override key=value (repeatable)");
    run_cmd->add_option("--emit", emit_items,
                        "Subset of trajectory,metrics,summary,dataset,field_grid")
        ->delimiter(',');

    int tx = 0;
    double resolution = 0.1;
    auto* export_cmd = app.add_subcommand("export-field", "Write a field grid CSV for one transmitter");
    export_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();
    export_cmd->add_option("--out", out_dir, "Output directory");
    export_cmd->add_option("--set", sets, "Override key=value (repeatable)");
    export_cmd->add_option("--tx", tx, "Transmitter robot id");
    export_cmd->add_option("--res", resolution, "Grid resolution (m)");

    std::vector<int> robot_counts = {5, 10, 20};
    int trials = 10;
    int steps = 0;
    int jobs = 1;
    auto* sweep_cmd = app.add_subcommand("sweep", "Batch ring scenarios over robot counts");
    sweep_cmd->add_option("--out", out_dir, "Output directory");
    sweep_cmd->add_option("--robots", robot_counts, "Robot counts")->delimiter(',');
    sweep_cmd->add_option("--trials", trials, "Trials per robot count");
    sweep_cmd->add_option("--steps", steps, "Steps per trial (0 = scenario default)");
    sweep_cmd->add_option("--jobs", jobs, "Concurrent trials");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kExitOk : kExitError;
    }

    try {
        if (run_cmd->parsed()) {
            return run_command(scenario_path, out_dir, sets, emit_items);
        }
        if (export_cmd->parsed()) {
            return export_field_command(scenario_path, out_dir, sets, tx, resolution);
        }
        return sweep_command(out_dir, robot_counts, trials, steps, jobs);
    } catch (const dcm::UsageError& e) {
        std::cerr << "usage error: " << e.what() << "\n";
        return kExitError;
    } catch (const dcm::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return kExitError;
    } catch (const dcm::IoError& e) {
        std::cerr << "io error: " << e.what() << "\n";
        return kExitError;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitError;
    }
}
