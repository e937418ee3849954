#include "dcm/scenario_io.hpp"

#include <fstream>
#include <map>
#include <iomanip>
#include <sstream>

namespace dcm {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) {
        return "";
    }
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

std::vector<double> parse_numbers(const std::string& value, int line) {
    std::vector<double> out;
    std::istringstream ss(value);
    std::string tok;
    while (ss >> tok) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(tok, &used));
            if (used != tok.size()) {
                throw std::invalid_argument(tok);
            }
        } catch (const std::exception&) {
            throw ParseError("not a number: '" + tok + "'", line, 1);
        }
    }
    return out;
}

double parse_one(const std::string& value, int line) {
    auto v = parse_numbers(value, line);
    if (v.size() != 1) {
        throw ParseError("expected a single number", line, 1);
    }
    return v[0];
}

struct KvHandler {
    Scenario* s;

    void handle(const std::string& section, const std::string& key, const std::string& value,
                int line) {
        if (section == "robots") {
            if (key != "robot") {
                throw ParseError("unknown key '" + key + "' in [robots]", line, 1);
            }
            auto v = parse_numbers(value, line);
            if (v.size() != 5) {
                throw ParseError("robot needs: start_x start_y goal_x goal_y alpha", line, 1);
            }
            s->robots.push_back({Vec2(v[0], v[1]), Vec2(v[2], v[3]), v[4]});
        } else if (section == "obstacles") {
            if (key == "r_obs") {
                s->obstacles.r_obs = parse_one(value, line);
            } else if (key == "point") {
                auto v = parse_numbers(value, line);
                if (v.size() != 2) {
                    throw ParseError("point needs: x y", line, 1);
                }
                s->obstacles.points.emplace_back(v[0], v[1]);
            } else {
                throw ParseError("unknown key '" + key + "' in [obstacles]", line, 1);
            }
        } else if (section == "field") {
            if (key == "seed") {
                s->field.seed = static_cast<std::uint64_t>(parse_one(value, line));
            } else if (key == "p0") {
                s->field.p0 = parse_one(value, line);
            } else if (key == "path_loss_exp") {
                s->field.path_loss_exp = parse_one(value, line);
            } else if (key == "n_bumps") {
                s->field.n_bumps = static_cast<int>(parse_one(value, line));
            } else if (key == "bump_amp") {
                s->field.bump_amp = parse_one(value, line);
            } else if (key == "bump_len") {
                s->field.bump_len = parse_one(value, line);
            } else if (key == "asym_gain_range") {
                s->field.asym_gain_range = parse_one(value, line);
            } else if (key == "floor_db") {
                s->field.floor_db = parse_one(value, line);
            } else if (key == "arena") {
                auto v = parse_numbers(value, line);
                if (v.size() != 4) {
                    throw ParseError("arena needs: x_min x_max y_min y_max", line, 1);
                }
                s->field.arena = Arena{v[0], v[1], v[2], v[3]};
            } else {
                throw ParseError("unknown key '" + key + "' in [field]", line, 1);
            }
        } else if (section == "controller") {
            if (key == "type") {
                if (value == "dcm") {
                    s->controller = DcmController{};
                } else if (value == "mccst") {
                    double r_c = 0.7;
                    if (const auto* m = std::get_if<MccstController>(&s->controller)) {
                        r_c = m->r_c;
                    }
                    s->controller = MccstController{r_c};
                } else {
                    throw ParseError("controller type must be dcm or mccst", line, 1);
                }
            } else if (key == "r_c") {
                const double r_c = parse_one(value, line);
                s->controller = MccstController{r_c};
            } else if (key == "gamma") {
                s->gamma = parse_one(value, line);
            } else if (key == "r_s") {
                s->r_s = parse_one(value, line);
            } else if (key == "psi") {
                s->psi = parse_one(value, line);
            } else if (key == "epsilon") {
                s->epsilon = parse_one(value, line);
            } else if (key == "slack_penalty") {
                s->slack_penalty = parse_one(value, line);
            } else {
                throw ParseError("unknown key '" + key + "' in [controller]", line, 1);
            }
        } else if (section == "gp") {
            if (key == "sigma_f") {
                s->gp_hyper.sigma_f = parse_one(value, line);
            } else if (key == "length_scale") {
                s->gp_hyper.length_scale = parse_one(value, line);
            } else if (key == "noise_var") {
                s->gp_hyper.noise_var = parse_one(value, line);
            } else if (key == "dedup_res") {
                s->dedup_res = parse_one(value, line);
            } else if (key == "cap") {
                s->cap = static_cast<std::size_t>(parse_one(value, line));
            } else {
                throw ParseError("unknown key '" + key + "' in [gp]", line, 1);
            }
        } else if (section == "run") {
            if (key == "dt") {
                s->dt = parse_one(value, line);
            } else if (key == "steps") {
                s->steps = static_cast<int>(parse_one(value, line));
            } else if (key == "seed") {
                s->seed = static_cast<std::uint64_t>(parse_one(value, line));
            } else {
                throw ParseError("unknown key '" + key + "' in [run]", line, 1);
            }
        } else {
            throw ParseError("unknown section [" + section + "]", line, 1);
        }
    }
};

}  // namespace

Scenario parse_scenario(std::istream& in) {
    Scenario s;
    s.steps = 700;
    KvHandler handler{&s};

    std::string raw;
    std::string section;
    int line_no = 0;
    while (std::getline(in, raw)) {
        ++line_no;
        std::string line = raw;
        const auto hash = line.find('#');
        if (hash != std::string::npos) {
            line = line.substr(0, hash);
        }
        line = trim(line);
        if (line.empty()) {
            continue;
        }
        if (line.front() == '[') {
            if (line.back() != ']') {
                throw ParseError("unterminated section header", line_no,
                                 static_cast<int>(raw.size()));
            }
            section = trim(line.substr(1, line.size() - 2));
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos) {
            throw ParseError("expected 'key = value'", line_no, 1);
        }
        if (section.empty()) {
            throw ParseError("key outside any section", line_no, 1);
        }
        handler.handle(section, trim(line.substr(0, eq)), trim(line.substr(eq + 1)), line_no);
    }
    if (s.robots.empty()) {
        throw ParseError("scenario declares no robots", line_no, 1);
    }
    return s;
}

Scenario load_scenario(const std::string& path) {
    std::ifstream in(path);
    if (!in) {
        throw IoError("cannot open scenario file: " + path);
    }
    return parse_scenario(in);
}

void apply_override(Scenario& s, const std::string& key, const std::string& value) {
    static const std::map<std::string, std::string> kSectionOf = {
        {"r_obs", "obstacles"},     {"seed", "run"},
        {"p0", "field"},            {"path_loss_exp", "field"},
        {"n_bumps", "field"},       {"bump_amp", "field"},
        {"bump_len", "field"},      {"asym_gain_range", "field"},
        {"floor_db", "field"},      {"arena", "field"},
        {"controller", "controller"}, {"type", "controller"},
        {"r_c", "controller"},      {"gamma", "controller"},
        {"r_s", "controller"},      {"psi", "controller"},
        {"epsilon", "controller"},  {"slack_penalty", "controller"},
        {"sigma_f", "gp"},          {"length_scale", "gp"},
        {"noise_var", "gp"},        {"dedup_res", "gp"},
        {"cap", "gp"},              {"dt", "run"},
        {"steps", "run"},
    };
    auto it = kSectionOf.find(key);
    if (it == kSectionOf.end()) {
        throw UsageError("unknown override key: " + key);
    }
    KvHandler handler{&s};
    try {
        handler.handle(it->second, key == "controller" ? "type" : key, value, 0);
    } catch (const ParseError& e) {
        throw UsageError(std::string("bad override ") + key + "=" + value + ": " + e.what());
    }
}

std::string format_scenario(const Scenario& s) {
    std::ostringstream out;
    out << std::setprecision(17);
    out << "[robots]\n";
    for (const auto& r : s.robots) {
        out << "robot = " << r.start.x() << " " << r.start.y() << " " << r.goal.x() << " "
            << r.goal.y() << " " << r.alpha << "\n";
    }
    out << "\n[obstacles]\nr_obs = " << s.obstacles.r_obs << "\n";
    for (const auto& p : s.obstacles.points) {
        out << "point = " << p.x() << " " << p.y() << "\n";
    }
    out << "\n[field]\n"
        << "seed = " << s.field.seed << "\n"
        << "p0 = " << s.field.p0 << "\n"
        << "path_loss_exp = " << s.field.path_loss_exp << "\n"
        << "n_bumps = " << s.field.n_bumps << "\n"
        << "bump_amp = " << s.field.bump_amp << "\n"
        << "bump_len = " << s.field.bump_len << "\n"
        << "asym_gain_range = " << s.field.asym_gain_range << "\n"
        << "floor_db = " << s.field.floor_db << "\n"
        << "arena = " << s.field.arena.x_min << " " << s.field.arena.x_max << " "
        << s.field.arena.y_min << " " << s.field.arena.y_max << "\n";
    out << "\n[controller]\n";
    if (const auto* m = std::get_if<MccstController>(&s.controller)) {
        out << "type = mccst\nr_c = " << m->r_c << "\n";
    } else {
        out << "type = dcm\n";
    }
    out << "gamma = " << s.gamma << "\n"
        << "r_s = " << s.r_s << "\n"
        << "psi = " << s.psi << "\n"
        << "epsilon = " << s.epsilon << "\n"
        << "slack_penalty = " << s.slack_penalty << "\n";
    out << "\n[gp]\n"
        << "sigma_f = " << s.gp_hyper.sigma_f << "\n"
        << "length_scale = " << s.gp_hyper.length_scale << "\n"
        << "noise_var = " << s.gp_hyper.noise_var << "\n"
        << "dedup_res = " << s.dedup_res << "\n"
        << "cap = " << s.cap << "\n";
    out << "\n[run]\n"
        << "dt = " << s.dt << "\n"
        << "steps = " << s.steps << "\n"
        << "seed = " << s.seed << "\n";
    return out.str();
}

void write_trajectory_csv(std::ostream& out, const std::vector<StepRecord>& records) {
    out << "t,robot,x,y,ux_ref,uy_ref,ux,uy\n";
    out << std::setprecision(17);
    for (const auto& r : records) {
        for (std::size_t i = 0; i < r.x.size(); ++i) {
            out << r.t << "," << i << "," << r.x[i].x() << "," << r.x[i].y() << ","
                << r.u_ref(2 * i) << "," << r.u_ref(2 * i + 1) << "," << r.u_star(2 * i) << ","
                << r.u_star(2 * i + 1) << "\n";
        }
    }
}

void write_metrics_csv(std::ostream& out, const std::vector<StepRecord>& records) {
    out << "t,min_dist,lambda2,perturbation,relaxed,tree_edges\n";
    out << std::setprecision(17);
    for (const auto& r : records) {
        out << r.t << "," << r.min_dist << "," << r.lambda2 << "," << r.perturbation << ","
            << (r.relaxed ? 1 : 0) << ",";
        for (std::size_t k = 0; k < r.tree_edges.size(); ++k) {
            if (k > 0) {
                out << ";";
            }
            out << r.tree_edges[k].first << "-" << r.tree_edges[k].second;
        }
        out << "\n";
    }
}

void write_summary(std::ostream& out, const Scenario& s, const RunSummary& summary,
                   const std::vector<std::string>& overrides) {
    out << "# effective config\n" << format_scenario(s);
    if (!overrides.empty()) {
        out << "\n# overrides\n";
        for (const auto& o : overrides) {
            out << "# set " << o << "\n";
        }
    }
    out << std::setprecision(17);
    out << "\n# summary\n"
        << "steps = " << summary.steps << "\n"
        << "min_min_dist = " << summary.min_min_dist << "\n"
        << "min_lambda2 = " << summary.min_lambda2 << "\n"
        << "mean_perturbation = " << summary.mean_perturbation << "\n"
        << "std_perturbation = " << summary.std_perturbation << "\n"
        << "relaxation_count = " << summary.relaxation_count << "\n"
        << "infeasible_count = " << summary.infeasible_count << "\n";
    out << "goal_distances =";
    for (double d : summary.goal_distances) {
        out << " " << d;
    }
    out << "\n";
}

void write_field_grid_csv(std::ostream& out, const FieldSpec& field, int tx_id,
                          const Vec2& tx_pos, int rx_id, double resolution) {
    out << "x,y,rssi_db\n";
    out << std::setprecision(17);
    for (double y = field.arena.y_min; y <= field.arena.y_max + 1e-12; y += resolution) {
        for (double x = field.arena.x_min; x <= field.arena.x_max + 1e-12; x += resolution) {
            out << x << "," << y << "," << rssi(field, tx_id, tx_pos, rx_id, Vec2(x, y)) << "\n";
        }
    }
}

void write_dataset_csv(std::ostream& out, const GpModel& model) {
    out << "tx_x,tx_y,rx_x,rx_y,y_shifted_db\n";
    out << std::setprecision(17);
    for (const auto& s : model.samples()) {
        out << s.tx_pos.x() << "," << s.tx_pos.y() << "," << s.rx_pos.x() << "," << s.rx_pos.y()
            << "," << s.y << "\n";
    }
}

}  // namespace dcm
