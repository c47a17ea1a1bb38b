#include "tslam/config.hpp"

#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <vector>

namespace tslam {

namespace {

struct Field {
    std::string key;
    std::function<std::string(const Config&)> get;
    std::function<void(Config&, const std::string&)> set;
};

template <typename T>
T parse_number(const std::string& key, const std::string& value) {
    std::istringstream in(value);
    T out;
    in >> out;
    if (in.fail() || !(in >> std::ws).eof()) {
        throw ConfigInvalid("bad value for " + key + ": '" + value + "'");
    }
    return out;
}

std::string format_number(double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
}

std::vector<Field> field_table() {
    std::vector<Field> fields;
    auto add_int = [&](const std::string& key, int Config::*member) {
        fields.push_back({key,
                          [member](const Config& c) { return std::to_string(c.*member); },
                          [member, key](Config& c, const std::string& v) {
                              c.*member = parse_number<int>(key, v);
                          }});
    };
    auto add_double = [&](const std::string& key, double Config::*member) {
        fields.push_back({key,
                          [member](const Config& c) { return format_number(c.*member); },
                          [member, key](Config& c, const std::string& v) {
                              c.*member = parse_number<double>(key, v);
                          }});
    };
    add_int("pyramid.levels", &Config::pyramid_levels);
    add_int("klt.window", &Config::klt_window);
    add_double("corner.threshold", &Config::corner_threshold);
    add_int("corner.grid", &Config::corner_grid);
    add_int("track.max_features", &Config::max_features);
    add_double("huber.text", &Config::huber_text);
    add_double("huber.point", &Config::huber_point);
    add_double("track.point_chi2", &Config::point_chi2_gate);
    add_double("track.text_outlier_ratio", &Config::text_outlier_ratio);
    add_double("track.zncc_min", &Config::zncc_gate);
    add_double("track.perpendicular_deg", &Config::perpendicular_deg);
    add_double("weight.sigma_rep", &Config::sigma_rep);
    add_double("weight.sigma_photo", &Config::sigma_photo);
    add_int("track.min_inliers", &Config::min_tracking_inliers);
    add_double("kf.min_ratio", &Config::kf_min_ratio);
    add_double("kf.max_flow", &Config::kf_max_flow);
    add_int("kf.max_gap", &Config::kf_max_gap);
    add_int("text.min_obs", &Config::text_min_obs);
    add_double("text.normal_max_deg", &Config::text_normal_max_deg);
    add_int("cull.max_bad", &Config::cull_max_bad);
    add_double("cull.bad_ratio", &Config::cull_bad_ratio);
    add_int("cull.min_good", &Config::cull_min_good);
    add_int("ba.window", &Config::ba_window);
    add_int("ba.iterations", &Config::ba_iterations);
    add_double("lm.lambda_init", &Config::lm_lambda_init);
    add_double("lm.lambda_up", &Config::lm_lambda_up);
    add_double("lm.lambda_down", &Config::lm_lambda_down);
    fields.push_back({"loop.enabled",
                      [](const Config& c) { return c.loop_enabled ? "1" : "0"; },
                      [](Config& c, const std::string& v) {
                          if (v == "1" || v == "true") c.loop_enabled = true;
                          else if (v == "0" || v == "false") c.loop_enabled = false;
                          else throw ConfigInvalid("bad value for loop.enabled: " + v);
                      }});
    add_int("loop.scene_min", &Config::loop_scene_min);
    add_int("loop.min_inliers", &Config::loop_min_inliers);
    add_int("loop.top_k", &Config::loop_top_k);
    add_int("loop.sim3_min_inliers", &Config::loop_sim3_min_inliers);
    add_double("loop.search_window", &Config::loop_search_window);
    add_int("loop.hamming_max", &Config::loop_hamming_max);
    add_double("loc.gt_radius", &Config::loc_gt_radius);
    fields.push_back({"seed",
                      [](const Config& c) { return std::to_string(c.seed); },
                      [](Config& c, const std::string& v) {
                          c.seed = parse_number<std::uint64_t>("seed", v);
                      }});
    return fields;
}

const std::vector<Field>& fields() {
    static const std::vector<Field> table = field_table();
    return table;
}

} // namespace

void Config::set(const std::string& key, const std::string& value) {
    for (const Field& f : fields()) {
        if (f.key == key) {
            f.set(*this, value);
            if (key == "pyramid.levels" && pyramid_levels != 3) {
                throw ConfigInvalid("pyramid.levels is fixed at 3");
            }
            return;
        }
    }
    throw ConfigInvalid("unknown key '" + key + "'");
}

Config Config::load(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigInvalid("cannot open config " + path);
    Config cfg;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const size_t hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        const auto strip = [](std::string s) {
            const size_t b = s.find_first_not_of(" \t\r");
            if (b == std::string::npos) return std::string();
            const size_t e = s.find_last_not_of(" \t\r");
            return s.substr(b, e - b + 1);
        };
        line = strip(line);
        if (line.empty()) continue;
        const size_t eq = line.find('=');
        if (eq == std::string::npos) {
            throw ConfigInvalid(path + ":" + std::to_string(line_no) + " expected key=value");
        }
        cfg.set(strip(line.substr(0, eq)), strip(line.substr(eq + 1)));
    }
    return cfg;
}

void Config::save(const std::string& path) const {
    std::ofstream out(path);
    if (!out) throw ConfigInvalid("cannot write config " + path);
    for (const Field& f : fields()) out << f.key << " = " << f.get(*this) << "\n";
}

} // namespace tslam
