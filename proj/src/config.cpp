#include "obbtrack/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace obbtrack {

namespace {

struct KeyBinding {
    const char* name;
    double* (*dval)(RunConfig&);
    int* (*ival)(RunConfig&);
};

#define BIND_D(key, expr) {key, [](RunConfig& c) -> double* { return &(expr); }, nullptr}
#define BIND_I(key, expr) {key, nullptr, [](RunConfig& c) -> int* { return &(expr); }}

// clang-format off
const KeyBinding kBindings[] = {
    BIND_D("part_iou_threshold",  c.part_iou_threshold),
    BIND_D("score_floor",         c.score_floor),
    BIND_I("n_init",              c.tracker.n_init),
    BIND_I("max_age",             c.tracker.max_age),
    BIND_D("min_iou",             c.tracker.min_iou),
    BIND_D("q_pos",               c.tracker.noise.q_pos),
    BIND_D("q_vel",               c.tracker.noise.q_vel),
    BIND_D("q_ang",               c.tracker.noise.q_ang),
    BIND_D("r_pos",               c.tracker.noise.r_pos),
    BIND_D("r_ang",               c.tracker.noise.r_ang),
    BIND_D("p0_pos",              c.tracker.noise.p0_pos),
    BIND_D("p0_ang",              c.tracker.noise.p0_ang),
    BIND_D("p0_vel",              c.tracker.noise.p0_vel),
    BIND_D("miss_rate",           c.synth_noise.miss_rate),
    BIND_D("false_positive_rate", c.synth_noise.false_positive_rate),
    BIND_D("jitter_sigma",        c.synth_noise.jitter_sigma),
    BIND_D("box_jitter_sigma",    c.synth_noise.box_jitter_sigma),
    BIND_D("max_turn_deg",        c.max_turn_deg),
};
// clang-format on

#undef BIND_D
#undef BIND_I

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r\n");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r\n");
    return s.substr(a, b - a + 1);
}

}  // namespace

std::vector<std::string> config_keys() {
    std::vector<std::string> keys;
    for (const auto& b : kBindings) keys.emplace_back(b.name);
    return keys;
}

void set_config_value(RunConfig& cfg, const std::string& key, const std::string& value) {
    for (const auto& b : kBindings) {
        if (key != b.name) continue;
        try {
            std::size_t used = 0;
            if (b.dval != nullptr) {
                *b.dval(cfg) = std::stod(value, &used);
            } else {
                *b.ival(cfg) = std::stoi(value, &used);
            }
            if (trim(value.substr(used)) != "") throw std::invalid_argument("trailing junk");
        } catch (const std::exception&) {
            throw std::invalid_argument("bad value '" + value + "' for key '" + key + "'");
        }
        return;
    }
    throw std::invalid_argument("unknown key '" + key + "'");
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("config: cannot open '" + path + "'");

    RunConfig cfg;
    std::string line;
    long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        const std::string body = trim(line);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw std::runtime_error("config: line " + std::to_string(line_no) +
                                     ": expected 'key = value'");
        }
        try {
            set_config_value(cfg, trim(body.substr(0, eq)), trim(body.substr(eq + 1)));
        } catch (const std::invalid_argument& e) {
            throw std::runtime_error("config: line " + std::to_string(line_no) + ": " + e.what());
        }
    }
    return cfg;
}

std::string dump_config(const RunConfig& cfg) {
    std::ostringstream out;
    out.precision(10);
    RunConfig& mutable_cfg = const_cast<RunConfig&>(cfg);
    for (const auto& b : kBindings) {
        out << b.name << " = ";
        if (b.dval != nullptr) {
            out << *b.dval(mutable_cfg);
        } else {
            out << *b.ival(mutable_cfg);
        }
        out << "\n";
    }
    return out.str();
}

}  // namespace obbtrack
