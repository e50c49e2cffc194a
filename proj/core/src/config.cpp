#include "tripod/config.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

// Shortest decimal form that parses back to the same double.
std::string format_double(double v) {
    char buf[64];
    for (int precision = 15; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof buf, "%.*g", precision, v);
        if (std::strtod(buf, nullptr) == v) break;
    }
    return buf;
}

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

double parse_number(const std::string& raw, const std::string& key) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(raw, &used);
    } catch (const std::exception&) {
        throw ParseError("config: key '" + key + "' has a non-numeric value '" + raw + "'");
    }
    if (used != raw.size()) {
        throw ParseError("config: key '" + key + "' has trailing junk in '" + raw + "'");
    }
    return v;
}

// Field bindings: every numeric config key maps onto one double.
struct Binding {
    const char* key;
    std::function<double*(RobotConfig&)> field;
};

const std::vector<Binding>& bindings() {
    static const std::vector<Binding> b = {
        {"geometry.L0", [](RobotConfig& c) { return &c.geometry.L0; }},
        {"geometry.L1", [](RobotConfig& c) { return &c.geometry.L1; }},
        {"geometry.L2", [](RobotConfig& c) { return &c.geometry.L2; }},
        {"geometry.d", [](RobotConfig& c) { return &c.geometry.d; }},
        {"geometry.sphere_radius", [](RobotConfig& c) { return &c.geometry.sphere_radius; }},
        {"geometry.body_length", [](RobotConfig& c) { return &c.geometry.body_length; }},
        {"geometry.hip_height", [](RobotConfig& c) { return &c.geometry.hip_height; }},
        {"geometry.q1_min", [](RobotConfig& c) { return &c.geometry.limits.q1_min; }},
        {"geometry.q1_max", [](RobotConfig& c) { return &c.geometry.limits.q1_max; }},
        {"geometry.q2_min", [](RobotConfig& c) { return &c.geometry.limits.q2_min; }},
        {"geometry.q2_max", [](RobotConfig& c) { return &c.geometry.limits.q2_max; }},
        {"com.hub_fraction", [](RobotConfig& c) { return &c.com.hub_fraction; }},
        {"com.sphere_fraction", [](RobotConfig& c) { return &c.com.sphere_fraction; }},
        {"com.leg_fraction", [](RobotConfig& c) { return &c.com.leg_fraction; }},
        {"com.hub_height", [](RobotConfig& c) { return &c.com.hub_height; }},
        {"coast.decay_rate", [](RobotConfig& c) { return &c.coast.decay_rate; }},
        {"coast.push_gain", [](RobotConfig& c) { return &c.coast.push_gain; }},
        {"tuning.stance_radius", [](RobotConfig& c) { return &c.tuning.stance_radius; }},
        {"tuning.transition_time", [](RobotConfig& c) { return &c.tuning.transition_time; }},
        {"tuning.body_roll", [](RobotConfig& c) { return &c.tuning.body_roll; }},
        {"tuning.skate_body_roll", [](RobotConfig& c) { return &c.tuning.skate_body_roll; }},
        {"tuning.max_body_roll", [](RobotConfig& c) { return &c.tuning.max_body_roll; }},
        {"tuning.safety_margin", [](RobotConfig& c) { return &c.tuning.safety_margin; }},
        {"tuning.skate_stroke_start",
         [](RobotConfig& c) { return &c.tuning.skate_stroke_start; }},
        {"gait.scoot.stroke_length", [](RobotConfig& c) { return &c.gaits.scoot_stroke; }},
        {"gait.scoot.period", [](RobotConfig& c) { return &c.gaits.scoot_period; }},
        {"gait.skate.stroke_length", [](RobotConfig& c) { return &c.gaits.skate_stroke; }},
        {"gait.skate.lift_height", [](RobotConfig& c) { return &c.gaits.skate_lift; }},
        {"gait.skate.period", [](RobotConfig& c) { return &c.gaits.skate_period; }},
        {"gait.skate.coast_fraction",
         [](RobotConfig& c) { return &c.gaits.skate_coast_fraction; }},
        {"gait.shuffle.stroke_length",
         [](RobotConfig& c) { return &c.gaits.shuffle_stroke; }},
        {"gait.shuffle.period", [](RobotConfig& c) { return &c.gaits.shuffle_period; }},
        {"servo.hip.zero_deg", [](RobotConfig& c) { return &c.servo.hip.zero_deg; }},
        {"servo.hip.direction", [](RobotConfig& c) { return &c.servo.hip.direction; }},
        {"servo.knee.zero_deg", [](RobotConfig& c) { return &c.servo.knee.zero_deg; }},
        {"servo.knee.direction", [](RobotConfig& c) { return &c.servo.knee.direction; }},
        {"servo.min_deg", [](RobotConfig& c) { return &c.servo.min_deg; }},
        {"servo.max_deg", [](RobotConfig& c) { return &c.servo.max_deg; }},
        {"sim.tick", [](RobotConfig& c) { return &c.sim.tick; }},
        {"sim.gravity", [](RobotConfig& c) { return &c.sim.gravity; }},
        {"sim.friction_mu", [](RobotConfig& c) { return &c.sim.friction_mu; }},
        {"sim.backward_efficiency",
         [](RobotConfig& c) { return &c.sim.backward_efficiency; }},
        {"sim.pivot_speed_threshold",
         [](RobotConfig& c) { return &c.sim.pivot_speed_threshold; }},
        {"pivot.anchor_distance", [](RobotConfig& c) { return &c.pivot.anchor_distance; }},
        {"pivot.duration", [](RobotConfig& c) { return &c.pivot.duration; }},
        {"pivot.initial_speed", [](RobotConfig& c) { return &c.pivot.initial_speed; }},
        {"sequence.stair_clearance",
         [](RobotConfig& c) { return &c.sequences.stair_clearance; }},
        {"sequence.stair_rise", [](RobotConfig& c) { return &c.sequences.stair_rise; }},
        {"sequence.stair_tread", [](RobotConfig& c) { return &c.sequences.stair_tread; }},
        {"sequence.cord_height", [](RobotConfig& c) { return &c.sequences.cord_height; }},
    };
    return b;
}

}  // namespace

std::vector<std::string> RobotConfig::validate() const {
    std::vector<std::string> bad = geometry.validate();
    auto check = [&](bool ok, const std::string& msg) {
        if (!ok) bad.push_back(msg);
    };
    check(config_version == 1, "config_version must be 1");
    check(com.hub_fraction >= 0.0 && com.sphere_fraction >= 0.0 && com.leg_fraction >= 0.0,
          "com mass fractions must be non-negative");
    check(com.hub_fraction + com.sphere_fraction + 3.0 * com.leg_fraction <= 1.0 + 1e-9,
          "com mass fractions must not exceed 1 in total");
    check(com.hub_height > 0.0, "com.hub_height must be positive");
    check(coast.push_gain > 0.0 && coast.push_gain <= 1.0,
          "coast.push_gain must lie in (0, 1]");
    check(coast.decay_rate >= 0.0, "coast.decay_rate must be >= 0");
    check(tuning.stance_radius > 0.0, "tuning.stance_radius must be positive");
    check(tuning.transition_time > 0.0, "tuning.transition_time must be positive");
    check(tuning.max_body_roll > 0.0, "tuning.max_body_roll must be positive");
    check(std::abs(tuning.body_roll) <= tuning.max_body_roll,
          "tuning.body_roll exceeds tuning.max_body_roll");
    check(std::abs(tuning.skate_body_roll) <= tuning.max_body_roll,
          "tuning.skate_body_roll exceeds tuning.max_body_roll");
    check(tuning.safety_margin >= 0.0, "tuning.safety_margin must be >= 0");
    check(gaits.scoot_period > 0.0 && gaits.skate_period > 0.0 && gaits.shuffle_period > 0.0,
          "gait periods must be positive");
    check(gaits.skate_lift > 0.0, "gait.skate.lift_height must be positive");
    check(gaits.skate_coast_fraction > 0.0 && gaits.skate_coast_fraction < 1.0,
          "gait.skate.coast_fraction must lie in (0, 1)");
    check(servo.min_deg < servo.max_deg, "servo.min_deg must be below servo.max_deg");
    check(std::abs(std::abs(servo.hip.direction) - 1.0) < 1e-12 &&
              std::abs(std::abs(servo.knee.direction) - 1.0) < 1e-12,
          "servo directions must be +1 or -1");
    auto maps_into_range = [&](const ServoChannel& ch, double q_lo, double q_hi) {
        const double a = ch.zero_deg + ch.direction * q_lo * 180.0 / std::numbers::pi;
        const double b = ch.zero_deg + ch.direction * q_hi * 180.0 / std::numbers::pi;
        return std::min(a, b) >= servo.min_deg - 1e-9 &&
               std::max(a, b) <= servo.max_deg + 1e-9;
    };
    check(maps_into_range(servo.hip, geometry.limits.q1_min, geometry.limits.q1_max),
          "servo.hip calibration maps the hip range outside [min_deg, max_deg]");
    check(maps_into_range(servo.knee, geometry.limits.q2_min, geometry.limits.q2_max),
          "servo.knee calibration maps the knee range outside [min_deg, max_deg]");
    check(sim.tick > 0.0, "sim.tick must be positive");
    check(sim.gravity > 0.0, "sim.gravity must be positive");
    check(sim.friction_mu > 0.0, "sim.friction_mu must be positive");
    check(sim.backward_efficiency > 0.0 && sim.backward_efficiency <= 1.0,
          "sim.backward_efficiency must lie in (0, 1]");
    check(sim.pivot_speed_threshold >= 0.0, "sim.pivot_speed_threshold must be >= 0");
    check(pivot.anchor_distance > 0.0, "pivot.anchor_distance must be positive");
    check(pivot.duration >= 0.0, "pivot.duration must be >= 0");
    check(pivot.initial_speed >= 0.0, "pivot.initial_speed must be >= 0");
    check(sequences.stair_clearance >= 0.0, "sequence.stair_clearance must be >= 0");
    check(sequences.stair_rise > 0.0 && sequences.stair_tread > 0.0,
          "sequence stair dimensions must be positive");
    check(sequences.cord_height >= 0.0, "sequence.cord_height must be >= 0");
    return bad;
}

SimOptions RobotConfig::sim_options() const {
    SimOptions o;
    o.tick = sim.tick;
    o.gravity = sim.gravity;
    o.friction_mu = sim.friction_mu;
    o.backward_efficiency = sim.backward_efficiency;
    o.pivot_speed_threshold = sim.pivot_speed_threshold;
    o.com = com;
    return o;
}

CordGaitParams RobotConfig::cord_params() const {
    CordGaitParams p;
    p.skate_stroke = gaits.skate_stroke;
    p.skate_lift = gaits.skate_lift;
    p.skate_period = gaits.skate_period;
    p.skate_coast_fraction = gaits.skate_coast_fraction;
    p.shuffle_stroke = gaits.shuffle_stroke;
    p.shuffle_period = gaits.shuffle_period;
    return p;
}

GaitSchedule RobotConfig::default_scoot() const {
    return build_scoot(gaits.scoot_stroke, gaits.scoot_period, geometry, tuning);
}

GaitSchedule RobotConfig::default_skate() const {
    return build_skate(gaits.skate_stroke, gaits.skate_lift, gaits.skate_period,
                       gaits.skate_coast_fraction, geometry, tuning);
}

GaitSchedule RobotConfig::default_shuffle() const {
    return build_shuffle(gaits.shuffle_stroke, gaits.shuffle_period, geometry, tuning);
}

RobotConfig parse_config(std::istream& in) {
    std::map<std::string, std::string> kv;
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        // Strip comments, respecting quoted strings.
        bool quoted = false;
        std::string body;
        for (char ch : line) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            body += ch;
        }
        body = trim(body);
        if (body.empty()) continue;
        const auto eq = body.find('=');
        if (eq == std::string::npos) {
            throw ParseError("config: line " + std::to_string(line_no) +
                             " is not a 'key = value' pair");
        }
        const std::string key = trim(body.substr(0, eq));
        const std::string value = trim(body.substr(eq + 1));
        if (key.empty() || value.empty()) {
            throw ParseError("config: line " + std::to_string(line_no) +
                             " has an empty key or value");
        }
        if (!kv.emplace(key, value).second) {
            throw ParseError("config: duplicate key '" + key + "'");
        }
    }

    RobotConfig config;
    for (const auto& [key, value] : kv) {
        if (key == "config_version") {
            config.config_version = static_cast<int>(parse_number(value, key));
            continue;
        }
        if (key == "coast.calibration") {
            if (value.size() < 2 || value.front() != '"' || value.back() != '"') {
                throw ParseError("config: key 'coast.calibration' must be quoted");
            }
            config.coast_calibration = value.substr(1, value.size() - 2);
            continue;
        }
        if (key == "geometry.leg_azimuths") {
            if (value.front() != '[' || value.back() != ']') {
                throw ParseError("config: key 'geometry.leg_azimuths' must be a [a, b, c] list");
            }
            std::stringstream items(value.substr(1, value.size() - 2));
            std::string item;
            int i = 0;
            while (std::getline(items, item, ',')) {
                if (i >= 3) break;
                config.geometry.leg_azimuths[i++] = parse_number(trim(item), key);
            }
            if (i != 3) {
                throw ParseError("config: 'geometry.leg_azimuths' needs exactly 3 angles");
            }
            continue;
        }
        bool matched = false;
        for (const Binding& b : bindings()) {
            if (key == b.key) {
                *b.field(config) = parse_number(value, key);
                matched = true;
                break;
            }
        }
        if (!matched) throw ParseError("config: unknown key '" + key + "'");
    }

    const std::vector<std::string> bad = config.validate();
    if (!bad.empty()) {
        std::string msg = "config validation failed:";
        for (const std::string& m : bad) msg += "\n  - " + m;
        throw ValidationError(msg, bad);
    }
    return config;
}

RobotConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("config: cannot open '" + path + "'");
    return parse_config(in);
}

std::string config_to_text(const RobotConfig& c) {
    std::ostringstream os;
    os << "# robot configuration\n";
    os << "config_version = " << c.config_version << "\n\n";
    os << "# lengths in meters, angles in radians, times in seconds\n";
    RobotConfig mutable_copy = c;
    for (const Binding& b : bindings()) {
        os << b.key << " = " << format_double(*b.field(mutable_copy)) << "\n";
    }
    os << "geometry.leg_azimuths = [" << format_double(c.geometry.leg_azimuths[0]) << ", "
       << format_double(c.geometry.leg_azimuths[1]) << ", "
       << format_double(c.geometry.leg_azimuths[2]) << "]\n";
    os << "coast.calibration = \"" << c.coast_calibration << "\"\n";
    return os.str();
}

void save_config(const RobotConfig& config, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("config: cannot write '" + path + "'");
    out << config_to_text(config);
}

}  // namespace tripod
