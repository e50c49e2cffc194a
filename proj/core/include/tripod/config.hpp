#pragma once

#include <iosfwd>
#include <string>

#include "tripod/gait.hpp"
#include "tripod/sequences.hpp"
#include "tripod/simulator.hpp"

namespace tripod {

// Degrees commanded to one servo = zero_deg + direction * degrees(q).
struct ServoChannel {
    double zero_deg = 90.0;
    double direction = 1.0;
};

struct ServoCalibration {
    ServoChannel hip{90.0, 1.0};
    ServoChannel knee{0.0, -1.0};  // maps the elbow-up range [-pi, 0] onto [0, 180]
    double min_deg = 0.0;
    double max_deg = 180.0;
};

struct GaitDefaults {
    double scoot_stroke = 0.07;
    double scoot_period = 0.60;
    double skate_stroke = 0.10;
    double skate_lift = 0.04;
    double skate_period = 0.30;
    double skate_coast_fraction = 0.65;
    double shuffle_stroke = 0.07;
    double shuffle_period = 0.44;
};

struct SimDefaults {
    double tick = 0.02;
    double gravity = 9.81;
    double friction_mu = 0.8;
    double backward_efficiency = 0.7;
    double pivot_speed_threshold = 0.05;
};

struct PivotDefaults {
    double anchor_distance = 0.153;
    double duration = 1.0;
    double initial_speed = 0.30;
};

struct SequenceDefaults {
    double stair_clearance = 0.01;  // sphere clearance over the rise
    double stair_rise = 0.10;
    double stair_tread = 0.15;
    double cord_height = 0.02;
};

struct RobotConfig {
    int config_version = 1;
    RobotGeometry geometry;
    ComModel com;
    CoastModel coast;
    std::string coast_calibration =
        "steady-state fit to 0.16 m/s scooting and 0.56 m/s skating";
    GaitTuning tuning;
    GaitDefaults gaits;
    ServoCalibration servo;
    SimDefaults sim;
    PivotDefaults pivot;
    SequenceDefaults sequences;

    // One message per violated invariant; empty when valid.
    std::vector<std::string> validate() const;

    SimOptions sim_options() const;
    CordGaitParams cord_params() const;

    GaitSchedule default_scoot() const;
    GaitSchedule default_skate() const;
    GaitSchedule default_shuffle() const;
};

// Parses and validates a config file. Missing keys keep their defaults;
// an empty file yields the default config. Throws ParseError on bad
// syntax or unknown keys, ValidationError listing every violated
// invariant.
RobotConfig load_config(const std::string& path);
RobotConfig parse_config(std::istream& in);

std::string config_to_text(const RobotConfig& config);
void save_config(const RobotConfig& config, const std::string& path);

}  // namespace tripod
