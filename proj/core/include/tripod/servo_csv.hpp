#pragma once

#include <string>
#include <vector>

#include "tripod/config.hpp"
#include "tripod/gait.hpp"
#include "tripod/sequences.hpp"
#include "tripod/simulator.hpp"

namespace tripod {

struct ServoRow {
    double t_ms = 0.0;
    LegId leg = LegId::A;
    std::string joint;  // hip | knee | effector
    double angle_deg = 0.0;
    std::string contact_mode;
};

// One cycle of the schedule sampled at the control tick: 9 channels per
// tick (hip, knee, effector for each leg), angles in calibrated servo
// degrees quantized to 0.1 deg. Byte-deterministic for fixed inputs.
// Throws JointLimitError if any commanded angle leaves the servo range.
std::string export_servo_schedule(const GaitSchedule& schedule, const RobotConfig& config);

// Concatenated per-step export with "# step:<label>" boundary markers.
std::string export_sequence_schedule(const std::vector<SequenceStep>& steps,
                                     const RobotConfig& config);

std::vector<ServoRow> parse_servo_schedule(const std::string& csv);

// Inverse of the calibration mapping: servo degrees back to radians.
double servo_to_joint(double angle_deg, const ServoChannel& channel);

std::string trajectory_csv(const Trajectory& trajectory);

void write_text_file(const std::string& path, const std::string& text);

}  // namespace tripod
