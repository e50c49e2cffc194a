#pragma once

#include <optional>
#include <string>
#include <vector>

#include "tripod/gait.hpp"
#include "tripod/stability.hpp"

namespace tripod {

struct StairSpec {
    double rise = 0.1;         // m
    double tread_depth = 0.15; // m
};

struct Feasibility {
    bool feasible = true;
    std::vector<std::string> reasons;
};

// Smallest ground circle containing all end-effector contacts in the
// standing pose.
double operating_circle_diameter(const RobotGeometry& geom, const GaitTuning& tuning = {});

// A stair is climbable when the tread is at least as deep as the operating
// circle and the rise stays under half the hip height.
Feasibility stair_feasible(const StairSpec& stair, const RobotGeometry& geom,
                           const GaitTuning& tuning = {});

// One scripted step of a multi-gait sequence. Elevation and advance are
// cumulative bookkeeping of the sphere center relative to the start pose;
// chaining requires each step to begin where the previous one ended.
struct SequenceStep {
    std::string label;
    std::string action;
    SupportMode expected_support = SupportMode::AllFeet;
    ContactSet contacts;  // representative body-frame ground contacts
    double start_elevation = 0.0;
    double end_elevation = 0.0;
    double start_advance = 0.0;
    double end_advance = 0.0;
    std::optional<GaitSchedule> schedule;  // pose hold or crossing gait
    int crossing_phase = -1;  // airborne crossing window (phase index)
    LegId crossing_leg = LegId::A;
    int heading_changes = 0;
};

// The seven-step stair script, panels A through G. Throws InfeasibleError
// when the stair fails the feasibility predicate.
std::vector<SequenceStep> build_stair_sequence(const StairSpec& stair,
                                               const RobotGeometry& geom,
                                               const GaitTuning& tuning = {},
                                               double sphere_clearance = 0.01);

struct CordGaitParams {
    double skate_stroke = 0.10;
    double skate_lift = 0.04;
    double skate_period = 0.30;
    double skate_coast_fraction = 0.65;
    double shuffle_stroke = 0.07;
    double shuffle_period = 0.44;
};

// Cord traversal: backward skate lifts the leading leg over, a backward
// shuffle carries the sphere past, then two heading changes with forward
// skating strides lift the trailing legs over. Throws CordTooHighError
// when the cord exceeds the skate lift height.
std::vector<SequenceStep> build_cord_sequence(double cord_height,
                                              const RobotGeometry& geom,
                                              const GaitTuning& tuning = {},
                                              const CordGaitParams& params = {});

struct SequenceTrace {
    std::size_t steps = 0;
    bool chain_ok = true;
    double max_chain_gap = 0.0;
    bool supports_match = true;
    std::vector<SupportMode> support_trace;
    double final_elevation = 0.0;
    double final_advance = 0.0;
    int heading_changes = 0;
    double min_crossing_clearance = 0.0;  // over all airborne crossing windows
};

// Kinematic bookkeeping over the step chain: verifies step chaining and
// support modes, and samples airborne-leg clearance on crossing steps.
SequenceTrace execute_sequence(const std::vector<SequenceStep>& steps,
                               const RobotGeometry& geom, double tick = 0.02);

}  // namespace tripod
