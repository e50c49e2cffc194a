#pragma once

#include <optional>
#include <vector>

#include "tripod/gait.hpp"
#include "tripod/stability.hpp"

namespace tripod {

// Planar body state. Heading is the velocity direction and is meaningful
// only while speed > 1e-9 m/s; orientation is the body-frame yaw and is
// always defined.
struct BodyState {
    Vec2 position;
    double heading = 0.0;
    double orientation = 0.0;
    double speed = 0.0;
    TiltInput tilt;
};

struct TrajectorySample {
    double t = 0.0;
    BodyState body;
    ContactSet contacts;
    SupportMode support = SupportMode::AllFeet;
    double margin = 0.0;
};

// First-order stand-in for rolling momentum: pushes transfer push_gain of
// the stroke velocity to the body, and the body speed decays as
// exp(-decay_rate * t) whenever nothing is pushing. Defaults are the
// frozen calibration against the scooting and skating speed targets.
struct CoastModel {
    double decay_rate = 6.03174603174603;   // 1/s
    double push_gain = 0.651428571428571;  // dimensionless, in (0, 1]
};

struct SimOptions {
    double tick = 0.02;               // control tick (s)
    bool ignore_stability = false;    // skip the pre-run stability gate
    double gravity = 9.81;            // m/s^2
    double friction_mu = 0.8;         // static friction for braked contacts
    double backward_efficiency = 0.7; // pull strokes transfer less
    double pivot_speed_threshold = 0.05;  // m/s
    ComModel com;
};

struct Trajectory {
    std::vector<TrajectorySample> samples;
    double period = 0.0;  // one stride / maneuver duration (s)
    int strides = 0;

    double elapsed() const;
    Vec2 net_displacement() const;
    BodyState end_state() const;
};

// Integrates a periodic schedule for n_strides. Frictional grounded feet
// act as no-slip anchors, rolling contacts are frictionless, and the body
// coasts with the coast model between pushes.
Trajectory simulate(const GaitSchedule& schedule, const RobotGeometry& geom,
                    const CoastModel& coast, int n_strides,
                    const SimOptions& options = {}, const BodyState& initial = {});

struct VelocityReport {
    double mps = 0.0;
    double blps = 0.0;
};

// Net displacement over elapsed time across an integer number of strides.
VelocityReport average_velocity(const Trajectory& trajectory, const RobotGeometry& geom);

// Circular arc about the planted foot; heading and orientation rotate
// together. Throws NoMomentumError below the speed threshold.
Trajectory simulate_pivot(const BodyState& initial, const PivotManeuver& maneuver,
                          const RobotGeometry& geom, const SimOptions& options = {});

// Instantaneous heading change by re-selecting the leading leg; the body
// never rotates.
BodyState change_heading(const BodyState& state, LegId old_leading,
                         LegId new_leading, const RobotGeometry& geom);

// Radius of the largest circle inscribable in the turn region of the
// path. Instantaneous heading switches give 0; paths without a turn give
// nullopt.
std::optional<double> turning_radius(const Trajectory& trajectory);

// Gravity-driven rolling down an incline against the coast model's decay;
// speed approaches gravity*sin(incline)/decay_rate. With braked contacts
// the robot holds position while tan(incline) stays under friction_mu.
Trajectory incline_roll(const BodyState& initial, double incline,
                        const CoastModel& coast, double duration,
                        const RobotGeometry& geom, const SimOptions& options = {},
                        bool braked = false);

// Appends b to a, shifting b's timestamps past the end of a.
Trajectory concat(const Trajectory& a, const Trajectory& b);

}  // namespace tripod
