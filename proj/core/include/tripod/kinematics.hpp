#pragma once

#include <array>
#include <numbers>
#include <string>
#include <vector>

#include "tripod/geometry.hpp"

namespace tripod {

// Servo-imposed joint range, in radians after calibration mapping.
// The hip sweeps symmetrically about its 90 deg servo midpoint; the knee
// servo is mapped over the full elbow-up range [-pi, 0].
struct JointLimits {
    double q1_min = -std::numbers::pi / 2;
    double q1_max = std::numbers::pi / 2;
    double q2_min = -std::numbers::pi;
    double q2_max = 0.0;
};

// Link lengths and mounting offsets of one leg plus whole-robot scale
// parameters. All three legs are identical and mounted 120 deg apart.
struct RobotGeometry {
    double L0 = 0.100;  // sphere center to hip plane (m)
    double L1 = 0.120;  // upper leg link (m)
    double L2 = 0.120;  // lower leg link (m)
    double d = 0.030;   // planar hip offset from the body axis (m)

    double sphere_radius = 0.100;  // center sphere, 200 mm diameter
    double body_length = 0.225;    // normalization length for BL/s
    double hip_height = 0.200;     // nominal hip height when standing (m)

    std::array<double, 3> leg_azimuths{0.0, 2.0 * std::numbers::pi / 3.0,
                                       4.0 * std::numbers::pi / 3.0};
    JointLimits limits;

    // Distance from the sphere center to the hip pivot in the leg plane.
    double shoulder_reach() const { return std::hypot(L0, d); }
    // Ground line in the leg-plane frame (origin at the sphere center).
    double ground_y() const { return -sphere_radius; }

    // Returns one message per violated invariant; empty when valid.
    std::vector<std::string> validate() const;
};

// Body attitude as commanded or measured: pitch and yaw in radians.
struct TiltInput {
    double theta = 0.0;
    double psi = 0.0;
};

// q0 is the derived tilt of the leg plane; q1/q2 the hip and knee joints.
// The elbow-up branch keeps q2 <= 0 always.
struct JointAngles {
    double q0 = std::numbers::pi / 2;
    double q1 = 0.0;
    double q2 = 0.0;
};

// Foot position in the active leg's plane: x radially outward from the
// sphere center, y up along the body axis. The ground sits at
// y = -sphere_radius when the body is level.
struct FootTarget {
    double x = 0.0;
    double y = 0.0;
};

struct WorkspaceQuery {
    bool contained = false;
    double margin = 0.0;  // signed distance to the nearest annulus boundary (m)
};

// Tilt of the leg plane with the vertical axis from body pitch/yaw.
// Returns pi/2 at zero tilt (the formula's reference), 0 when the leg
// plane lies flat; always in [0, pi/2] and independent of geometry scale.
double tilt_angle(const TiltInput& tilt, const RobotGeometry& geom);

// Analytic two-link inverse kinematics for the active leg.
// Throws UnreachableError outside the annulus, JointLimitError when the
// solution exists but exceeds the servo range.
JointAngles leg_ik(const FootTarget& target, double q0, const RobotGeometry& geom);

// Forward chain: exact inverse of leg_ik for elbow-up configurations.
FootTarget leg_fk(const JointAngles& angles, const RobotGeometry& geom);

// Reachability plus signed margin to the annulus boundary. Contained means
// leg_ik succeeds: inside the annulus and within joint limits.
WorkspaceQuery workspace_contains(const FootTarget& target, double q0,
                                  const RobotGeometry& geom);

}  // namespace tripod
