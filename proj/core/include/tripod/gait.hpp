#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

#include "tripod/kinematics.hpp"

namespace tripod {

// Hybrid end effector state: extended bearing rolls, retracted rubber
// foot grips.
enum class ContactMode { Rolling, Frictional };

enum class LegId { A = 0, B = 1, C = 2 };
enum class Direction { Forward, Backward };
enum class GaitKind { Scoot, Skate, Shuffle, Stand, Brake, Pivot };

const char* to_string(ContactMode mode);
const char* to_string(LegId leg);

struct LegState {
    LegId leg_id = LegId::A;
    JointAngles joints;
    ContactMode contact = ContactMode::Rolling;
    bool grounded = true;
};

// One leg's trajectory over a phase: linear sweep from start to end in the
// leg-plane frame. A transitioning leg is switching contact mode and
// exerts no propulsion.
struct LegPhaseTrack {
    FootTarget start;
    FootTarget end;
    ContactMode contact = ContactMode::Rolling;
    bool grounded = true;
    bool transitioning = false;
};

struct GaitPhase {
    std::string name;
    double duration = 0.0;  // s, > 0
    std::array<LegPhaseTrack, 3> legs;
    double body_roll = 0.0;      // stabilizing lean about the sphere contact axis (rad)
    bool sphere_engaged = true;  // sphere counts as a support point

    int ground_contacts() const;
};

struct LegSample {
    FootTarget target;
    double velocity_x = 0.0;  // leg-plane stroke rate (m/s)
    double velocity_y = 0.0;
    ContactMode contact = ContactMode::Rolling;
    bool grounded = true;
    bool transitioning = false;
};

struct ScheduleSample {
    std::array<LegSample, 3> legs;
    double body_roll = 0.0;
    bool sphere_engaged = true;
    std::size_t phase_index = 0;
};

// Tunables shared by the gait builders.
struct GaitTuning {
    double stance_radius = 0.06;      // passive feet, leg-plane x (m)
    double transition_time = 0.15;    // contact-mode switch (s)
    double body_roll = 0.05;          // lean during scoot/shuffle strokes (rad)
    double skate_body_roll = 0.08;    // skate leans the entire stride (rad)
    double max_body_roll = 0.10;      // rad
    double safety_margin = 0.005;     // workspace margin floor for strokes (m)
    double skate_stroke_start = 0.03; // skate plants closer in (m)
    LegId active_leg = LegId::A;
};

// Periodic schedule: the final phase returns every leg to its initial
// target. Carries its build recipe so reverse() can rebuild exactly.
struct GaitSchedule {
    std::string name;
    GaitKind kind = GaitKind::Stand;
    std::vector<GaitPhase> phases;
    LegId active_leg = LegId::A;
    Direction direction = Direction::Forward;

    double stroke_length = 0.0;  // signed; negative pulls
    double stroke_start = 0.0;
    double lift_height = 0.0;
    double coast_fraction = 0.0;
    GaitTuning tuning;

    double period() const;
    // Cumulative phase start times; size() == phases.size() + 1.
    std::vector<double> phase_boundaries() const;
    // Sample at time t, wrapped into [0, period).
    ScheduleSample sample(double t) const;
    // Tilt of one leg's plane at time t given the phase's body roll.
    double leg_q0(LegId leg, double t, const RobotGeometry& geom) const;
};

// Full per-leg state at one schedule instant, joints solved through the
// inverse kinematics.
LegState leg_state_at(const GaitSchedule& schedule, LegId leg, double t,
                      const RobotGeometry& geom);

// Per-leg tilt decomposition of a body roll about the axis through the
// sphere contact parallel to the active leg's joint axes.
TiltInput roll_tilt_for_leg(double body_roll, LegId leg, LegId active,
                            const std::array<double, 3>& azimuths);

// Active leg alternates frictional push and rolling recovery; all three
// feet and the sphere stay grounded.
GaitSchedule build_scoot(double stroke_length, double period,
                         const RobotGeometry& geom, const GaitTuning& tuning = {});

// Active leg keeps the frictional foot, lifts between pushes, and the
// body coasts on the sphere and two rolling feet.
GaitSchedule build_skate(double stroke_length, double lift_height, double period,
                         double coast_fraction, const RobotGeometry& geom,
                         const GaitTuning& tuning = {});

// Scoot phase structure with the sphere lifted: three leg contacts only.
GaitSchedule build_shuffle(double stroke_length, double period,
                           const RobotGeometry& geom, const GaitTuning& tuning = {});

// Pulls instead of pushes: stroke direction negated, phase order kept.
GaitSchedule reverse(const GaitSchedule& schedule);

// All rolling contacts: free gliding under external force.
GaitSchedule maneuver_stand(const RobotGeometry& geom, const GaitTuning& tuning = {},
                            double duration = 1.0);

// All frictional contacts: the body is anchored.
GaitSchedule maneuver_brake(const RobotGeometry& geom, const GaitTuning& tuning = {},
                            double duration = 1.0);

struct PivotManeuver {
    LegId anchor_leg = LegId::A;
    double contact_duration = 1.0;
    double anchor_distance = 0.153;  // sphere center to planted foot (m)
    GaitSchedule schedule;
};

// Plants one frictional foot while the others roll; the moving body pivots
// about the planted foot for the contact duration.
PivotManeuver maneuver_pivot(LegId anchor_leg, double contact_duration,
                             double anchor_distance, const RobotGeometry& geom,
                             const GaitTuning& tuning = {});

// Foot targets that keep the hub level above the sphere center with all
// three feet on an inclined plane. Downhill is along leg A's azimuth.
std::array<FootTarget, 3> orientation_aware_stand(double incline,
                                                  const RobotGeometry& geom,
                                                  const GaitTuning& tuning = {});

// Steepest incline orientation_aware_stand can serve, found by bisection.
double max_standable_incline(const RobotGeometry& geom, const GaitTuning& tuning = {});

}  // namespace tripod
