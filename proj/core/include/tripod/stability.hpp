#pragma once

#include <cstddef>
#include <string>
#include <vector>

#include "tripod/geometry.hpp"

namespace tripod {

struct GaitSchedule;
struct RobotGeometry;

enum class ContactLabel { FootA, FootB, FootC, Sphere, CageEdge };

const char* to_string(ContactLabel label);

struct ContactPoint {
    ContactLabel label;
    Vec2 p;  // ground position (m)
};

// Ground contacts at one instant. 1-5 labeled points, pairwise distinct
// beyond 1 mm.
struct ContactSet {
    std::vector<ContactPoint> points;

    bool has(ContactLabel label) const;
    int foot_count() const;
    std::vector<std::string> validate() const;
};

enum class SupportMode { AllFeet, TwoFeetPlusSphere, SpherePlusCage, Braked, Airborne };

const char* to_string(SupportMode mode);

struct SupportClass {
    SupportMode mode;
    bool exact;  // false: unknown combination mapped to the nearest taxon
};

// Deterministic support taxonomy from contact labels alone.
SupportClass classify_support(const ContactSet& contacts);

// Convex hull of the contact points, counter-clockwise. Degenerate inputs
// come back as a point or segment.
std::vector<Vec2> support_polygon(const ContactSet& contacts);

struct StabilityReport {
    bool stable = false;
    double margin = 0.0;  // signed distance to the hull boundary, + inside (m)
};

// Quasi-static check: CoM ground projection against the support polygon.
// Degenerate hulls (point, segment) are never stable.
StabilityReport stability_margin(const Vec2& com_xy, const ContactSet& contacts);

// Lumped-mass CoM model. Fractions are of total mass; each of the three
// legs carries leg_fraction. The hub mass swings about the sphere-ground
// contact axis when the body rolls.
struct ComModel {
    double hub_fraction = 0.5;
    double sphere_fraction = 0.3;
    double leg_fraction = 1.0 / 15.0;
    double hub_height = 0.25;  // hub CoM above the roll axis (m)
};

struct ScheduleStability {
    double min_margin = 0.0;
    double at_time = 0.0;
    std::size_t phase_index = 0;
};

// Samples one full cycle at the control tick and reports the minimum
// margin and where it occurs.
ScheduleStability check_schedule_stability(const GaitSchedule& schedule,
                                           const RobotGeometry& geom,
                                           const ComModel& com, double tick = 0.02);

// Contacts and CoM of one schedule instant, in the body frame. Shared by
// the stability checker and the simulator.
ContactSet contacts_at(const GaitSchedule& schedule, double t, const RobotGeometry& geom);
Vec2 com_at(const GaitSchedule& schedule, double t, const RobotGeometry& geom,
            const ComModel& com);

}  // namespace tripod
