#include "tripod/stability.hpp"

#include <algorithm>
#include <cmath>

#include "tripod/gait.hpp"

namespace tripod {

namespace {

// Monotone chain; returns hull vertices counter-clockwise without
// repeating the first point. Collinear points are dropped.
std::vector<Vec2> convex_hull(std::vector<Vec2> pts) {
    std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
        return a.x < b.x || (a.x == b.x && a.y < b.y);
    });
    pts.erase(std::unique(pts.begin(), pts.end(),
                          [](const Vec2& a, const Vec2& b) {
                              return a.x == b.x && a.y == b.y;
                          }),
              pts.end());
    const std::size_t n = pts.size();
    if (n <= 2) return pts;

    std::vector<Vec2> hull(2 * n);
    std::size_t k = 0;
    for (std::size_t i = 0; i < n; ++i) {
        while (k >= 2 && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    for (std::size_t i = n - 1, lower = k + 1; i-- > 0;) {
        while (k >= lower && cross(hull[k - 1] - hull[k - 2], pts[i] - hull[k - 2]) <= 0.0) --k;
        hull[k++] = pts[i];
    }
    hull.resize(k - 1);
    return hull;
}

bool inside_convex(const Vec2& p, const std::vector<Vec2>& hull) {
    const std::size_t n = hull.size();
    for (std::size_t i = 0; i < n; ++i) {
        const Vec2& a = hull[i];
        const Vec2& b = hull[(i + 1) % n];
        if (cross(b - a, p - a) < 0.0) return false;  // hull is CCW
    }
    return true;
}

}  // namespace

const char* to_string(ContactLabel label) {
    switch (label) {
        case ContactLabel::FootA: return "foot_A";
        case ContactLabel::FootB: return "foot_B";
        case ContactLabel::FootC: return "foot_C";
        case ContactLabel::Sphere: return "sphere";
        default: return "cage_edge";
    }
}

const char* to_string(SupportMode mode) {
    switch (mode) {
        case SupportMode::AllFeet: return "all_feet";
        case SupportMode::TwoFeetPlusSphere: return "two_feet_plus_sphere";
        case SupportMode::SpherePlusCage: return "sphere_plus_cage";
        case SupportMode::Braked: return "braked";
        default: return "airborne";
    }
}

bool ContactSet::has(ContactLabel label) const {
    for (const ContactPoint& c : points) {
        if (c.label == label) return true;
    }
    return false;
}

int ContactSet::foot_count() const {
    int n = 0;
    for (const ContactPoint& c : points) {
        if (c.label == ContactLabel::FootA || c.label == ContactLabel::FootB ||
            c.label == ContactLabel::FootC) {
            ++n;
        }
    }
    return n;
}

std::vector<std::string> ContactSet::validate() const {
    std::vector<std::string> bad;
    if (points.empty() || points.size() > 5) {
        bad.push_back("contact set must hold 1-5 points");
    }
    for (std::size_t i = 0; i < points.size(); ++i) {
        for (std::size_t j = i + 1; j < points.size(); ++j) {
            if (points[i].label == points[j].label) {
                bad.push_back(std::string("duplicate contact label ") +
                              to_string(points[i].label));
            }
            if (distance(points[i].p, points[j].p) < 1e-3) {
                bad.push_back("contact points closer than 1 mm");
            }
        }
    }
    return bad;
}

SupportClass classify_support(const ContactSet& contacts) {
    const int feet = contacts.foot_count();
    const bool sphere = contacts.has(ContactLabel::Sphere);
    const bool cage = contacts.has(ContactLabel::CageEdge);

    if (feet == 3) return {SupportMode::AllFeet, !cage};
    if (feet == 2 && sphere) return {SupportMode::TwoFeetPlusSphere, !cage};
    if (feet == 0 && sphere && cage) return {SupportMode::SpherePlusCage, true};

    // Unknown combination: nearest taxon, flagged.
    if (feet == 2) return {SupportMode::AllFeet, false};
    if (feet == 1 && sphere) return {SupportMode::TwoFeetPlusSphere, false};
    if (feet == 1) return {SupportMode::AllFeet, false};
    if (sphere && cage) return {SupportMode::SpherePlusCage, false};
    if (cage) return {SupportMode::SpherePlusCage, false};
    return {SupportMode::Airborne, false};  // sphere alone: no polygon
}

std::vector<Vec2> support_polygon(const ContactSet& contacts) {
    std::vector<Vec2> pts;
    pts.reserve(contacts.points.size());
    for (const ContactPoint& c : contacts.points) pts.push_back(c.p);
    return convex_hull(std::move(pts));
}

StabilityReport stability_margin(const Vec2& com_xy, const ContactSet& contacts) {
    const std::vector<Vec2> hull = support_polygon(contacts);
    StabilityReport report;
    if (hull.empty()) {
        report.margin = -std::numeric_limits<double>::infinity();
        return report;
    }
    if (hull.size() == 1) {
        report.margin = -distance(com_xy, hull[0]);
        return report;
    }
    if (hull.size() == 2) {
        report.margin = -point_segment_distance(com_xy, hull[0], hull[1]);
        return report;
    }
    double nearest = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < hull.size(); ++i) {
        nearest = std::min(nearest, point_segment_distance(com_xy, hull[i],
                                                           hull[(i + 1) % hull.size()]));
    }
    report.margin = inside_convex(com_xy, hull) ? nearest : -nearest;
    report.stable = report.margin > 0.0;
    return report;
}

ContactSet contacts_at(const GaitSchedule& schedule, double t, const RobotGeometry& geom) {
    const ScheduleSample s = schedule.sample(t);
    ContactSet contacts;
    static constexpr ContactLabel kFootLabels[3] = {
        ContactLabel::FootA, ContactLabel::FootB, ContactLabel::FootC};
    for (int leg = 0; leg < 3; ++leg) {
        if (!s.legs[leg].grounded) continue;
        const Vec2 dir = unit_from_angle(geom.leg_azimuths[leg]);
        contacts.points.push_back({kFootLabels[leg], dir * s.legs[leg].target.x});
    }
    if (s.sphere_engaged) {
        contacts.points.push_back({ContactLabel::Sphere, {0.0, 0.0}});
    }
    return contacts;
}

Vec2 com_at(const GaitSchedule& schedule, double t, const RobotGeometry& geom,
            const ComModel& com) {
    const ScheduleSample s = schedule.sample(t);
    Vec2 acc{0.0, 0.0};
    // Hub mass swings about the sphere contact axis, away from the active
    // leg when the roll is positive.
    const Vec2 active_dir = unit_from_angle(geom.leg_azimuths[static_cast<int>(schedule.active_leg)]);
    acc += com.hub_fraction * (-std::sin(s.body_roll) * com.hub_height) * active_dir;
    // Sphere mass stays centered. Each leg is lumped halfway between the
    // hip offset and the foot, in top view.
    for (int leg = 0; leg < 3; ++leg) {
        const Vec2 dir = unit_from_angle(geom.leg_azimuths[leg]);
        const double radial = 0.5 * (geom.d + s.legs[leg].target.x);
        acc += com.leg_fraction * radial * dir;
    }
    return acc;
}

ScheduleStability check_schedule_stability(const GaitSchedule& schedule,
                                           const RobotGeometry& geom,
                                           const ComModel& com, double tick) {
    ScheduleStability result;
    result.min_margin = std::numeric_limits<double>::infinity();
    const double period = schedule.period();
    for (double t = 0.0; t < period - 1e-12; t += tick) {
        const ContactSet contacts = contacts_at(schedule, t, geom);
        const Vec2 c = com_at(schedule, t, geom, com);
        const double margin = stability_margin(c, contacts).margin;
        if (margin < result.min_margin) {
            result.min_margin = margin;
            result.at_time = t;
            result.phase_index = schedule.sample(t).phase_index;
        }
    }
    return result;
}

}  // namespace tripod
