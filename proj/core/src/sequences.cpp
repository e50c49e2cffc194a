#include "tripod/sequences.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "tripod/errors.hpp"
#include "tripod/kinematics.hpp"

namespace tripod {

namespace {

constexpr double kPi = std::numbers::pi;

Vec2 circumcenter(const Vec2& a, const Vec2& b, const Vec2& c, bool* ok) {
    const double det = 2.0 * cross(b - a, c - a);
    *ok = std::abs(det) > 1e-15;
    if (!*ok) return {};
    const double a2 = dot(a, a), b2 = dot(b, b), c2 = dot(c, c);
    return {(a2 * (b.y - c.y) + b2 * (c.y - a.y) + c2 * (a.y - b.y)) / det,
            (a2 * (c.x - b.x) + b2 * (a.x - c.x) + c2 * (b.x - a.x)) / det};
}

// Smallest enclosing circle by brute force over pairs and triples; the
// contact sets here never exceed five points.
double smallest_enclosing_radius(const std::vector<Vec2>& pts) {
    if (pts.empty()) return 0.0;
    if (pts.size() == 1) return 0.0;
    auto contains_all = [&](const Vec2& c, double r) {
        for (const Vec2& p : pts) {
            if (distance(c, p) > r + 1e-12) return false;
        }
        return true;
    };
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            const Vec2 c = (pts[i] + pts[j]) * 0.5;
            const double r = 0.5 * distance(pts[i], pts[j]);
            if (r < best && contains_all(c, r)) best = r;
        }
    }
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t j = i + 1; j < pts.size(); ++j) {
            for (std::size_t k = j + 1; k < pts.size(); ++k) {
                bool ok = false;
                const Vec2 c = circumcenter(pts[i], pts[j], pts[k], &ok);
                if (!ok) continue;
                const double r = distance(c, pts[i]);
                if (r < best && contains_all(c, r)) best = r;
            }
        }
    }
    return std::isfinite(best) ? best : 0.0;
}

// One-phase hold of a pose, used to export the static stair postures.
GaitSchedule hold_pose(const std::string& name,
                       const std::array<FootTarget, 3>& targets,
                       const std::array<ContactMode, 3>& modes,
                       const std::array<bool, 3>& grounded, bool sphere_engaged,
                       const RobotGeometry& geom) {
    GaitSchedule g;
    g.kind = GaitKind::Stand;
    g.name = name;
    GaitPhase phase{name, 1.0, {}, 0.0, sphere_engaged};
    for (int leg = 0; leg < 3; ++leg) {
        phase.legs[leg] = {targets[leg], targets[leg], modes[leg], grounded[leg], false};
        // Every exported pose must be solvable.
        leg_ik(targets[leg], kPi / 2, geom);
    }
    g.phases = {phase};
    return g;
}

}  // namespace

double operating_circle_diameter(const RobotGeometry& geom, const GaitTuning& tuning) {
    std::vector<Vec2> contacts;
    for (double az : geom.leg_azimuths) {
        contacts.push_back(unit_from_angle(az) * tuning.stance_radius);
    }
    return 2.0 * smallest_enclosing_radius(contacts);
}

Feasibility stair_feasible(const StairSpec& stair, const RobotGeometry& geom,
                           const GaitTuning& tuning) {
    Feasibility f;
    const double diameter = operating_circle_diameter(geom, tuning);
    if (stair.tread_depth < diameter) {
        std::ostringstream os;
        os << "tread depth " << stair.tread_depth
           << " m is shallower than the operating-circle diameter " << diameter << " m";
        f.reasons.push_back(os.str());
    }
    if (stair.rise > 0.5 * geom.hip_height) {
        std::ostringstream os;
        os << "rise " << stair.rise << " m exceeds 50% of hip height ("
           << geom.hip_height << " m)";
        f.reasons.push_back(os.str());
    }
    f.feasible = f.reasons.empty();
    return f;
}

std::vector<SequenceStep> build_stair_sequence(const StairSpec& stair,
                                               const RobotGeometry& geom,
                                               const GaitTuning& tuning,
                                               double sphere_clearance) {
    const Feasibility f = stair_feasible(stair, geom, tuning);
    if (!f.feasible) {
        throw InfeasibleError("stair sequence infeasible", f.reasons);
    }

    const double s = tuning.stance_radius;
    const double gy = geom.ground_y();
    const Vec2 uA = unit_from_angle(geom.leg_azimuths[0]);
    const Vec2 uB = unit_from_angle(geom.leg_azimuths[1]);
    const Vec2 uC = unit_from_angle(geom.leg_azimuths[2]);
    const FootTarget stance{s, gy};
    const FootTarget on_stair{s, gy + stair.rise};       // front foot up on the tread
    const FootTarget extended{0.10, gy + stair.rise};    // rolling contact pushed out
    const FootTarget tucked{0.02, gy + stair.rise};      // pulled in toward the body
    const FootTarget lifted{s, gy + stair.rise + 0.02};  // held above the tread

    auto foot = [&](ContactLabel label, const Vec2& p) { return ContactPoint{label, p}; };
    const ContactPoint footA = foot(ContactLabel::FootA, uA * s);
    const ContactPoint footB = foot(ContactLabel::FootB, uB * s);
    const ContactPoint footC = foot(ContactLabel::FootC, uC * s);
    const ContactPoint sphere{ContactLabel::Sphere, {0.0, 0.0}};
    const ContactPoint cage{ContactLabel::CageEdge, uA * (0.5 * geom.sphere_radius)};

    using CM = ContactMode;
    const double lifted_elev = stair.rise + sphere_clearance;

    std::vector<SequenceStep> steps;
    auto add = [&](const std::string& label, const std::string& action,
                   SupportMode expected, ContactSet contacts, double d_elev,
                   double d_adv, GaitSchedule schedule) {
        SequenceStep step;
        step.label = label;
        step.action = action;
        step.expected_support = expected;
        step.contacts = std::move(contacts);
        step.start_elevation = steps.empty() ? 0.0 : steps.back().end_elevation;
        step.end_elevation = step.start_elevation + d_elev;
        step.start_advance = steps.empty() ? 0.0 : steps.back().end_advance;
        step.end_advance = step.start_advance + d_adv;
        step.schedule = std::move(schedule);
        steps.push_back(std::move(step));
    };

    add("A", "front foot grips the tread and pulls the body toward the stair",
        SupportMode::AllFeet, {{footA, footB, footC, sphere}}, 0.0, 0.03,
        hold_pose("stair-A", {on_stair, stance, stance},
                  {CM::Frictional, CM::Rolling, CM::Rolling}, {true, true, true}, true,
                  geom));
    add("B", "back feet grip and extend until the sphere clears the rise",
        SupportMode::AllFeet, {{footA, footB, footC}}, lifted_elev, 0.0,
        hold_pose("stair-B", {on_stair, stance, stance},
                  {CM::Frictional, CM::Frictional, CM::Frictional}, {true, true, true},
                  false, geom));
    add("C", "front leg rolls and extends the contact away from the body",
        SupportMode::AllFeet, {{footA, footB, footC}}, 0.0, 0.0,
        hold_pose("stair-C", {extended, stance, stance},
                  {CM::Rolling, CM::Frictional, CM::Frictional}, {true, true, true},
                  false, geom));
    add("D", "front foot grips and pulls the sphere onto the tread",
        SupportMode::AllFeet, {{footA, footB, footC}}, -sphere_clearance,
        geom.sphere_radius,
        hold_pose("stair-D", {extended, stance, stance},
                  {CM::Frictional, CM::Frictional, CM::Frictional}, {true, true, true},
                  false, geom));
    add("E", "front roller extends up and out, rotating the body forward",
        SupportMode::TwoFeetPlusSphere, {{footB, footC, sphere}}, 0.0, 0.0,
        hold_pose("stair-E", {tucked, stance, stance},
                  {CM::Rolling, CM::Rolling, CM::Rolling}, {false, true, true}, true,
                  geom));
    add("F", "back legs lift above the tread, balancing on sphere and cage",
        SupportMode::SpherePlusCage, {{sphere, cage}}, 0.0, 0.0,
        hold_pose("stair-F", {tucked, lifted, lifted},
                  {CM::Rolling, CM::Rolling, CM::Rolling}, {false, false, false}, true,
                  geom));
    add("G", "front foot grips and pulls the body fully onto the tread",
        SupportMode::AllFeet, {{footA, footB, footC, sphere}}, 0.0,
        0.5 * operating_circle_diameter(geom, tuning),
        hold_pose("stair-G", {on_stair, on_stair, on_stair},
                  {CM::Frictional, CM::Rolling, CM::Rolling}, {true, true, true}, true,
                  geom));
    return steps;
}

std::vector<SequenceStep> build_cord_sequence(double cord_height,
                                              const RobotGeometry& geom,
                                              const GaitTuning& tuning,
                                              const CordGaitParams& params) {
    if (cord_height < 0.0) throw Error("cord traversal: cord height must be >= 0");
    if (cord_height >= params.skate_lift) {
        std::ostringstream os;
        os << "cord height " << cord_height << " m is not below the skate lift height "
           << params.skate_lift << " m";
        throw CordTooHighError(os.str());
    }

    auto skate_for = [&](LegId active) {
        GaitTuning t = tuning;
        t.active_leg = active;
        return build_skate(params.skate_stroke, params.skate_lift, params.skate_period,
                           params.skate_coast_fraction, geom, t);
    };
    auto shuffle_for = [&](LegId active) {
        GaitTuning t = tuning;
        t.active_leg = active;
        return build_shuffle(params.shuffle_stroke, params.shuffle_period, geom, t);
    };

    const double s = tuning.stance_radius;
    const Vec2 uA = unit_from_angle(geom.leg_azimuths[0]);
    const Vec2 uB = unit_from_angle(geom.leg_azimuths[1]);
    const Vec2 uC = unit_from_angle(geom.leg_azimuths[2]);
    const ContactPoint footA{ContactLabel::FootA, uA * s};
    const ContactPoint footB{ContactLabel::FootB, uB * s};
    const ContactPoint footC{ContactLabel::FootC, uC * s};
    const ContactPoint sphere{ContactLabel::Sphere, {0.0, 0.0}};

    std::vector<SequenceStep> steps;
    auto add = [&](SequenceStep step) {
        step.start_elevation = steps.empty() ? 0.0 : steps.back().end_elevation;
        step.end_elevation = step.start_elevation;
        step.start_advance = steps.empty() ? 0.0 : steps.back().end_advance;
        step.end_advance = step.start_advance + std::abs(step.schedule->stroke_length);
        steps.push_back(std::move(step));
    };

    {
        SequenceStep step;
        step.label = "cord-1";
        step.action = "backward skate lifts the leading leg over the cord";
        step.expected_support = SupportMode::TwoFeetPlusSphere;
        step.contacts = {{footB, footC, sphere}};
        step.schedule = reverse(skate_for(LegId::A));
        step.crossing_phase = 2;  // airborne return sweep
        step.crossing_leg = LegId::A;
        add(std::move(step));
    }
    {
        SequenceStep step;
        step.label = "cord-2";
        step.action = "backward shuffle carries the sphere over the cord";
        step.expected_support = SupportMode::AllFeet;
        step.contacts = {{footA, footB, footC}};
        step.schedule = reverse(shuffle_for(LegId::A));
        add(std::move(step));
    }
    {
        SequenceStep step;
        step.label = "cord-3";
        step.action = "heading change, forward skate lifts the first trailing leg over";
        step.expected_support = SupportMode::TwoFeetPlusSphere;
        step.contacts = {{footA, footC, sphere}};
        step.schedule = skate_for(LegId::B);
        step.crossing_phase = 2;
        step.crossing_leg = LegId::B;
        step.heading_changes = 1;
        add(std::move(step));
    }
    {
        SequenceStep step;
        step.label = "cord-4";
        step.action = "heading change, forward skate lifts the second trailing leg over";
        step.expected_support = SupportMode::TwoFeetPlusSphere;
        step.contacts = {{footA, footB, sphere}};
        step.schedule = skate_for(LegId::C);
        step.crossing_phase = 2;
        step.crossing_leg = LegId::C;
        step.heading_changes = 1;
        add(std::move(step));
    }
    return steps;
}

SequenceTrace execute_sequence(const std::vector<SequenceStep>& steps,
                               const RobotGeometry& geom, double tick) {
    SequenceTrace trace;
    trace.steps = steps.size();
    trace.min_crossing_clearance = std::numeric_limits<double>::infinity();

    for (std::size_t i = 0; i < steps.size(); ++i) {
        const SequenceStep& step = steps[i];
        if (i > 0) {
            const double gap =
                std::max(std::abs(step.start_elevation - steps[i - 1].end_elevation),
                         std::abs(step.start_advance - steps[i - 1].end_advance));
            trace.max_chain_gap = std::max(trace.max_chain_gap, gap);
            if (gap > 1e-9) trace.chain_ok = false;
        }
        const SupportMode mode = classify_support(step.contacts).mode;
        trace.support_trace.push_back(mode);
        if (mode != step.expected_support) trace.supports_match = false;
        trace.heading_changes += step.heading_changes;

        if (step.schedule && step.crossing_phase >= 0) {
            const GaitSchedule& g = *step.schedule;
            const std::vector<double> bounds = g.phase_boundaries();
            const double t0 = bounds[step.crossing_phase];
            const double t1 = bounds[step.crossing_phase + 1];
            for (double t = t0; t <= t1 + 1e-12; t += tick) {
                const double tc = std::min(t, t1 - 1e-9);
                const LegSample ls = g.sample(tc).legs[static_cast<int>(step.crossing_leg)];
                const double q0 = g.leg_q0(step.crossing_leg, tc, geom);
                const FootTarget reached = leg_fk(leg_ik(ls.target, q0, geom), geom);
                const double clearance = reached.y - geom.ground_y();
                trace.min_crossing_clearance =
                    std::min(trace.min_crossing_clearance, clearance);
            }
        }
    }
    if (!steps.empty()) {
        trace.final_elevation = steps.back().end_elevation;
        trace.final_advance = steps.back().end_advance;
    }
    if (!std::isfinite(trace.min_crossing_clearance)) trace.min_crossing_clearance = 0.0;
    return trace;
}

}  // namespace tripod
