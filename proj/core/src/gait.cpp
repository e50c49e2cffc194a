#include "tripod/gait.hpp"

#include <cmath>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

constexpr double kPi = std::numbers::pi;

FootTarget lerp(const FootTarget& a, const FootTarget& b, double s) {
    return {a.x + (b.x - a.x) * s, a.y + (b.y - a.y) * s};
}

LegPhaseTrack hold(const FootTarget& t, ContactMode mode, bool grounded = true,
                   bool transitioning = false) {
    return {t, t, mode, grounded, transitioning};
}

LegPhaseTrack sweep(const FootTarget& a, const FootTarget& b, ContactMode mode,
                    bool grounded = true) {
    return {a, b, mode, grounded, false};
}

// Every target of every phase must be reachable under that phase's tilt,
// and stroke endpoints must keep the configured safety margin.
void validate_schedule(const GaitSchedule& g, const RobotGeometry& geom) {
    for (std::size_t pi = 0; pi < g.phases.size(); ++pi) {
        const GaitPhase& phase = g.phases[pi];
        if (!(phase.duration > 0.0)) {
            throw Error("gait phase '" + phase.name + "' needs duration > 0");
        }
        if (std::abs(phase.body_roll) > g.tuning.max_body_roll + 1e-12) {
            throw Error("gait phase '" + phase.name + "' exceeds the body roll limit");
        }
        for (int leg = 0; leg < 3; ++leg) {
            const LegPhaseTrack& track = phase.legs[leg];
            const double q0 =
                tilt_angle(roll_tilt_for_leg(phase.body_roll, static_cast<LegId>(leg),
                                             g.active_leg, geom.leg_azimuths),
                           geom);
            for (const FootTarget& t : {track.start, track.end}) {
                const WorkspaceQuery q = workspace_contains(t, q0, geom);
                if (!q.contained) {
                    std::ostringstream os;
                    os << g.name << ": target (" << t.x << ", " << t.y << ") of leg "
                       << to_string(static_cast<LegId>(leg)) << " in phase '"
                       << phase.name << "' is unreachable";
                    throw UnreachableError(os.str());
                }
                const bool is_stroke_gait = g.kind == GaitKind::Scoot ||
                                            g.kind == GaitKind::Skate ||
                                            g.kind == GaitKind::Shuffle;
                const bool is_stroke_endpoint =
                    is_stroke_gait && static_cast<LegId>(leg) == g.active_leg;
                if (is_stroke_endpoint && q.margin < g.tuning.safety_margin) {
                    std::ostringstream os;
                    os << g.name << ": stroke endpoint (" << t.x << ", " << t.y
                       << ") margin " << q.margin << " m is below the safety margin "
                       << g.tuning.safety_margin << " m";
                    throw StrokeTooLongError(os.str());
                }
            }
        }
        const int needed = (g.kind == GaitKind::Scoot || g.kind == GaitKind::Shuffle) ? 3 : 2;
        if (phase.ground_contacts() < needed) {
            throw Error(g.name + ": phase '" + phase.name + "' has too few ground contacts");
        }
    }
}

GaitSchedule build_stroke_gait(GaitKind kind, double stroke, double period,
                               double lift_height, double coast_fraction,
                               const RobotGeometry& geom, const GaitTuning& tuning,
                               double stroke_start, Direction direction) {
    GaitSchedule g;
    g.kind = kind;
    g.active_leg = tuning.active_leg;
    g.direction = direction;
    g.stroke_length = stroke;
    g.stroke_start = stroke_start;
    g.lift_height = lift_height;
    g.coast_fraction = coast_fraction;
    g.tuning = tuning;

    const double ground = geom.ground_y();
    const FootTarget stance{tuning.stance_radius, ground};
    const FootTarget push_from{stroke_start, ground};
    const FootTarget push_to{stroke_start + stroke, ground};
    const int active = static_cast<int>(tuning.active_leg);

    auto passive_legs = [&](GaitPhase& phase, ContactMode mode) {
        for (int leg = 0; leg < 3; ++leg) {
            if (leg != active) phase.legs[leg] = hold(stance, mode);
        }
    };

    if (kind == GaitKind::Scoot || kind == GaitKind::Shuffle) {
        const bool sphere = kind == GaitKind::Scoot;
        g.name = std::string(sphere ? "scoot" : "shuffle") +
                 (direction == Direction::Backward ? "-backward" : "");
        const double stroke_time = period - 2.0 * tuning.transition_time;
        if (!(stroke_time > 0.0)) {
            throw Error(g.name + ": period too short for two contact-mode transitions");
        }
        const double push_time = stroke_time / 2.0;
        const double recover_time = stroke_time / 2.0;

        GaitPhase engage_foot{"engage-foot", tuning.transition_time, {}, 0.0, sphere};
        engage_foot.legs[active] = hold(push_from, ContactMode::Frictional, true, true);
        passive_legs(engage_foot, ContactMode::Rolling);

        GaitPhase push{"push", push_time, {}, tuning.body_roll, sphere};
        push.legs[active] = sweep(push_from, push_to, ContactMode::Frictional);
        passive_legs(push, ContactMode::Rolling);

        GaitPhase engage_roller{"engage-roller", tuning.transition_time, {}, 0.0, sphere};
        engage_roller.legs[active] = hold(push_to, ContactMode::Rolling, true, true);
        passive_legs(engage_roller, ContactMode::Rolling);

        GaitPhase recover{"recover", recover_time, {}, tuning.body_roll, sphere};
        recover.legs[active] = sweep(push_to, push_from, ContactMode::Rolling);
        passive_legs(recover, ContactMode::Rolling);

        g.phases = {engage_foot, push, engage_roller, recover};
    } else if (kind == GaitKind::Skate) {
        g.name = std::string("skate") +
                 (direction == Direction::Backward ? "-backward" : "");
        if (!(lift_height > 0.0)) throw Error("skate: lift_height must be > 0");
        if (!(coast_fraction > 0.0 && coast_fraction < 1.0)) {
            throw Error("skate: coast_fraction must lie in (0, 1)");
        }
        const double push_time = (1.0 - coast_fraction) * period;
        const double coast = coast_fraction * period;
        const double lift_time = 0.20 * coast;
        const double return_time = 0.55 * coast;
        const double touchdown_time = 0.25 * coast;
        const FootTarget lifted_to{push_to.x, ground + lift_height};
        const FootTarget lifted_from{push_from.x, ground + lift_height};
        const double roll = tuning.skate_body_roll;

        GaitPhase push{"push", push_time, {}, roll, true};
        push.legs[active] = sweep(push_from, push_to, ContactMode::Frictional);
        passive_legs(push, ContactMode::Rolling);

        GaitPhase lift{"lift", lift_time, {}, roll, true};
        lift.legs[active] = sweep(push_to, lifted_to, ContactMode::Frictional, false);
        passive_legs(lift, ContactMode::Rolling);

        GaitPhase swing{"return", return_time, {}, roll, true};
        swing.legs[active] = sweep(lifted_to, lifted_from, ContactMode::Frictional, false);
        passive_legs(swing, ContactMode::Rolling);

        GaitPhase touchdown{"touchdown", touchdown_time, {}, roll, true};
        touchdown.legs[active] = sweep(lifted_from, push_from, ContactMode::Frictional, false);
        passive_legs(touchdown, ContactMode::Rolling);

        g.phases = {push, lift, swing, touchdown};
    } else {
        throw Error("build_stroke_gait: not a stroke gait");
    }

    validate_schedule(g, geom);
    return g;
}

}  // namespace

const char* to_string(ContactMode mode) {
    return mode == ContactMode::Rolling ? "rolling" : "frictional";
}

const char* to_string(LegId leg) {
    switch (leg) {
        case LegId::A: return "A";
        case LegId::B: return "B";
        default: return "C";
    }
}

int GaitPhase::ground_contacts() const {
    int n = sphere_engaged ? 1 : 0;
    for (const LegPhaseTrack& track : legs) {
        if (track.grounded) ++n;
    }
    return n;
}

double GaitSchedule::period() const {
    double p = 0.0;
    for (const GaitPhase& phase : phases) p += phase.duration;
    return p;
}

std::vector<double> GaitSchedule::phase_boundaries() const {
    std::vector<double> b;
    b.reserve(phases.size() + 1);
    b.push_back(0.0);
    for (const GaitPhase& phase : phases) b.push_back(b.back() + phase.duration);
    return b;
}

ScheduleSample GaitSchedule::sample(double t) const {
    const double p = period();
    double local = std::fmod(t, p);
    if (local < 0.0) local += p;

    std::size_t idx = 0;
    double phase_start = 0.0;
    for (; idx + 1 < phases.size(); ++idx) {
        if (local < phase_start + phases[idx].duration) break;
        phase_start += phases[idx].duration;
    }
    const GaitPhase& phase = phases[idx];
    const double s = std::clamp((local - phase_start) / phase.duration, 0.0, 1.0);

    ScheduleSample out;
    out.phase_index = idx;
    out.body_roll = phase.body_roll;
    out.sphere_engaged = phase.sphere_engaged;
    for (int leg = 0; leg < 3; ++leg) {
        const LegPhaseTrack& track = phase.legs[leg];
        LegSample& ls = out.legs[leg];
        ls.target = lerp(track.start, track.end, s);
        ls.velocity_x = (track.end.x - track.start.x) / phase.duration;
        ls.velocity_y = (track.end.y - track.start.y) / phase.duration;
        ls.contact = track.contact;
        ls.grounded = track.grounded;
        ls.transitioning = track.transitioning;
    }
    return out;
}

double GaitSchedule::leg_q0(LegId leg, double t, const RobotGeometry& geom) const {
    const ScheduleSample s = sample(t);
    return tilt_angle(roll_tilt_for_leg(s.body_roll, leg, active_leg, geom.leg_azimuths),
                      geom);
}

LegState leg_state_at(const GaitSchedule& schedule, LegId leg, double t,
                      const RobotGeometry& geom) {
    const ScheduleSample s = schedule.sample(t);
    const LegSample& ls = s.legs[static_cast<int>(leg)];
    LegState state;
    state.leg_id = leg;
    state.joints = leg_ik(ls.target, schedule.leg_q0(leg, t, geom), geom);
    state.contact = ls.contact;
    state.grounded = ls.grounded;
    return state;
}

TiltInput roll_tilt_for_leg(double body_roll, LegId leg, LegId active,
                            const std::array<double, 3>& azimuths) {
    const double delta =
        azimuths[static_cast<int>(leg)] - azimuths[static_cast<int>(active)];
    return {body_roll * std::cos(delta), body_roll * std::sin(delta)};
}

GaitSchedule build_scoot(double stroke_length, double period,
                         const RobotGeometry& geom, const GaitTuning& tuning) {
    return build_stroke_gait(GaitKind::Scoot, stroke_length, period, 0.0, 0.0, geom,
                             tuning, tuning.stance_radius, Direction::Forward);
}

GaitSchedule build_skate(double stroke_length, double lift_height, double period,
                         double coast_fraction, const RobotGeometry& geom,
                         const GaitTuning& tuning) {
    return build_stroke_gait(GaitKind::Skate, stroke_length, period, lift_height,
                             coast_fraction, geom, tuning, tuning.skate_stroke_start,
                             Direction::Forward);
}

GaitSchedule build_shuffle(double stroke_length, double period,
                           const RobotGeometry& geom, const GaitTuning& tuning) {
    return build_stroke_gait(GaitKind::Shuffle, stroke_length, period, 0.0, 0.0, geom,
                             tuning, tuning.stance_radius, Direction::Forward);
}

GaitSchedule reverse(const GaitSchedule& schedule) {
    if (schedule.kind != GaitKind::Scoot && schedule.kind != GaitKind::Skate &&
        schedule.kind != GaitKind::Shuffle) {
        throw Error("reverse: only scoot, skate and shuffle schedules reverse");
    }
    // The stroke traverses the same interval the other way, so every
    // target has already passed the workspace check.
    GaitSchedule g = schedule;
    g.stroke_start = schedule.stroke_start + schedule.stroke_length;
    g.stroke_length = -schedule.stroke_length;
    g.direction = schedule.direction == Direction::Forward ? Direction::Backward
                                                           : Direction::Forward;

    const int active = static_cast<int>(g.active_leg);
    const double gy = schedule.phases.front().legs[active].start.y;
    const FootTarget from{g.stroke_start, gy};
    const FootTarget to{g.stroke_start + g.stroke_length, gy};
    if (schedule.kind == GaitKind::Skate) {
        const double lift_y = gy + schedule.lift_height;
        g.phases[0].legs[active] = sweep(from, to, ContactMode::Frictional);
        g.phases[1].legs[active] =
            sweep(to, {to.x, lift_y}, ContactMode::Frictional, false);
        g.phases[2].legs[active] =
            sweep({to.x, lift_y}, {from.x, lift_y}, ContactMode::Frictional, false);
        g.phases[3].legs[active] =
            sweep({from.x, lift_y}, from, ContactMode::Frictional, false);
    } else {
        g.phases[0].legs[active] = hold(from, ContactMode::Frictional, true, true);
        g.phases[1].legs[active] = sweep(from, to, ContactMode::Frictional);
        g.phases[2].legs[active] = hold(to, ContactMode::Rolling, true, true);
        g.phases[3].legs[active] = sweep(to, from, ContactMode::Rolling);
    }
    const bool was_backward = schedule.direction == Direction::Backward;
    const std::string base = schedule.kind == GaitKind::Scoot
                                 ? "scoot"
                                 : (schedule.kind == GaitKind::Skate ? "skate" : "shuffle");
    g.name = was_backward ? base : base + "-backward";
    return g;
}

GaitSchedule maneuver_stand(const RobotGeometry& geom, const GaitTuning& tuning,
                            double duration) {
    GaitSchedule g;
    g.kind = GaitKind::Stand;
    g.name = "stand";
    g.tuning = tuning;
    g.active_leg = tuning.active_leg;
    GaitPhase phase{"stand", duration, {}, 0.0, true};
    const FootTarget stance{tuning.stance_radius, geom.ground_y()};
    for (int leg = 0; leg < 3; ++leg) phase.legs[leg] = hold(stance, ContactMode::Rolling);
    g.phases = {phase};
    validate_schedule(g, geom);
    return g;
}

GaitSchedule maneuver_brake(const RobotGeometry& geom, const GaitTuning& tuning,
                            double duration) {
    GaitSchedule g;
    g.kind = GaitKind::Brake;
    g.name = "brake";
    g.tuning = tuning;
    g.active_leg = tuning.active_leg;
    GaitPhase phase{"brake", duration, {}, 0.0, true};
    const FootTarget stance{tuning.stance_radius, geom.ground_y()};
    for (int leg = 0; leg < 3; ++leg) {
        phase.legs[leg] = hold(stance, ContactMode::Frictional);
    }
    g.phases = {phase};
    validate_schedule(g, geom);
    return g;
}

PivotManeuver maneuver_pivot(LegId anchor_leg, double contact_duration,
                             double anchor_distance, const RobotGeometry& geom,
                             const GaitTuning& tuning) {
    if (!(contact_duration >= 0.0)) throw Error("pivot: contact_duration must be >= 0");
    const FootTarget anchor{anchor_distance, geom.ground_y()};
    if (!workspace_contains(anchor, kPi / 2, geom).contained) {
        std::ostringstream os;
        os << "pivot: anchor distance " << anchor_distance << " m is outside the workspace";
        throw UnreachableError(os.str());
    }
    PivotManeuver m;
    m.anchor_leg = anchor_leg;
    m.contact_duration = contact_duration;
    m.anchor_distance = anchor_distance;

    GaitSchedule g;
    g.kind = GaitKind::Pivot;
    g.name = "pivot";
    GaitTuning t = tuning;
    t.active_leg = anchor_leg;
    g.tuning = t;
    g.active_leg = anchor_leg;
    GaitPhase phase{"pivot", contact_duration > 0.0 ? contact_duration : 1e-3, {}, 0.0, true};
    const FootTarget stance{tuning.stance_radius, geom.ground_y()};
    for (int leg = 0; leg < 3; ++leg) {
        phase.legs[leg] = leg == static_cast<int>(anchor_leg)
                              ? hold(anchor, ContactMode::Frictional)
                              : hold(stance, ContactMode::Rolling);
    }
    g.phases = {phase};
    validate_schedule(g, geom);
    m.schedule = g;
    return m;
}

std::array<FootTarget, 3> orientation_aware_stand(double incline,
                                                  const RobotGeometry& geom,
                                                  const GaitTuning& tuning) {
    if (incline < 0.0 || incline >= kPi / 2) {
        throw Error("orientation_aware_stand: incline must lie in [0, pi/2)");
    }
    const double downhill = geom.leg_azimuths[0];
    std::array<FootTarget, 3> targets;
    for (int leg = 0; leg < 3; ++leg) {
        const double x = tuning.stance_radius;
        // Plane height below the level hub at this foot's ground position.
        const double along_downhill = x * std::cos(geom.leg_azimuths[leg] - downhill);
        const double y =
            -along_downhill * std::tan(incline) - geom.sphere_radius / std::cos(incline);
        targets[leg] = {x, y};
        if (!workspace_contains(targets[leg], kPi / 2, geom).contained) {
            std::ostringstream os;
            os << "orientation_aware_stand: incline " << incline
               << " rad is unreachable; maximum standable incline is "
               << max_standable_incline(geom, tuning) << " rad";
            throw UnreachableError(os.str());
        }
    }
    return targets;
}

double max_standable_incline(const RobotGeometry& geom, const GaitTuning& tuning) {
    auto feasible = [&](double incline) {
        const double downhill = geom.leg_azimuths[0];
        for (int leg = 0; leg < 3; ++leg) {
            const double x = tuning.stance_radius;
            const double along = x * std::cos(geom.leg_azimuths[leg] - downhill);
            const FootTarget t{
                x, -along * std::tan(incline) - geom.sphere_radius / std::cos(incline)};
            if (!workspace_contains(t, kPi / 2, geom).contained) return false;
        }
        return true;
    };
    double lo = 0.0, hi = kPi / 2 - 1e-6;
    if (!feasible(lo)) return 0.0;
    if (feasible(hi)) return hi;
    for (int i = 0; i < 60; ++i) {
        const double mid = 0.5 * (lo + hi);
        (feasible(mid) ? lo : hi) = mid;
    }
    return lo;
}

}  // namespace tripod
