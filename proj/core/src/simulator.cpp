#include "tripod/simulator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kSpeedEps = 1e-9;

// Exact integral factor and decay factor of exp(-lam*t) over dt.
struct DecayTerms {
    double integral;
    double factor;
};

DecayTerms decay_terms(double lam, double dt) {
    if (!std::isfinite(lam)) return {0.0, 0.0};  // instant decay
    if (lam <= 0.0) return {dt, 1.0};
    const double f = std::exp(-lam * dt);
    return {(1.0 - f) / lam, f};
}

ContactSet world_contacts(const GaitSchedule& schedule, double t,
                          const RobotGeometry& geom, const Vec2& pos,
                          double orientation) {
    ContactSet body = contacts_at(schedule, t, geom);
    for (ContactPoint& c : body.points) c.p = pos + rotated(c.p, orientation);
    return body;
}

struct Integrator {
    const GaitSchedule& schedule;
    const RobotGeometry& geom;
    const CoastModel& coast;
    const SimOptions& opt;
    double efficiency;

    std::vector<double> bounds;
    double period;

    Vec2 pos;
    double orientation;
    Vec2 momentum;
    Vec2 pending_push;  // push velocity of the most recent push segment

    Integrator(const GaitSchedule& g, const RobotGeometry& ge, const CoastModel& c,
               const SimOptions& o, const BodyState& initial)
        : schedule(g), geom(ge), coast(c), opt(o) {
        efficiency = g.direction == Direction::Backward ? o.backward_efficiency : 1.0;
        bounds = g.phase_boundaries();
        period = g.period();
        pos = initial.position;
        orientation = initial.orientation;
        momentum = initial.speed > kSpeedEps
                       ? initial.speed * unit_from_angle(initial.heading)
                       : Vec2{};
    }

    // Push velocity and anchor state of the segment containing time t.
    Vec2 segment_push(double t, bool* anchored) const {
        const ScheduleSample s = schedule.sample(t);
        Vec2 push{};
        *anchored = false;
        for (int leg = 0; leg < 3; ++leg) {
            const LegSample& ls = s.legs[leg];
            if (!ls.grounded || ls.contact != ContactMode::Frictional || ls.transitioning) {
                continue;
            }
            if (std::abs(ls.velocity_x) > 1e-12) {
                const Vec2 u = unit_from_angle(orientation + geom.leg_azimuths[leg]);
                push += (-coast.push_gain * efficiency * ls.velocity_x) * u;
            } else {
                *anchored = true;  // planted frictional foot: the body is held
            }
        }
        return push;
    }

    // Advances [a, b] inside a single phase.
    void advance_segment(double a, double b) {
        const double dt = b - a;
        if (dt <= 0.0) return;
        bool anchored = false;
        const Vec2 push_vel = segment_push(0.5 * (a + b), &anchored);
        if (anchored) {
            momentum = {};
            pending_push = {};
            return;
        }
        const bool pushing = push_vel.norm() > 0.0;
        if (!pushing && pending_push.norm() > 0.0) {
            // The stroke just ended: its velocity becomes rolling momentum.
            momentum += pending_push;
        }
        pending_push = pushing ? push_vel : Vec2{};
        const DecayTerms d = decay_terms(coast.decay_rate, dt);
        pos += push_vel * dt + momentum * d.integral;
        momentum *= d.factor;
    }

    // Advances across phase boundaries: cut the interval at every boundary
    // strictly inside it, then integrate each piece against its midpoint
    // sample. Boundaries within 1e-12 of an endpoint are not worth a cut.
    void advance(double a, double b) {
        std::vector<double> cuts;
        const long k0 = static_cast<long>(std::floor(a / period));
        const long k1 = static_cast<long>(std::floor(b / period)) + 1;
        for (long k = k0; k <= k1; ++k) {
            for (const double offset : bounds) {
                const double c = k * period + offset;
                if (c > a + 1e-12 && c < b - 1e-12) cuts.push_back(c);
            }
        }
        std::sort(cuts.begin(), cuts.end());
        double t = a;
        for (const double c : cuts) {
            advance_segment(t, c);
            t = c;
        }
        advance_segment(t, b);
    }
};

// Largest circle inscribed in the turn: tangent to the path at the turn
// apex and not cut by the path anywhere else. The tangency residual
// f(s) - s is non-increasing in the candidate radius s (f is 1-Lipschitz),
// so the largest admissible radius is found by scanning for the first
// violation and bisecting the crossing.
double inscribed_radius(const std::vector<Vec2>& pts, std::size_t apex_idx,
                        const Vec2& inward_normal) {
    auto min_dist = [&](const Vec2& c) {
        double best = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
            best = std::min(best, point_segment_distance(c, pts[i], pts[i + 1]));
        }
        return best;
    };
    Vec2 lo{pts.front()}, hi{pts.front()};
    for (const Vec2& p : pts) {
        lo.x = std::min(lo.x, p.x);
        lo.y = std::min(lo.y, p.y);
        hi.x = std::max(hi.x, p.x);
        hi.y = std::max(hi.y, p.y);
    }
    const double s_hi = 2.0 * (hi - lo).norm() + 1e-6;
    const Vec2 apex = pts[apex_idx];
    const double tol = 2e-4;  // chord-discretization allowance

    auto residual = [&](double s) { return min_dist(apex + s * inward_normal) - s; };

    double a = 0.0, b = s_hi;
    bool violated = false;
    const double step = s_hi / 200.0;
    for (double s = step; s <= s_hi; s += step) {
        if (residual(s) < -tol) {
            a = s - step;
            b = s;
            violated = true;
            break;
        }
    }
    if (!violated) return min_dist(apex + s_hi * inward_normal);
    for (int i = 0; i < 60 && b - a > 1e-9; ++i) {
        const double mid = 0.5 * (a + b);
        (residual(mid) >= -tol ? a : b) = mid;
    }
    return min_dist(apex + a * inward_normal);
}

}  // namespace

double Trajectory::elapsed() const {
    return samples.empty() ? 0.0 : samples.back().t - samples.front().t;
}

Vec2 Trajectory::net_displacement() const {
    return samples.empty() ? Vec2{}
                           : samples.back().body.position - samples.front().body.position;
}

BodyState Trajectory::end_state() const {
    return samples.empty() ? BodyState{} : samples.back().body;
}

Trajectory simulate(const GaitSchedule& schedule, const RobotGeometry& geom,
                    const CoastModel& coast, int n_strides, const SimOptions& opt,
                    const BodyState& initial) {
    if (n_strides < 0) throw Error("simulate: n_strides must be >= 0");
    if (!(coast.push_gain > 0.0 && coast.push_gain <= 1.0)) {
        throw Error("simulate: push_gain must lie in (0, 1]");
    }
    if (coast.decay_rate < 0.0) throw Error("simulate: decay_rate must be >= 0");
    if (!opt.ignore_stability) {
        const ScheduleStability st =
            check_schedule_stability(schedule, geom, opt.com, opt.tick);
        if (st.min_margin < 0.0) {
            std::ostringstream os;
            os << schedule.name << ": unstable phase '"
               << schedule.phases[st.phase_index].name << "' at t = " << st.at_time
               << " s (margin " << st.min_margin << " m)";
            throw UnstablePhaseError(os.str(), st.at_time);
        }
    }

    Integrator integ(schedule, geom, coast, opt, initial);
    const double total = n_strides * integ.period;

    Trajectory out;
    out.period = integ.period;
    out.strides = n_strides;

    double heading = initial.heading;
    double speed = initial.speed;
    double t = 0.0;
    while (true) {
        TrajectorySample sample;
        sample.t = t;
        sample.body.position = integ.pos;
        sample.body.orientation = integ.orientation;
        sample.body.heading = heading;
        sample.body.speed = speed;
        sample.body.tilt = initial.tilt;
        sample.contacts = world_contacts(schedule, t, geom, integ.pos, integ.orientation);
        bool anchored_at_t = false;
        integ.segment_push(t + 1e-9, &anchored_at_t);
        if (anchored_at_t) {
            sample.support = SupportMode::Braked;
        } else if (sample.contacts.points.empty()) {
            sample.support = SupportMode::Airborne;
        } else {
            sample.support = classify_support(sample.contacts).mode;
        }
        const Vec2 com_world =
            integ.pos + rotated(com_at(schedule, t, geom, opt.com), integ.orientation);
        sample.margin = stability_margin(com_world, sample.contacts).margin;
        if (!opt.ignore_stability && sample.margin < 0.0) {
            throw UnstablePhaseError(schedule.name + ": unstable at runtime", t);
        }
        out.samples.push_back(std::move(sample));

        if (t >= total - 1e-12) break;
        const double t_next = std::min(total, t + opt.tick);
        const Vec2 before = integ.pos;
        integ.advance(t, t_next);
        const Vec2 tick_vel = (integ.pos - before) * (1.0 / (t_next - t));
        speed = tick_vel.norm();
        if (speed > kSpeedEps) heading = std::atan2(tick_vel.y, tick_vel.x);
        t = t_next;
    }
    return out;
}

VelocityReport average_velocity(const Trajectory& trajectory, const RobotGeometry& geom) {
    if (trajectory.strides < 1 || trajectory.samples.size() < 2) {
        throw Error("average_velocity: need at least one full stride");
    }
    VelocityReport r;
    r.mps = trajectory.net_displacement().norm() / trajectory.elapsed();
    r.blps = r.mps / geom.body_length;
    return r;
}

Trajectory simulate_pivot(const BodyState& initial, const PivotManeuver& maneuver,
                          const RobotGeometry& geom, const SimOptions& opt) {
    if (initial.speed < opt.pivot_speed_threshold) {
        std::ostringstream os;
        os << "pivot: body speed " << initial.speed << " m/s is below the "
           << opt.pivot_speed_threshold << " m/s momentum threshold";
        throw NoMomentumError(os.str());
    }
    const double az = geom.leg_azimuths[static_cast<int>(maneuver.anchor_leg)];
    const Vec2 anchor =
        initial.position + maneuver.anchor_distance * unit_from_angle(initial.orientation + az);
    const Vec2 r_vec = initial.position - anchor;
    const Vec2 vel = initial.speed * unit_from_angle(initial.heading);
    const double spin = cross(r_vec, vel);
    const double omega =
        (spin >= 0.0 ? 1.0 : -1.0) * initial.speed / maneuver.anchor_distance;

    Trajectory out;
    out.period = maneuver.contact_duration;
    out.strides = 1;

    Vec2 pos = initial.position;
    double heading = initial.heading;
    double orientation = initial.orientation;
    double t = 0.0;
    while (true) {
        TrajectorySample sample;
        sample.t = t;
        sample.body = {pos, heading, orientation, initial.speed, initial.tilt};
        sample.contacts = world_contacts(maneuver.schedule, t, geom, pos, orientation);
        sample.support = classify_support(sample.contacts).mode;
        const Vec2 com_world =
            pos + rotated(com_at(maneuver.schedule, t, geom, opt.com), orientation);
        sample.margin = stability_margin(com_world, sample.contacts).margin;
        out.samples.push_back(std::move(sample));

        if (t >= maneuver.contact_duration - 1e-12) break;
        const double t_next = std::min(maneuver.contact_duration, t + opt.tick);
        const double dth = omega * (t_next - t);
        pos = rotated_about(pos, anchor, dth);
        heading += dth;
        orientation += dth;
        t = t_next;
    }
    return out;
}

BodyState change_heading(const BodyState& state, LegId old_leading, LegId new_leading,
                         const RobotGeometry& geom) {
    BodyState out = state;
    out.heading = state.heading + geom.leg_azimuths[static_cast<int>(new_leading)] -
                  geom.leg_azimuths[static_cast<int>(old_leading)];
    return out;
}

std::optional<double> turning_radius(const Trajectory& trajectory) {
    std::vector<Vec2> pts;
    for (const TrajectorySample& s : trajectory.samples) {
        if (pts.empty() || distance(pts.back(), s.body.position) > 1e-9) {
            pts.push_back(s.body.position);
        }
    }
    if (pts.size() < 3) return std::nullopt;

    std::vector<double> headings;
    headings.reserve(pts.size() - 1);
    for (std::size_t i = 0; i + 1 < pts.size(); ++i) {
        const Vec2 d = pts[i + 1] - pts[i];
        headings.push_back(std::atan2(d.y, d.x));
    }
    double total = 0.0, max_step = 0.0;
    std::vector<double> cumulative{0.0};
    for (std::size_t i = 1; i < headings.size(); ++i) {
        const double delta = wrap_angle(headings[i] - headings[i - 1]);
        total += delta;
        max_step = std::max(max_step, std::abs(delta));
        cumulative.push_back(total);
    }
    if (std::abs(total) < 0.02) return std::nullopt;  // straight path: no turn
    if (max_step > 0.5) return 0.0;  // instantaneous heading discontinuity

    std::size_t apex_seg = 0;
    for (std::size_t i = 0; i < cumulative.size(); ++i) {
        if (std::abs(cumulative[i]) >= std::abs(total) / 2.0) {
            apex_seg = i;
            break;
        }
    }
    // Tangent at the apex vertex: circular mean of the adjacent chords.
    double tangent = headings[apex_seg];
    if (apex_seg > 0) {
        tangent = headings[apex_seg - 1] +
                  0.5 * wrap_angle(headings[apex_seg] - headings[apex_seg - 1]);
    }
    const double normal_angle = tangent + (total > 0.0 ? kPi / 2 : -kPi / 2);
    return inscribed_radius(pts, apex_seg, unit_from_angle(normal_angle));
}

Trajectory incline_roll(const BodyState& initial, double incline,
                        const CoastModel& coast, double duration,
                        const RobotGeometry& geom, const SimOptions& opt,
                        bool braked) {
    if (incline < 0.0 || incline >= kPi / 2) {
        throw Error("incline_roll: incline must lie in [0, pi/2)");
    }
    const GaitSchedule pose = braked ? maneuver_brake(geom) : maneuver_stand(geom);
    const bool holds = braked && std::tan(incline) <= opt.friction_mu;

    const double accel = opt.gravity * std::sin(incline);
    const double lam = coast.decay_rate;

    Trajectory out;
    out.period = duration;
    out.strides = 1;

    Vec2 pos = initial.position;
    double v = initial.speed;
    double heading = initial.heading;
    double t = 0.0;
    while (true) {
        TrajectorySample sample;
        sample.t = t;
        sample.body = {pos, heading, initial.orientation, v, {incline, 0.0}};
        sample.contacts = world_contacts(pose, 0.0, geom, pos, initial.orientation);
        sample.support = holds ? SupportMode::Braked : classify_support(sample.contacts).mode;
        const Vec2 com_world =
            pos + rotated(com_at(pose, 0.0, geom, opt.com), initial.orientation);
        sample.margin = stability_margin(com_world, sample.contacts).margin;
        out.samples.push_back(std::move(sample));

        if (t >= duration - 1e-12) break;
        const double dt = std::min(duration, t + opt.tick) - t;
        if (!holds) {
            double disp;
            if (lam > 0.0 && std::isfinite(lam)) {
                const double vt = accel / lam;  // terminal speed
                const double f = std::exp(-lam * dt);
                disp = vt * dt + (v - vt) * (1.0 - f) / lam;
                v = vt + (v - vt) * f;
            } else if (lam == 0.0) {
                disp = v * dt + 0.5 * accel * dt * dt;
                v += accel * dt;
            } else {
                disp = 0.0;  // infinite decay
                v = 0.0;
            }
            // Downhill is along the current heading.
            pos += disp * unit_from_angle(heading);
        }
        t += dt;
    }
    return out;
}

Trajectory concat(const Trajectory& a, const Trajectory& b) {
    if (a.samples.empty()) return b;
    Trajectory out = a;
    const double t0 = a.samples.back().t;
    for (std::size_t i = 1; i < b.samples.size(); ++i) {  // drop the junction sample
        TrajectorySample s = b.samples[i];
        s.t += t0;
        out.samples.push_back(std::move(s));
    }
    out.strides = a.strides + b.strides;
    out.period = a.period;
    return out;
}

}  // namespace tripod
