#include <cmath>
#include <vector>

#include "doctest.h"
#include "tripod/errors.hpp"
#include "tripod/simulator.hpp"

using namespace tripod;

namespace {

constexpr double kPi = std::numbers::pi;

struct PhaseSpec {
    double duration;
    bool push;
    double stroke;
};

// Independent closed-form stride map of the coast model: momentum decays
// exponentially everywhere, a push adds push_gain * stroke of displacement
// and converts its stroke velocity into momentum when it ends.
struct StrideMap {
    std::vector<PhaseSpec> phases;
    CoastModel coast;

    double stride(double& momentum) const {
        double disp = 0.0;
        for (const PhaseSpec& p : phases) {
            const double f = std::exp(-coast.decay_rate * p.duration);
            disp += momentum * (1.0 - f) / coast.decay_rate;
            momentum *= f;
            if (p.push) {
                disp += coast.push_gain * p.stroke;
                momentum += coast.push_gain * p.stroke / p.duration;
            }
        }
        return disp;
    }

    // The per-stride map is affine in the entry momentum:
    // d = A + B*s, s' = C + D*s. Its fixed point is the steady state.
    double steady_displacement() const {
        double m_zero = 0.0;
        const double d_zero = stride(m_zero);  // A and C
        double m_unit = 1.0;
        const double d_unit = stride(m_unit);  // A + B and C + D
        const double d_slope = d_unit - d_zero;
        const double s_slope = m_unit - m_zero;
        const double s_star = m_zero / (1.0 - s_slope);
        return d_zero + d_slope * s_star;
    }
};

std::vector<double> stride_displacements(const Trajectory& traj, double period, int strides) {
    std::vector<double> out;
    for (int k = 1; k <= strides; ++k) {
        const double t0 = (k - 1) * period;
        const double t1 = k * period;
        Vec2 a, b;
        bool found_a = false, found_b = false;
        for (const TrajectorySample& s : traj.samples) {
            if (!found_a && std::abs(s.t - t0) < 1e-9) {
                a = s.body.position;
                found_a = true;
            }
            if (!found_b && std::abs(s.t - t1) < 1e-9) {
                b = s.body.position;
                found_b = true;
            }
        }
        REQUIRE(found_a);
        REQUIRE(found_b);
        out.push_back(distance(a, b));
    }
    return out;
}

double steady_speed(const GaitSchedule& g, const RobotGeometry& geom,
                    const CoastModel& coast, const SimOptions& opt) {
    const Trajectory traj = simulate(g, geom, coast, 40, opt);
    const double period = g.period();
    Vec2 p30, p40;
    bool f30 = false, f40 = false;
    for (const TrajectorySample& s : traj.samples) {
        if (!f30 && std::abs(s.t - 30.0 * period) < 1e-9) {
            p30 = s.body.position;
            f30 = true;
        }
        if (!f40 && std::abs(s.t - 40.0 * period) < 1e-9) {
            p40 = s.body.position;
            f40 = true;
        }
    }
    REQUIRE(f30);
    REQUIRE(f40);
    return distance(p30, p40) / (10.0 * period);
}

Trajectory synthetic_arc(double radius, double turn_angle, double lead = 0.3) {
    Trajectory traj;
    traj.strides = 1;
    std::vector<Vec2> pts;
    const int n_lead = 60;
    for (int i = 0; i <= n_lead; ++i) {
        pts.push_back({-lead + lead * i / n_lead, 0.0});
    }
    const Vec2 center{0.0, radius};
    const int n_arc = static_cast<int>(std::ceil(turn_angle / 0.02));
    for (int i = 1; i <= n_arc; ++i) {
        const double a = turn_angle * i / n_arc;
        pts.push_back({center.x + radius * std::sin(a), center.y - radius * std::cos(a)});
    }
    const Vec2 exit_dir{std::cos(turn_angle), std::sin(turn_angle)};
    const Vec2 arc_end = pts.back();
    for (int i = 1; i <= n_lead; ++i) {
        pts.push_back(arc_end + exit_dir * (lead * i / n_lead));
    }
    double t = 0.0;
    for (const Vec2& p : pts) {
        TrajectorySample s;
        s.t = t;
        t += 0.02;
        s.body.position = p;
        traj.samples.push_back(s);
    }
    traj.period = traj.samples.back().t;
    return traj;
}

}  // namespace

TEST_CASE("stand from rest goes nowhere; brake anchors an impulse") {
    const RobotGeometry geom;
    const CoastModel coast;
    CHECK(simulate(maneuver_stand(geom), geom, coast, 3).net_displacement().norm() == 0.0);

    BodyState pushed;
    pushed.speed = 0.3;
    pushed.heading = 0.7;
    const Trajectory glide = simulate(maneuver_stand(geom), geom, coast, 3, {}, pushed);
    CHECK(glide.net_displacement().norm() > 0.01);
    // Rolling contacts only: the body glides along the impulse direction.
    const Vec2 dir = glide.net_displacement();
    CHECK(std::atan2(dir.y, dir.x) == doctest::Approx(0.7).epsilon(1e-9));

    const Trajectory held = simulate(maneuver_brake(geom), geom, coast, 3, {}, pushed);
    CHECK(held.net_displacement().norm() == 0.0);
    CHECK(held.end_state().orientation == glide.end_state().orientation);
    CHECK(held.end_state().orientation == 0.0);  // neither maneuver rotates the body
    for (const TrajectorySample& s : held.samples) {
        if (s.t > 0.0) CHECK(s.support == SupportMode::Braked);
    }
}

TEST_CASE("speed never increases without a push") {
    const RobotGeometry geom;
    BodyState pushed;
    pushed.speed = 0.4;
    const Trajectory glide = simulate(maneuver_stand(geom), geom, CoastModel{}, 5, {}, pushed);
    for (std::size_t i = 1; i < glide.samples.size(); ++i) {
        CHECK(glide.samples[i].body.speed <= glide.samples[i - 1].body.speed + 1e-12);
    }
}

TEST_CASE("zero-stroke gaits go nowhere") {
    const RobotGeometry geom;
    const CoastModel coast;
    for (const GaitSchedule& g :
         {build_scoot(0.0, 0.60, geom), build_shuffle(0.0, 0.44, geom)}) {
        CHECK(simulate(g, geom, coast, 3).net_displacement().norm() == 0.0);
    }
}

TEST_CASE("pure quasi-static scoot: displacement is push_gain * stroke per cycle") {
    const RobotGeometry geom;
    CoastModel coast;
    coast.decay_rate = std::numeric_limits<double>::infinity();
    coast.push_gain = 0.651428571428571;
    const GaitSchedule g = build_scoot(0.07, 0.60, geom);
    const Trajectory traj = simulate(g, geom, coast, 5);
    const double expected = 5.0 * coast.push_gain * 0.07;
    CHECK(traj.net_displacement().norm() == doctest::Approx(expected).epsilon(1e-9));

    // n strides displace n times one stride, exactly.
    const std::vector<double> per_stride = stride_displacements(traj, g.period(), 5);
    for (const double d : per_stride) {
        CHECK(d == doctest::Approx(coast.push_gain * 0.07).epsilon(1e-9));
    }
}

TEST_CASE("skate strides grow monotonically to the closed-form fixed point") {
    const RobotGeometry geom;
    const CoastModel coast;
    const GaitSchedule g = build_skate(0.10, 0.04, 0.30, 0.65, geom);
    const Trajectory traj = simulate(g, geom, coast, 12);
    const std::vector<double> d = stride_displacements(traj, g.period(), 12);
    for (std::size_t i = 1; i < d.size(); ++i) {
        CHECK(d[i] >= d[i - 1] - 1e-12);  // non-decreasing approach
    }

    const double push_time = 0.35 * 0.30;
    const double coast_time = 0.65 * 0.30;
    StrideMap oracle{{{push_time, true, 0.10},
                      {0.20 * coast_time, false, 0.0},
                      {0.55 * coast_time, false, 0.0},
                      {0.25 * coast_time, false, 0.0}},
                     coast};
    double momentum = 0.0;
    std::vector<double> expected;
    for (int k = 0; k < 12; ++k) expected.push_back(oracle.stride(momentum));
    for (std::size_t i = 0; i < d.size(); ++i) {
        CHECK(d[i] == doctest::Approx(expected[i]).epsilon(1e-9));
    }
    CHECK(d.back() == doctest::Approx(oracle.steady_displacement()).epsilon(1e-6));
}

TEST_CASE("calibrated steady-state speeds reproduce the targets and ordering") {
    const RobotGeometry geom;
    const CoastModel coast;
    const SimOptions opt;
    const double scoot = steady_speed(build_scoot(0.07, 0.60, geom), geom, coast, opt);
    const double skate = steady_speed(build_skate(0.10, 0.04, 0.30, 0.65, geom), geom,
                                      coast, opt);
    const double shuffle = steady_speed(build_shuffle(0.07, 0.44, geom), geom, coast, opt);
    CHECK(scoot == doctest::Approx(0.16).epsilon(1e-3));
    CHECK(skate == doctest::Approx(0.56).epsilon(1e-3));
    CHECK(shuffle > scoot);
    CHECK(shuffle < skate);

    // Pulling is less efficient than pushing.
    const double back_scoot =
        steady_speed(reverse(build_scoot(0.07, 0.60, geom)), geom, coast, opt);
    CHECK(back_scoot < scoot);
    CHECK(back_scoot == doctest::Approx(0.7 * scoot).epsilon(1e-6));
}

TEST_CASE("reversed scoot displaces the body backward") {
    const RobotGeometry geom;
    const CoastModel coast;
    const GaitSchedule fwd = build_scoot(0.07, 0.60, geom);
    const GaitSchedule back = reverse(fwd);
    const Vec2 forward_dir = -unit_from_angle(geom.leg_azimuths[0]);
    const Vec2 df = simulate(fwd, geom, coast, 3).net_displacement();
    const Vec2 db = simulate(back, geom, coast, 3).net_displacement();
    CHECK(dot(df, forward_dir) > 0.0);
    CHECK(dot(db, forward_dir) < 0.0);
}

TEST_CASE("orientation stays fixed through straight-line gaits") {
    const RobotGeometry geom;
    const Trajectory traj =
        simulate(build_skate(0.10, 0.04, 0.30, 0.65, geom), geom, CoastModel{}, 5);
    for (const TrajectorySample& s : traj.samples) {
        CHECK(std::abs(s.body.orientation) < 1e-9);
    }
}

TEST_CASE("average velocity over the run") {
    const RobotGeometry geom;
    const Trajectory traj = simulate(maneuver_stand(geom), geom, CoastModel{}, 2);
    const VelocityReport v = average_velocity(traj, geom);
    CHECK(v.mps == 0.0);
    CHECK(v.blps == 0.0);
    Trajectory empty;
    CHECK_THROWS_AS(average_velocity(empty, geom), Error);
}

TEST_CASE("pivot follows a circular arc about the planted foot") {
    const RobotGeometry geom;
    const PivotManeuver m = maneuver_pivot(LegId::A, 1.0, 0.153, geom);
    BodyState moving;
    moving.speed = 0.30;
    moving.heading = geom.leg_azimuths[0] + kPi / 2;
    const Trajectory traj = simulate_pivot(moving, m, geom);

    const Vec2 anchor = 0.153 * unit_from_angle(geom.leg_azimuths[0]);
    for (const TrajectorySample& s : traj.samples) {
        CHECK(distance(s.body.position, anchor) == doctest::Approx(0.153).epsilon(1e-12));
    }
    // Heading and orientation rotate together by speed * t / radius.
    const double arc = 0.30 * 1.0 / 0.153;
    const double dh = traj.end_state().heading - moving.heading;
    const double dq = traj.end_state().orientation - moving.orientation;
    CHECK(std::abs(dh) == doctest::Approx(arc).epsilon(1e-9));
    CHECK(dh == doctest::Approx(dq).epsilon(1e-12));

    const PivotManeuver twice = maneuver_pivot(LegId::A, 2.0, 0.153, geom);
    const double dh2 =
        simulate_pivot(moving, twice, geom).end_state().heading - moving.heading;
    CHECK(dh2 == doctest::Approx(2.0 * dh).epsilon(1e-9));

    const PivotManeuver none = maneuver_pivot(LegId::A, 0.0, 0.153, geom);
    CHECK(simulate_pivot(moving, none, geom).end_state().heading ==
          doctest::Approx(moving.heading).epsilon(1e-12));

    BodyState slow;
    slow.speed = 0.01;
    CHECK_THROWS_AS(simulate_pivot(slow, m, geom), NoMomentumError);
}

TEST_CASE("pivot turning radius equals the anchor distance") {
    const RobotGeometry geom;
    for (const double r : {0.12, 0.153}) {
        const PivotManeuver m = maneuver_pivot(LegId::A, 1.0, r, geom);
        BodyState moving;
        moving.speed = 0.30;
        moving.heading = geom.leg_azimuths[0] + kPi / 2;
        const Trajectory traj = simulate_pivot(moving, m, geom);
        const std::optional<double> tr = turning_radius(traj);
        REQUIRE(tr.has_value());
        CHECK(*tr == doctest::Approx(r).epsilon(1e-3 / r));
    }
}

TEST_CASE("heading change: instantaneous, orientation preserved, radius zero") {
    const RobotGeometry geom;
    BodyState state;
    state.speed = 0.3;
    state.heading = kPi;
    CHECK(change_heading(state, LegId::A, LegId::A, geom).heading == state.heading);
    const BodyState turned = change_heading(state, LegId::A, LegId::B, geom);
    CHECK(turned.heading == doctest::Approx(kPi + 2.0 * kPi / 3.0).epsilon(1e-12));
    CHECK(turned.orientation == state.orientation);

    const CoastModel coast;
    const GaitSchedule g1 = build_skate(0.10, 0.04, 0.30, 0.65, geom);
    GaitTuning lead_b;
    lead_b.active_leg = LegId::B;
    const GaitSchedule g2 = build_skate(0.10, 0.04, 0.30, 0.65, geom, lead_b);
    const Trajectory t1 = simulate(g1, geom, coast, 3);
    const BodyState mid = change_heading(t1.end_state(), LegId::A, LegId::B, geom);
    const Trajectory t2 = simulate(g2, geom, coast, 3, {}, mid);
    const Trajectory whole = concat(t1, t2);

    const std::optional<double> tr = turning_radius(whole);
    REQUIRE(tr.has_value());
    CHECK(*tr == 0.0);
    CHECK(std::abs(whole.end_state().orientation -
                   whole.samples.front().body.orientation) < 1e-9);
}

TEST_CASE("turning radius recovers synthetic arcs and rejects straight paths") {
    for (const double r : {0.1, 0.153, 0.3}) {
        const std::optional<double> tr = turning_radius(synthetic_arc(r, 2.0));
        REQUIRE(tr.has_value());
        CHECK(std::abs(*tr - r) < 1e-3);
    }
    const std::optional<double> none = turning_radius(synthetic_arc(0.3, 0.001));
    CHECK_FALSE(none.has_value());
}

TEST_CASE("incline rolling approaches the analytic terminal speed") {
    const RobotGeometry geom;
    const CoastModel coast;
    const SimOptions opt;
    BodyState rest;

    SUBCASE("level ground, at rest: nothing happens") {
        const Trajectory still = incline_roll(rest, 0.0, coast, 2.0, geom, opt);
        CHECK(still.net_displacement().norm() == 0.0);
    }
    SUBCASE("terminal speed") {
        const double incline = 0.1;
        const Trajectory roll = incline_roll(rest, incline, coast, 3.0, geom, opt);
        const double expected = opt.gravity * std::sin(incline) / coast.decay_rate;
        CHECK(roll.end_state().speed == doctest::Approx(expected).epsilon(0.01));
        // Exact discrete integration: much tighter than the 1% gate.
        CHECK(roll.end_state().speed == doctest::Approx(expected).epsilon(1e-6));
    }
    SUBCASE("braked feet hold below the friction threshold") {
        const Trajectory held = incline_roll(rest, 0.1, coast, 2.0, geom, opt, true);
        CHECK(held.net_displacement().norm() == 0.0);
        const Trajectory slips =
            incline_roll(rest, std::atan(opt.friction_mu) + 0.05, coast, 2.0, geom, opt, true);
        CHECK(slips.net_displacement().norm() > 0.0);
    }
}

TEST_CASE("unstable schedules are rejected unless overridden") {
    const RobotGeometry geom;
    const GaitSchedule bad = build_shuffle(-0.10, 0.44, geom);
    CHECK_THROWS_AS(simulate(bad, geom, CoastModel{}, 1), UnstablePhaseError);
    SimOptions lax;
    lax.ignore_stability = true;
    const Trajectory traj = simulate(bad, geom, CoastModel{}, 1, lax);
    double min_margin = 1e9;
    for (const TrajectorySample& s : traj.samples) min_margin = std::min(min_margin, s.margin);
    CHECK(min_margin < 0.0);
}
