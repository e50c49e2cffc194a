#include <benchmark/benchmark.h>

#include "tripod/config.hpp"
#include "tripod/servo_csv.hpp"
#include "tripod/simulator.hpp"

namespace {

using namespace tripod;

void BM_LegIk(benchmark::State& state) {
    const RobotGeometry geom;
    const FootTarget target{0.11, geom.ground_y()};
    for (auto _ : state) {
        JointAngles q = leg_ik(target, std::numbers::pi / 2, geom);
        benchmark::DoNotOptimize(q);
    }
}
BENCHMARK(BM_LegIk);

void BM_LegFk(benchmark::State& state) {
    const RobotGeometry geom;
    const JointAngles q{std::numbers::pi / 2, 0.4, -0.9};
    for (auto _ : state) {
        FootTarget t = leg_fk(q, geom);
        benchmark::DoNotOptimize(t);
    }
}
BENCHMARK(BM_LegFk);

void BM_StabilityMargin(benchmark::State& state) {
    ContactSet contacts;
    contacts.points = {{ContactLabel::FootA, {0.12, 0.0}},
                       {ContactLabel::FootB, {-0.03, 0.052}},
                       {ContactLabel::FootC, {-0.03, -0.052}},
                       {ContactLabel::Sphere, {0.0, 0.0}}};
    const Vec2 com{0.004, -0.002};
    for (auto _ : state) {
        StabilityReport r = stability_margin(com, contacts);
        benchmark::DoNotOptimize(r);
    }
}
BENCHMARK(BM_StabilityMargin);

void BM_SimulateScootStride(benchmark::State& state) {
    const RobotConfig cfg;
    const GaitSchedule g = cfg.default_scoot();
    SimOptions opt = cfg.sim_options();
    opt.ignore_stability = true;  // measure the integrator alone
    for (auto _ : state) {
        Trajectory traj = simulate(g, cfg.geometry, cfg.coast, 1, opt);
        benchmark::DoNotOptimize(traj);
    }
}
BENCHMARK(BM_SimulateScootStride);

void BM_ScheduleStabilityCheck(benchmark::State& state) {
    const RobotConfig cfg;
    const GaitSchedule g = cfg.default_skate();
    for (auto _ : state) {
        ScheduleStability st =
            check_schedule_stability(g, cfg.geometry, cfg.com, cfg.sim.tick);
        benchmark::DoNotOptimize(st);
    }
}
BENCHMARK(BM_ScheduleStabilityCheck);

void BM_ServoExport(benchmark::State& state) {
    const RobotConfig cfg;
    const GaitSchedule g = cfg.default_skate();
    for (auto _ : state) {
        std::string csv = export_servo_schedule(g, cfg);
        benchmark::DoNotOptimize(csv);
    }
}
BENCHMARK(BM_ServoExport);

}  // namespace

BENCHMARK_MAIN();
