#include "tripod/cli.hpp"

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "tripod/config.hpp"
#include "tripod/errors.hpp"
#include "tripod/reference.hpp"
#include "tripod/servo_csv.hpp"

namespace tripod {

namespace {

namespace fs = std::filesystem;

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.9g", v);
    return buf;
}

struct Metrics {
    std::vector<std::pair<std::string, std::string>> rows;
    std::vector<std::string> notes;

    void add(const std::string& key, double value) { rows.emplace_back(key, fmt(value)); }
    void add(const std::string& key, const std::string& value) {
        rows.emplace_back(key, value);
    }
    std::string text() const {
        std::string out;
        for (const auto& [k, v] : rows) out += k + " = " + v + "\n";
        for (const std::string& n : notes) out += "# " + n + "\n";
        return out;
    }
};

void annotate_speed_references(Metrics& m) {
    for (const SpeedReference& r : kSpeedReferences) {
        std::string line = std::string("reference: ") + r.robot + " " +
                           fmt(r.max_speed_mps) + " m/s";
        if (r.max_speed_blps >= 0.0) line += " (" + fmt(r.max_speed_blps) + " BL/s)";
        m.notes.push_back(line);
    }
}

void annotate_turning_references(Metrics& m) {
    for (const TurningReference& r : kTurningReferences) {
        m.notes.push_back(std::string("reference: ") + r.robot + " turning radius " +
                          fmt(r.turning_radius_m) + " m");
    }
}

struct CliArgs {
    std::string subject;
    int strides = 10;
    std::string config_path;
    std::string out_dir = ".";
    bool backward = false;
    bool braked = false;
    bool ignore_stability = false;
    double speed = -1.0;
    double anchor_distance = -1.0;
    double duration = -1.0;
    double rise = -1.0;
    double tread = -1.0;
    double cord_height = -1.0;
    double incline = -1.0;
};

RobotConfig resolve_config(const std::string& flag_path) {
    if (!flag_path.empty()) return load_config(flag_path);
    if (const char* env = std::getenv("TRIPOD_CONFIG"); env != nullptr && *env != '\0') {
        return load_config(env);
    }
    return RobotConfig{};
}

GaitSchedule hold_targets(const std::string& name, const std::array<FootTarget, 3>& targets,
                          ContactMode mode, double duration) {
    GaitSchedule g;
    g.kind = GaitKind::Stand;
    g.name = name;
    GaitPhase phase{name, duration, {}, 0.0, true};
    for (int leg = 0; leg < 3; ++leg) {
        phase.legs[leg] = {targets[leg], targets[leg], mode, true, false};
    }
    g.phases = {phase};
    return g;
}

void write_outputs(const std::string& out_dir, const Trajectory& traj,
                   const Metrics& metrics, const std::string& servo) {
    fs::create_directories(out_dir);
    write_text_file((fs::path(out_dir) / "trajectory.csv").string(), trajectory_csv(traj));
    write_text_file((fs::path(out_dir) / "metrics.txt").string(), metrics.text());
    write_text_file((fs::path(out_dir) / "servo_schedule.csv").string(), servo);
}

Trajectory stair_bookkeeping_trajectory(const std::vector<SequenceStep>& steps,
                                        const SequenceTrace& trace) {
    Trajectory traj;
    traj.period = static_cast<double>(steps.size());
    traj.strides = 1;
    for (std::size_t i = 0; i < steps.size(); ++i) {
        TrajectorySample s;
        s.t = static_cast<double>(i);
        s.body.position = {steps[i].end_advance, 0.0};
        s.body.orientation = 0.0;
        s.contacts = steps[i].contacts;
        s.support = trace.support_trace[i];
        s.margin = stability_margin({0.0, 0.0}, steps[i].contacts).margin;
        traj.samples.push_back(std::move(s));
    }
    return traj;
}

int dispatch(const CliArgs& args) {
    const RobotConfig cfg = resolve_config(args.config_path);
    SimOptions opt = cfg.sim_options();
    opt.ignore_stability = args.ignore_stability;
    const RobotGeometry& geom = cfg.geometry;
    const std::string& subject = args.subject;

    if (subject == "scoot" || subject == "skate" || subject == "shuffle") {
        GaitSchedule g = subject == "scoot"
                             ? cfg.default_scoot()
                             : (subject == "skate" ? cfg.default_skate()
                                                   : cfg.default_shuffle());
        if (args.backward) g = reverse(g);
        const Trajectory traj = simulate(g, geom, cfg.coast, args.strides, opt);
        const VelocityReport vel = average_velocity(traj, geom);
        const ScheduleStability st =
            check_schedule_stability(g, geom, cfg.com, cfg.sim.tick);
        Metrics m;
        m.add("gait", g.name);
        m.add("strides", static_cast<double>(args.strides));
        m.add("elapsed_s", traj.elapsed());
        m.add("distance_m", traj.net_displacement().norm());
        m.add("speed_mps", vel.mps);
        m.add("speed_blps", vel.blps);
        m.add("min_margin_m", st.min_margin);
        annotate_speed_references(m);
        write_outputs(args.out_dir, traj, m, export_servo_schedule(g, cfg));
        return 0;
    }

    if (subject == "stand" || subject == "brake") {
        const double duration = args.duration > 0.0 ? args.duration : 1.0;
        const GaitSchedule g = subject == "stand"
                                   ? maneuver_stand(geom, cfg.tuning, duration)
                                   : maneuver_brake(geom, cfg.tuning, duration);
        BodyState initial;
        initial.speed = args.speed >= 0.0 ? args.speed : 0.0;
        const Trajectory traj = simulate(g, geom, cfg.coast, args.strides, opt, initial);
        Metrics m;
        m.add("maneuver", g.name);
        m.add("initial_speed_mps", initial.speed);
        m.add("displacement_m", traj.net_displacement().norm());
        m.add("final_speed_mps", traj.end_state().speed);
        m.add("orientation_delta_rad",
              traj.end_state().orientation - traj.samples.front().body.orientation);
        write_outputs(args.out_dir, traj, m, export_servo_schedule(g, cfg));
        return 0;
    }

    if (subject == "pivot") {
        const double anchor =
            args.anchor_distance > 0.0 ? args.anchor_distance : cfg.pivot.anchor_distance;
        const double duration = args.duration >= 0.0 ? args.duration : cfg.pivot.duration;
        const PivotManeuver maneuver =
            maneuver_pivot(LegId::A, duration, anchor, geom, cfg.tuning);
        BodyState initial;
        initial.speed = args.speed >= 0.0 ? args.speed : cfg.pivot.initial_speed;
        initial.heading = geom.leg_azimuths[0] + std::numbers::pi / 2;  // tangential
        const Trajectory traj = simulate_pivot(initial, maneuver, geom, opt);
        Metrics m;
        m.add("maneuver", std::string("pivot"));
        m.add("anchor_distance_m", anchor);
        m.add("contact_duration_s", duration);
        m.add("turning_radius_m", turning_radius(traj).value_or(0.0));
        m.add("heading_delta_rad",
              traj.end_state().heading - traj.samples.front().body.heading);
        annotate_turning_references(m);
        write_outputs(args.out_dir, traj, m, export_servo_schedule(maneuver.schedule, cfg));
        return 0;
    }

    if (subject == "heading-change") {
        const int before = std::max(1, args.strides / 2);
        const int after = std::max(1, args.strides - before);
        GaitTuning lead_b = cfg.tuning;
        lead_b.active_leg = LegId::B;
        const GaitSchedule g1 = cfg.default_skate();
        const GaitSchedule g2 =
            build_skate(cfg.gaits.skate_stroke, cfg.gaits.skate_lift,
                        cfg.gaits.skate_period, cfg.gaits.skate_coast_fraction, geom, lead_b);
        const Trajectory t1 = simulate(g1, geom, cfg.coast, before, opt);
        const BodyState turned = change_heading(t1.end_state(), LegId::A, LegId::B, geom);
        const Trajectory t2 = simulate(g2, geom, cfg.coast, after, opt, turned);
        const Trajectory traj = concat(t1, t2);
        Metrics m;
        m.add("maneuver", std::string("heading-change"));
        m.add("turning_radius_m", turning_radius(traj).value_or(0.0));
        m.add("orientation_delta_rad",
              traj.end_state().orientation - traj.samples.front().body.orientation);
        m.add("heading_delta_rad", geom.leg_azimuths[1] - geom.leg_azimuths[0]);
        annotate_turning_references(m);
        std::string servo = export_servo_schedule(g1, cfg);
        servo += "# step:new-leading-leg\n";
        const std::string part2 = export_servo_schedule(g2, cfg);
        servo += part2.substr(part2.find('\n') + 1);
        write_outputs(args.out_dir, traj, m, servo);
        return 0;
    }

    if (subject == "incline-roll") {
        const double incline = args.incline >= 0.0 ? args.incline : 0.1;
        const double duration = args.duration > 0.0 ? args.duration : 3.0;
        BodyState initial;
        initial.speed = args.speed >= 0.0 ? args.speed : 0.0;
        const Trajectory traj =
            incline_roll(initial, incline, cfg.coast, duration, geom, opt, args.braked);
        Metrics m;
        m.add("maneuver", std::string(args.braked ? "incline-brake" : "incline-roll"));
        m.add("incline_rad", incline);
        m.add("terminal_speed_mps",
              cfg.coast.decay_rate > 0.0
                  ? cfg.sim.gravity * std::sin(incline) / cfg.coast.decay_rate
                  : 0.0);
        m.add("final_speed_mps", traj.end_state().speed);
        m.add("displacement_m", traj.net_displacement().norm());
        const GaitSchedule pose =
            args.braked ? maneuver_brake(geom, cfg.tuning) : maneuver_stand(geom, cfg.tuning);
        write_outputs(args.out_dir, traj, m, export_servo_schedule(pose, cfg));
        return 0;
    }

    if (subject == "orientation-stand") {
        const double incline = args.incline >= 0.0 ? args.incline : 0.0;
        const std::array<FootTarget, 3> targets =
            orientation_aware_stand(incline, geom, cfg.tuning);
        const GaitSchedule g = hold_targets("orientation-stand", targets,
                                            ContactMode::Frictional, 1.0);
        const Trajectory traj = simulate(g, geom, cfg.coast, 1, opt);
        Metrics m;
        m.add("maneuver", std::string("orientation-stand"));
        m.add("incline_rad", incline);
        m.add("max_standable_incline_rad", max_standable_incline(geom, cfg.tuning));
        for (int leg = 0; leg < 3; ++leg) {
            const std::string prefix = std::string("target_") + to_string(static_cast<LegId>(leg));
            m.add(prefix + "_x_m", targets[leg].x);
            m.add(prefix + "_y_m", targets[leg].y);
        }
        write_outputs(args.out_dir, traj, m, export_servo_schedule(g, cfg));
        return 0;
    }

    if (subject == "stairs") {
        StairSpec stair;
        stair.rise = args.rise > 0.0 ? args.rise : cfg.sequences.stair_rise;
        stair.tread_depth = args.tread > 0.0 ? args.tread : cfg.sequences.stair_tread;
        const Feasibility feas = stair_feasible(stair, geom, cfg.tuning);
        if (!feas.feasible) {
            for (const std::string& r : feas.reasons) {
                std::cerr << "stairs infeasible: " << r << "\n";
            }
            return 2;
        }
        const std::vector<SequenceStep> steps =
            build_stair_sequence(stair, geom, cfg.tuning, cfg.sequences.stair_clearance);
        const SequenceTrace trace = execute_sequence(steps, geom, cfg.sim.tick);
        Metrics m;
        m.add("sequence", std::string("stairs"));
        m.add("steps", static_cast<double>(trace.steps));
        m.add("rise_m", stair.rise);
        m.add("tread_m", stair.tread_depth);
        m.add("final_elevation_m", trace.final_elevation);
        m.add("chain_ok", std::string(trace.chain_ok ? "true" : "false"));
        m.add("supports_match", std::string(trace.supports_match ? "true" : "false"));
        std::string supports;
        for (const SupportMode mode : trace.support_trace) {
            if (!supports.empty()) supports += ",";
            supports += to_string(mode);
        }
        m.add("support_trace", supports);
        write_outputs(args.out_dir, stair_bookkeeping_trajectory(steps, trace), m,
                      export_sequence_schedule(steps, cfg));
        return 0;
    }

    if (subject == "cord") {
        const double cord =
            args.cord_height >= 0.0 ? args.cord_height : cfg.sequences.cord_height;
        const std::vector<SequenceStep> steps =
            build_cord_sequence(cord, geom, cfg.tuning, cfg.cord_params());
        const SequenceTrace trace = execute_sequence(steps, geom, cfg.sim.tick);
        Trajectory traj;
        BodyState state;
        LegId previous_active = steps.front().schedule->active_leg;
        for (const SequenceStep& step : steps) {
            if (step.heading_changes > 0) {
                state = change_heading(state, previous_active, step.schedule->active_leg, geom);
            }
            const Trajectory part = simulate(*step.schedule, geom, cfg.coast, 1, opt, state);
            state = part.end_state();
            previous_active = step.schedule->active_leg;
            traj = traj.samples.empty() ? part : concat(traj, part);
        }
        Metrics m;
        m.add("sequence", std::string("cord"));
        m.add("cord_height_m", cord);
        m.add("heading_changes", static_cast<double>(trace.heading_changes));
        m.add("min_clearance_m", trace.min_crossing_clearance);
        m.add("steps", static_cast<double>(trace.steps));
        write_outputs(args.out_dir, traj, m, export_sequence_schedule(steps, cfg));
        return 0;
    }

    std::cerr << "unknown subject '" << subject
              << "'; expected a gait (scoot|skate|shuffle), maneuver "
                 "(stand|brake|pivot|heading-change|incline-roll|orientation-stand) "
                 "or sequence (stairs|cord)\n";
    return 1;
}

}  // namespace

int run_cli(int argc, const char* const* argv) {
    CLI::App app{"tripedal rolling/legged robot gait and maneuver simulator"};
    app.name("tripod");
    CliArgs args;

    CLI::App* sim = app.add_subcommand("simulate", "simulate a gait, maneuver or sequence");
    sim->add_option("subject", args.subject,
                    "scoot|skate|shuffle|stand|brake|pivot|heading-change|"
                    "incline-roll|orientation-stand|stairs|cord")
        ->required();
    sim->add_option("--strides", args.strides, "number of gait cycles")
        ->check(CLI::PositiveNumber);
    sim->add_option("--config", args.config_path, "config file (else $TRIPOD_CONFIG)");
    sim->add_option("--out", args.out_dir, "output directory");
    sim->add_flag("--backward", args.backward, "reverse the gait");
    sim->add_flag("--braked", args.braked, "frictional feet during incline-roll");
    sim->add_flag("--ignore-stability", args.ignore_stability,
                  "skip the stability gate");
    sim->add_option("--speed", args.speed, "initial body speed (m/s)");
    sim->add_option("--anchor-distance", args.anchor_distance,
                    "pivot: sphere center to planted foot (m)");
    sim->add_option("--duration", args.duration, "maneuver duration (s)");
    sim->add_option("--rise", args.rise, "stairs: rise height (m)");
    sim->add_option("--tread", args.tread, "stairs: tread depth (m)");
    sim->add_option("--cord-height", args.cord_height, "cord: obstacle height (m)");
    sim->add_option("--incline", args.incline, "slope angle (rad)");
    app.require_subcommand(1);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    try {
        return dispatch(args);
    } catch (const ParseError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const ValidationError& e) {
        std::cerr << e.what() << "\n";
        return 1;
    } catch (const InfeasibleError& e) {
        std::cerr << e.what() << "\n";
        for (const std::string& r : e.reasons()) std::cerr << "  - " << r << "\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << e.what() << "\n";
        return 2;
    }
}

}  // namespace tripod
