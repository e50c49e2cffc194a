#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "tripod/cli.hpp"
#include "tripod/config.hpp"
#include "tripod/errors.hpp"
#include "tripod/servo_csv.hpp"

using namespace tripod;
namespace fs = std::filesystem;

namespace {

fs::path scratch_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / "tripod_tests" / name;
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream os;
    os << in.rdbuf();
    return os.str();
}

int cli(const std::vector<std::string>& args) {
    std::vector<const char*> argv{"tripod"};
    for (const std::string& a : args) argv.push_back(a.c_str());
    return run_cli(static_cast<int>(argv.size()), argv.data());
}

bool config_equal(const RobotConfig& a, const RobotConfig& b) {
    return config_to_text(a) == config_to_text(b);
}

}  // namespace

TEST_CASE("empty config yields the built-in defaults") {
    const fs::path dir = scratch_dir("empty_cfg");
    const fs::path file = dir / "empty.cfg";
    std::ofstream(file).close();
    const RobotConfig loaded = load_config(file.string());
    CHECK(config_equal(loaded, RobotConfig{}));
    CHECK(loaded.geometry.L0 == 0.1);
    CHECK(loaded.geometry.sphere_radius == 0.1);
    CHECK(loaded.coast.push_gain == doctest::Approx(0.651428571428571).epsilon(1e-15));
}

TEST_CASE("config round trip preserves every field") {
    RobotConfig c;
    c.geometry.L1 = 0.135;
    c.geometry.leg_azimuths = {0.1, 0.1 + 2 * std::numbers::pi / 3,
                               0.1 + 4 * std::numbers::pi / 3};
    c.coast.decay_rate = 4.75;
    c.tuning.stance_radius = 0.055;
    c.gaits.skate_period = 0.36;
    c.servo.min_deg = -5.0;
    c.sim.friction_mu = 0.65;
    c.sequences.cord_height = 0.013;
    c.coast_calibration = "hand-tuned for the bench robot";

    const fs::path file = scratch_dir("roundtrip") / "robot.cfg";
    save_config(c, file.string());
    const RobotConfig back = load_config(file.string());
    CHECK(config_equal(back, c));
}

TEST_CASE("config parse and validation failures") {
    SUBCASE("unknown key") {
        std::istringstream in("geometry.L9 = 1.0\n");
        CHECK_THROWS_AS(parse_config(in), ParseError);
    }
    SUBCASE("non-numeric value") {
        std::istringstream in("geometry.L0 = fast\n");
        CHECK_THROWS_AS(parse_config(in), ParseError);
    }
    SUBCASE("duplicate key") {
        std::istringstream in("geometry.L0 = 0.1\ngeometry.L0 = 0.2\n");
        CHECK_THROWS_AS(parse_config(in), ParseError);
    }
    SUBCASE("comments and blank lines are fine") {
        std::istringstream in("# a comment\n\ngeometry.L0 = 0.11  # trailing\n");
        CHECK(parse_config(in).geometry.L0 == 0.11);
    }
    SUBCASE("validation names the violated field") {
        std::istringstream in("geometry.sphere_radius = -1\n");
        try {
            parse_config(in);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            REQUIRE(!e.violations().empty());
            CHECK(e.violations()[0].find("geometry.sphere_radius") != std::string::npos);
        }
    }
    SUBCASE("every violation is reported at once") {
        std::istringstream in("geometry.sphere_radius = -1\ncoast.push_gain = 2\n");
        try {
            parse_config(in);
            FAIL("expected ValidationError");
        } catch (const ValidationError& e) {
            CHECK(e.violations().size() >= 2);
        }
    }
}

TEST_CASE("servo export: stand is constant, row count matches the contract") {
    const RobotConfig cfg;
    const GaitSchedule stand = maneuver_stand(cfg.geometry, cfg.tuning);
    const std::string csv = export_servo_schedule(stand, cfg);
    const std::vector<ServoRow> rows = parse_servo_schedule(csv);

    const int ticks = static_cast<int>(std::ceil(stand.period() / cfg.sim.tick));
    CHECK(rows.size() == static_cast<std::size_t>(ticks) * 9);  // 9 channels per tick

    for (const ServoRow& r : rows) {
        CHECK(r.angle_deg >= 0.0);
        CHECK(r.angle_deg <= 180.0);
        CHECK(r.contact_mode == "rolling");
        if (r.joint == "effector") CHECK(r.angle_deg == 0.0);
    }
    // Constant pose: every tick repeats the first nine rows.
    for (std::size_t i = 9; i < rows.size(); ++i) {
        CHECK(rows[i].angle_deg == rows[i % 9].angle_deg);
        CHECK(rows[i].joint == rows[i % 9].joint);
    }
}

TEST_CASE("servo export round trip reproduces foot targets within quantization") {
    const RobotConfig cfg;
    const GaitSchedule g = cfg.default_scoot();
    const std::string csv = export_servo_schedule(g, cfg);
    const std::vector<ServoRow> rows = parse_servo_schedule(csv);

    // 0.5 degree of joint error maps to at most this much foot error.
    const double tol = 0.5 * std::numbers::pi / 180.0 *
                       (cfg.geometry.L1 + cfg.geometry.L2);

    for (std::size_t i = 0; i + 2 < rows.size(); i += 3) {
        REQUIRE(rows[i].joint == "hip");
        REQUIRE(rows[i + 1].joint == "knee");
        const double t = rows[i].t_ms / 1000.0;
        const LegId leg = rows[i].leg;
        JointAngles q;
        q.q0 = g.leg_q0(leg, t, cfg.geometry);
        q.q1 = servo_to_joint(rows[i].angle_deg, cfg.servo.hip);
        q.q2 = servo_to_joint(rows[i + 1].angle_deg, cfg.servo.knee);
        const FootTarget fk = leg_fk(q, cfg.geometry);
        const FootTarget want = g.sample(t).legs[static_cast<int>(leg)].target;
        CHECK(std::hypot(fk.x - want.x, fk.y - want.y) < tol);
    }
}

TEST_CASE("servo export rejects angles outside the servo range") {
    RobotConfig cfg;
    cfg.geometry.limits.q1_max = 2.0;  // wider than the servo can express
    GaitSchedule g;
    g.kind = GaitKind::Stand;
    g.name = "overdriven";
    GaitPhase phase{"hold", 0.5, {}, 0.0, true};
    // A target needing q1 well past pi/2.
    const FootTarget deep{-0.07, cfg.geometry.ground_y()};
    for (int leg = 0; leg < 3; ++leg) {
        phase.legs[leg] = {deep, deep, ContactMode::Frictional, true, false};
    }
    g.phases = {phase};
    CHECK_THROWS_AS(export_servo_schedule(g, cfg), JointLimitError);
}

TEST_CASE("cli writes the output triple and honors exit codes") {
    const fs::path dir = scratch_dir("cli_run");
    CHECK(cli({"simulate", "skate", "--strides", "4", "--out", dir.string()}) == 0);
    CHECK(fs::exists(dir / "trajectory.csv"));
    CHECK(fs::exists(dir / "servo_schedule.csv"));
    const std::string metrics = slurp(dir / "metrics.txt");
    CHECK(metrics.find("speed_mps = ") != std::string::npos);
    CHECK(metrics.find("speed_blps = ") != std::string::npos);

    // Infeasible stair: exit 2.
    CHECK(cli({"simulate", "stairs", "--rise", "0.25", "--out", dir.string()}) == 2);
    // Usage errors: exit 1.
    CHECK(cli({"simulate"}) == 1);
    CHECK(cli({"simulate", "warp-drive", "--out", dir.string()}) == 1);
    CHECK(cli({"simulate", "skate", "--no-such-flag"}) == 1);
}

TEST_CASE("cli pivot reports the commanded turning radius") {
    const fs::path dir = scratch_dir("cli_pivot");
    CHECK(cli({"simulate", "pivot", "--anchor-distance", "0.153", "--out",
               dir.string()}) == 0);
    const std::string metrics = slurp(dir / "metrics.txt");
    const auto pos = metrics.find("turning_radius_m = ");
    REQUIRE(pos != std::string::npos);
    const double radius = std::stod(metrics.substr(pos + 19));
    CHECK(radius == doctest::Approx(0.153).epsilon(1e-2));
}

TEST_CASE("cli outputs are byte-identical across runs") {
    const fs::path d1 = scratch_dir("det_a");
    const fs::path d2 = scratch_dir("det_b");
    for (const auto& dir : {d1, d2}) {
        CHECK(cli({"simulate", "scoot", "--strides", "3", "--out", dir.string()}) == 0);
    }
    CHECK(slurp(d1 / "trajectory.csv") == slurp(d2 / "trajectory.csv"));
    CHECK(slurp(d1 / "servo_schedule.csv") == slurp(d2 / "servo_schedule.csv"));
    CHECK(slurp(d1 / "metrics.txt") == slurp(d2 / "metrics.txt"));
}

TEST_CASE("TRIPOD_CONFIG is the config-path fallback") {
    const fs::path dir = scratch_dir("env_cfg");
    const fs::path cfg_file = dir / "env.cfg";
    {
        std::ofstream out(cfg_file);
        out << "gait.scoot.period = 0.8\n";
    }
    setenv("TRIPOD_CONFIG", cfg_file.string().c_str(), 1);
    const int rc = cli({"simulate", "scoot", "--strides", "2", "--out", dir.string()});
    unsetenv("TRIPOD_CONFIG");
    CHECK(rc == 0);
    const std::string metrics = slurp(dir / "metrics.txt");
    CHECK(metrics.find("elapsed_s = 1.6") != std::string::npos);  // 2 strides x 0.8 s

    setenv("TRIPOD_CONFIG", (dir / "missing.cfg").string().c_str(), 1);
    const int rc_missing = cli({"simulate", "scoot", "--out", dir.string()});
    unsetenv("TRIPOD_CONFIG");
    CHECK(rc_missing == 1);
}

TEST_CASE("sequence export carries step-boundary markers") {
    const RobotConfig cfg;
    const std::vector<SequenceStep> steps =
        build_stair_sequence({0.10, 0.15}, cfg.geometry, cfg.tuning);
    const std::string csv = export_sequence_schedule(steps, cfg);
    for (const char* label : {"# step:A", "# step:D", "# step:G"}) {
        CHECK(csv.find(label) != std::string::npos);
    }
    CHECK(parse_servo_schedule(csv).size() > 0);
}
