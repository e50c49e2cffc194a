#include "tripod/servo_csv.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

constexpr double kRadToDeg = 180.0 / std::numbers::pi;

double quantize_tenth_deg(double deg) { return std::round(deg * 10.0) / 10.0; }

double joint_to_servo(double q, const ServoChannel& ch) {
    return ch.zero_deg + ch.direction * q * kRadToDeg;
}

void append_row(std::string& out, double t_ms, LegId leg, const char* joint,
                double angle_deg, const char* mode) {
    char buf[128];
    std::snprintf(buf, sizeof buf, "%g,%s,%s,%.1f,%s\n", t_ms, to_string(leg), joint,
                  quantize_tenth_deg(angle_deg), mode);
    out += buf;
}

double checked_servo_angle(double q, const ServoChannel& ch, const RobotConfig& config,
                           const char* joint) {
    const double deg = joint_to_servo(q, ch);
    if (deg < config.servo.min_deg - 1e-9 || deg > config.servo.max_deg + 1e-9) {
        std::ostringstream os;
        os << "servo export: " << joint << " command " << deg
           << " deg is outside [" << config.servo.min_deg << ", " << config.servo.max_deg
           << "] deg";
        throw JointLimitError(os.str());
    }
    return deg;
}

// Effector servo position: 0 deg with the bearing extended (rolling),
// 180 deg retracted (frictional). A transitioning leg sweeps between the
// two over the phase.
double effector_angle(const GaitSchedule& schedule, std::size_t phase_index,
                      double phase_progress, int leg) {
    const LegPhaseTrack& track = schedule.phases[phase_index].legs[leg];
    const double target = track.contact == ContactMode::Frictional ? 180.0 : 0.0;
    if (!track.transitioning) return target;
    const double source = 180.0 - target;
    return source + (target - source) * std::clamp(phase_progress, 0.0, 1.0);
}

}  // namespace

double servo_to_joint(double angle_deg, const ServoChannel& channel) {
    return (angle_deg - channel.zero_deg) / (channel.direction * kRadToDeg);
}

std::string export_servo_schedule(const GaitSchedule& schedule, const RobotConfig& config) {
    std::string out = "t_ms,leg,joint,angle_deg,contact_mode\n";
    const double tick = config.sim.tick;
    const double period = schedule.period();
    const int n_ticks = static_cast<int>(std::ceil(period / tick - 1e-9));
    const std::vector<double> bounds = schedule.phase_boundaries();

    for (int k = 0; k < n_ticks; ++k) {
        const double t = k * tick;
        const ScheduleSample s = schedule.sample(t);
        const double phase_start = bounds[s.phase_index];
        const double progress =
            (t - phase_start) / schedule.phases[s.phase_index].duration;
        const double t_ms = t * 1000.0;
        for (int leg = 0; leg < 3; ++leg) {
            const LegSample& ls = s.legs[leg];
            const double q0 = schedule.leg_q0(static_cast<LegId>(leg), t, config.geometry);
            const JointAngles q = leg_ik(ls.target, q0, config.geometry);
            const char* mode = to_string(ls.contact);
            append_row(out, t_ms, static_cast<LegId>(leg), "hip",
                       checked_servo_angle(q.q1, config.servo.hip, config, "hip"), mode);
            append_row(out, t_ms, static_cast<LegId>(leg), "knee",
                       checked_servo_angle(q.q2, config.servo.knee, config, "knee"), mode);
            append_row(out, t_ms, static_cast<LegId>(leg), "effector",
                       effector_angle(schedule, s.phase_index, progress, leg), mode);
        }
    }
    return out;
}

std::string export_sequence_schedule(const std::vector<SequenceStep>& steps,
                                     const RobotConfig& config) {
    std::string out = "t_ms,leg,joint,angle_deg,contact_mode\n";
    for (const SequenceStep& step : steps) {
        out += "# step:" + step.label + "\n";
        if (!step.schedule) continue;
        const std::string csv = export_servo_schedule(*step.schedule, config);
        out += csv.substr(csv.find('\n') + 1);  // drop the inner header
    }
    return out;
}

std::vector<ServoRow> parse_servo_schedule(const std::string& csv) {
    std::vector<ServoRow> rows;
    std::istringstream in(csv);
    std::string line;
    bool header = true;
    while (std::getline(in, line)) {
        if (header) {
            header = false;
            continue;
        }
        if (line.empty() || line[0] == '#') continue;
        std::istringstream fields(line);
        std::string t_ms, leg, joint, angle, mode;
        if (!std::getline(fields, t_ms, ',') || !std::getline(fields, leg, ',') ||
            !std::getline(fields, joint, ',') || !std::getline(fields, angle, ',') ||
            !std::getline(fields, mode)) {
            throw ParseError("servo CSV: malformed row '" + line + "'");
        }
        ServoRow row;
        row.t_ms = std::stod(t_ms);
        row.leg = leg == "A" ? LegId::A : (leg == "B" ? LegId::B : LegId::C);
        row.joint = joint;
        row.angle_deg = std::stod(angle);
        row.contact_mode = mode;
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string trajectory_csv(const Trajectory& trajectory) {
    std::string out = "t,x,y,heading,orientation,speed,support,margin\n";
    char buf[256];
    for (const TrajectorySample& s : trajectory.samples) {
        std::snprintf(buf, sizeof buf, "%.9g,%.9g,%.9g,%.9g,%.9g,%.9g,%s,%.9g\n", s.t,
                      s.body.position.x, s.body.position.y, s.body.heading,
                      s.body.orientation, s.body.speed, to_string(s.support), s.margin);
        out += buf;
    }
    return out;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error("cannot write '" + path + "'");
    out << text;
}

}  // namespace tripod
