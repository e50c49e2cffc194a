#include "tripod/kinematics.hpp"

#include <cmath>
#include <sstream>

#include "tripod/errors.hpp"

namespace tripod {

namespace {

constexpr double kAcosSlack = 1e-12;
constexpr double kPi = std::numbers::pi;

double clamped_acos(double c, const char* what) {
    if (c > 1.0) {
        if (c > 1.0 + kAcosSlack) {
            std::ostringstream os;
            os << what << ": acos argument " << c << " out of domain";
            throw UnreachableError(os.str());
        }
        c = 1.0;
    } else if (c < -1.0) {
        if (c < -1.0 - kAcosSlack) {
            std::ostringstream os;
            os << what << ": acos argument " << c << " out of domain";
            throw UnreachableError(os.str());
        }
        c = -1.0;
    }
    return std::acos(c);
}

struct RawSolution {
    double x1 = 0.0;
    double y1 = 0.0;
    double cos_q2 = 0.0;
    double q1 = 0.0;
    double q2 = 0.0;
    bool in_annulus = false;
    bool within_limits = false;
};

// Shared core of leg_ik and workspace_contains so both agree exactly on
// where a solution exists.
RawSolution solve_leg(const FootTarget& target, double q0, const RobotGeometry& g) {
    RawSolution s;
    const double gamma = q0 - std::atan(g.d / g.L0);
    const double reach = g.shoulder_reach();
    s.x1 = target.x - std::cos(gamma) * reach;
    s.y1 = target.y - std::sin(gamma) * reach;

    const double r2 = s.x1 * s.x1 + s.y1 * s.y1;
    s.cos_q2 = (r2 - g.L1 * g.L1 - g.L2 * g.L2) / (2.0 * g.L1 * g.L2);
    s.in_annulus = s.cos_q2 >= -1.0 - kAcosSlack && s.cos_q2 <= 1.0 + kAcosSlack;
    if (!s.in_annulus) return s;

    const double c = std::clamp(s.cos_q2, -1.0, 1.0);
    s.q2 = -std::acos(c);
    s.q1 = kPi / 2 - q0 - std::atan2(s.y1, s.x1) +
           std::atan2(g.L2 * std::sin(s.q2), g.L1 + g.L2 * std::cos(s.q2));

    const JointLimits& lim = g.limits;
    s.within_limits = s.q1 >= lim.q1_min && s.q1 <= lim.q1_max &&
                      s.q2 >= lim.q2_min && s.q2 <= lim.q2_max;
    return s;
}

}  // namespace

std::vector<std::string> RobotGeometry::validate() const {
    std::vector<std::string> bad;
    auto positive = [&](double v, const char* name) {
        if (!(v > 0.0) || !std::isfinite(v)) {
            bad.push_back(std::string(name) + " must be strictly positive");
        }
    };
    positive(L0, "geometry.L0");
    positive(L1, "geometry.L1");
    positive(L2, "geometry.L2");
    positive(d, "geometry.d");
    positive(sphere_radius, "geometry.sphere_radius");
    positive(body_length, "geometry.body_length");
    positive(hip_height, "geometry.hip_height");
    for (int i = 0; i < 3; ++i) {
        const double delta =
            wrap_angle(leg_azimuths[(i + 1) % 3] - leg_azimuths[i]);
        if (std::abs(delta - 2.0 * kPi / 3.0) > 1e-9) {
            bad.push_back("geometry.leg_azimuths must be spaced exactly 120 deg apart");
            break;
        }
    }
    if (!(limits.q1_min < limits.q1_max) || !(limits.q2_min < limits.q2_max)) {
        bad.push_back("geometry.limits must satisfy min < max");
    }
    // The workspace must be non-empty: the straight-leg pose along the
    // shoulder direction is always inside the annulus, so only the joint
    // limits can empty it.
    if (bad.empty()) {
        bool any = false;
        for (int i = 0; i <= 40 && !any; ++i) {
            const double q1 = limits.q1_min + (limits.q1_max - limits.q1_min) * i / 40.0;
            for (int j = 0; j <= 40 && !any; ++j) {
                const double q2 = limits.q2_min + (limits.q2_max - limits.q2_min) * j / 40.0;
                const FootTarget t = leg_fk({kPi / 2, q1, q2}, *this);
                if (workspace_contains(t, kPi / 2, *this).contained) any = true;
            }
        }
        if (!any) bad.push_back("geometry admits no reachable foot target");
    }
    return bad;
}

double tilt_angle(const TiltInput& tilt, const RobotGeometry& geom) {
    if (!std::isfinite(tilt.theta) || !std::isfinite(tilt.psi)) {
        throw Error("tilt_angle: tilt input must be finite");
    }
    if (!(geom.L0 > 0.0)) {
        throw Error("tilt_angle: geometry.L0 must be positive");
    }
    // The L0 factors of the derivation cancel; only the attitude survives.
    const double a = std::cos(tilt.psi) * std::sin(tilt.theta);
    const double b = std::sin(tilt.psi);
    return clamped_acos(std::sqrt(a * a + b * b), "tilt_angle");
}

JointAngles leg_ik(const FootTarget& target, double q0, const RobotGeometry& geom) {
    const RawSolution s = solve_leg(target, q0, geom);
    if (!s.in_annulus) {
        std::ostringstream os;
        os << "leg_ik: target (" << target.x << ", " << target.y
           << ") unreachable (cos q2 = " << s.cos_q2 << ")";
        throw UnreachableError(os.str());
    }
    if (!s.within_limits) {
        std::ostringstream os;
        os << "leg_ik: solution q1 = " << s.q1 << ", q2 = " << s.q2
           << " violates servo limits";
        throw JointLimitError(os.str());
    }
    return {q0, s.q1, s.q2};
}

FootTarget leg_fk(const JointAngles& a, const RobotGeometry& geom) {
    const double gamma = a.q0 - std::atan(geom.d / geom.L0);
    const double reach = geom.shoulder_reach();
    // Upper-link absolute angle in the leg plane; q1 is measured so that
    // q1 = pi/2 - q0 - alpha, matching the inverse solution's frame.
    const double alpha = kPi / 2 - a.q0 - a.q1;
    return {std::cos(gamma) * reach + geom.L1 * std::cos(alpha) +
                geom.L2 * std::cos(alpha + a.q2),
            std::sin(gamma) * reach + geom.L1 * std::sin(alpha) +
                geom.L2 * std::sin(alpha + a.q2)};
}

WorkspaceQuery workspace_contains(const FootTarget& target, double q0,
                                  const RobotGeometry& geom) {
    const RawSolution s = solve_leg(target, q0, geom);
    const double r = std::hypot(s.x1, s.y1);
    const double r_min = std::abs(geom.L1 - geom.L2);
    const double r_max = geom.L1 + geom.L2;
    WorkspaceQuery q;
    q.margin = std::min(r - r_min, r_max - r);
    q.contained = s.in_annulus && s.within_limits;
    return q;
}

}  // namespace tripod
