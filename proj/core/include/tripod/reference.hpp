#pragma once

namespace tripod {

// Published top-speed and turning-radius figures used to annotate metric
// reports. A negative BL/s marks an unreported value.
struct SpeedReference {
    const char* robot;
    double max_speed_mps;
    double max_speed_blps;
};

struct TurningReference {
    const char* robot;
    double turning_radius_m;
};

inline constexpr SpeedReference kSpeedReferences[] = {
    {"MVA tripod", 0.01, 0.11},
    {"this robot (scooting)", 0.16, 0.72},
    {"STriDER", 0.21, 0.11},
    {"this robot (shuffling)", 0.39, 1.74},
    {"this robot (skating)", 0.56, 2.49},
    {"Ballbot", 0.75, -1.0},
    {"Spot", 1.60, 1.45},
    {"Ascento", 2.22, -1.0},
};

inline constexpr TurningReference kTurningReferences[] = {
    {"this robot (heading change)", 0.0},
    {"this robot (pivot)", 0.153},
    {"Ballbot", 0.0},
    {"Ascento", 0.36},
    {"Spot", 0.95},
};

}  // namespace tripod
