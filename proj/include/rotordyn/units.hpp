#pragma once

#include <numbers>

// Unit conventions: SI internally (m, kg, s, rad/s, N, Pa, K).
// RPM and Hz appear only at I/O boundaries.

namespace rotordyn {

inline constexpr double rpm_to_rad_s(double rpm) {
    return rpm * 2.0 * std::numbers::pi / 60.0;
}

inline constexpr double rad_s_to_rpm(double rad_s) {
    return rad_s * 60.0 / (2.0 * std::numbers::pi);
}

inline constexpr double hz_to_rad_s(double hz) {
    return hz * 2.0 * std::numbers::pi;
}

inline constexpr double rad_s_to_hz(double rad_s) {
    return rad_s / (2.0 * std::numbers::pi);
}

}  // namespace rotordyn
