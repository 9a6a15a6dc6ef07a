#pragma once

#include <numbers>

// Rates and frequencies are stored as angular frequencies in rad/s.
// User-facing values follow the "2 pi x MHz" convention.
namespace cavmag::units {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

// CODATA 2018 exact/recommended values.
inline constexpr double kHbar = 1.054571817e-34;       // J s
inline constexpr double kBoltzmann = 1.380649e-23;     // J / K

constexpr double from_MHz(double mhz) { return kTwoPi * mhz * 1e6; }
constexpr double to_MHz(double rad_per_s) { return rad_per_s / (kTwoPi * 1e6); }
constexpr double from_GHz(double ghz) { return kTwoPi * ghz * 1e9; }
constexpr double from_nHz(double nhz) { return kTwoPi * nhz * 1e-9; }
constexpr double to_nHz(double rad_per_s) { return rad_per_s / (kTwoPi * 1e-9); }

}  // namespace cavmag::units
