#pragma once

#include <numbers>

namespace qtt::constants {

inline constexpr double pi = std::numbers::pi;
/// Speed of light in vacuum (m/s), exact.
inline constexpr double c = 299792458.0;
/// Reduced Planck constant (J s), CODATA 2018 exact.
inline constexpr double hbar = 1.054571817e-34;

}  // namespace qtt::constants
