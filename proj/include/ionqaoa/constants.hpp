#pragma once

#include <numbers>

namespace ionqaoa::constants {

// Physical constants pinned to CODATA 2018 so independent implementations
// reproduce coupling matrices bit-for-bit. Do not swap these for library
// values that may drift between toolchain releases.
inline constexpr double hbar = 1.054571817e-34;          // J*s
inline constexpr double atomic_mass_kg = 1.66053906660e-27;  // kg per a.m.u.

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

// Coupling matrices J are kept in rad/ms: the variational phase gamma*J then
// measures propagation time in units where gamma in [0, 2pi) spans a few
// milliseconds of evolution under the reference trap. For display, J/(2*pi)
// is the coupling in 2*pi*kHz (about 1 for the reference trap at A = 1).
inline constexpr double rad_per_sec_per_rad_per_ms = 1.0e3;
inline constexpr double rad_per_sec_per_two_pi_khz = two_pi * 1.0e3;

}  // namespace ionqaoa::constants
