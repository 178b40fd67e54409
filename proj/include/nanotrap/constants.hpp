#pragma once

#include <numbers>

// CODATA 2018 values, SI units.
namespace nanotrap::constants {

inline constexpr double kSpeedOfLight = 299792458.0;
inline constexpr double kVacuumPermeability = 1.25663706212e-6;
inline constexpr double kVacuumPermittivity = 1.0 / (kVacuumPermeability * kSpeedOfLight * kSpeedOfLight);
inline constexpr double kImpedanceOfFreeSpace = kVacuumPermeability * kSpeedOfLight;
inline constexpr double kPlanck = 6.62607015e-34;
inline constexpr double kHbar = kPlanck / (2.0 * std::numbers::pi);
inline constexpr double kBoltzmann = 1.380649e-23;
inline constexpr double kAtomicMassUnit = 1.66053906660e-27;

inline constexpr double kNanometre = 1e-9;
inline constexpr double kMicrometre = 1e-6;
inline constexpr double kMilliwatt = 1e-3;

/// Energy in joules to temperature-equivalent millikelvin.
inline constexpr double to_millikelvin(double joules) { return joules / kBoltzmann * 1e3; }
inline constexpr double from_millikelvin(double mk) { return mk * 1e-3 * kBoltzmann; }

}  // namespace nanotrap::constants
