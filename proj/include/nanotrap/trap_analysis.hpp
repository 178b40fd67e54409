#pragma once

#include <array>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "nanotrap/kernels.hpp"
#include "nanotrap/potential.hpp"

namespace nanotrap {

class NoTrapError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SaddleError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Where to look for a minimum. Half-widths bound the search; with `auto_z`
/// the axial start is the lowest potential over one beat length at (r, phi).
struct SeedRegion {
  CylPoint center{550e-9, 0.0, 0.0};
  double radial_halfwidth = 80e-9;
  double azimuthal_halfwidth = 0.35;  // rad
  double axial_halfwidth = 0.0;       // m; 0 means a quarter beat length
  bool auto_z = true;
  bool operator==(const SeedRegion&) const = default;
};

struct ThermalState {
  double temperature = 100e-6;  // K
  double energy() const;
};

/// Local frame at a minimum: r-hat, phi-hat, z-hat.
std::array<Vec3, 3> local_frame(const Vec3& minimum);

/// Axial start used for a seed: its own z, or with auto_z the lowest
/// potential over one beat length at the seed's (r, phi).
double seed_axial_position(const PotentialField& field, const SeedRegion& seed);

Vec3 find_minimum(const PotentialField& field, const SeedRegion& seed);

struct TrapFrequencies {
  Vec3 omega{};  // (omega_r, omega_phi, omega_z), rad/s
  numerics::SymmetricMatrix3 hessian;  // J/m^2, Cartesian
  std::array<Vec3, 3> axes{};          // eigenvector assigned to each local axis
};

TrapFrequencies trap_frequencies(const PotentialField& field, const Vec3& minimum, double mass,
                                 double step = 1e-9);

struct FanOptions {
  double resolution_deg = 2.0;
  double refine_span_deg = 3.0;
  double refine_resolution_deg = 0.2;
  RayOptions ray;
  Execution exec = Execution::parallel;
};

struct EscapeBarrier {
  double depth = 0;   // J
  double height = 0;  // U at the barrier, J
  Vec3 direction{};
  double length = 0;  // distance from the minimum to the barrier, m
  double min_sampled = 0;  // lowest barrier among the coarse fan rays, J
};

EscapeBarrier escape_barrier(const PotentialField& field, const Vec3& minimum,
                             const FanOptions& options = {});

/// Barrier along a single direction (relative to the minimum), J above U_min.
double directional_barrier(const PotentialField& field, const Vec3& minimum, const Vec3& direction,
                           const RayOptions& options = {});

struct Extents {
  Vec3 full{};      // turning-point widths (radial, arc, axial), m
  Vec3 inner{};     // minimum to the turning point on the negative side, m
  Vec3 outer{};     // minimum to the turning point on the positive side, m
  Vec3 harmonic{};  // 2 sqrt(2 kT / (m omega^2)), m
};

Extents thermal_extents(const PotentialField& field, const Vec3& minimum, const TrapFrequencies& freq,
                        const ThermalState& state);

/// Average of the local scattering rate over classical harmonic orbits with a
/// microcanonical energy split between the axes and uniform phases. Radial
/// excursions use the inner or outer turning distance depending on side.
double orbit_averaged_scattering(const PotentialField& field, const Vec3& minimum, const Extents& extents,
                                 const ThermalState& state, int samples = 4096);

/// (depth - k T) / (2 E_rec rate); +infinity when rate is zero.
double lifetime(double depth, const ThermalState& state, double rate, double recoil_energy);

double tau_sigma(double tau0);

struct TrapReport {
  Vec3 minimum{};
  CylPoint minimum_cyl;
  double u_min = 0;             // J
  double light_at_min = 0;      // J
  double intensity_at_min = 0;  // W/m^2
  double intensity_ratio_at_min = 0;  // I_total / (I_a + I_b) at the minimum
  bool nonzero_min_intensity = false;
  EscapeBarrier barrier;
  double radial_barrier_inner = 0;  // J above U_min
  double radial_barrier_outer = 0;  // J above U_min
  double inner_barrier_width = 0;   // m, radial width where U > U_min on the fibre side
  TrapFrequencies frequencies;
  Extents extents;
  double scattering = 0;  // 1/s
  double lifetime = 0;    // s
  double recoil_energy = 0;
  double beat_length = 0;
  double tau = 0;
  double temperature = 0;
};

struct TrapOptions {
  SeedRegion seed;
  ThermalState state;
  FanOptions fan;
  int scattering_samples = 4096;
};

TrapReport analyze_trap(const PotentialField& field, const TrapOptions& options);

struct SensitivityRow {
  double tau = 0;
  bool trapped = false;
  std::string note;
  double depth = 0;  // J
  Vec3 minimum{};
  double relative_depth_change = 0;  // (depth - depth0) / depth0
  double shift = 0;                  // m, distance from the nominal minimum
};

/// Depth and minimum at each tau, seeded from the nominal minimum. Changes are
/// relative to the nominal depth; a vanished trap gives a flagged row.
std::vector<SensitivityRow> tau_sweep(const PotentialField& field, const TrapOptions& options,
                                      const TrapReport& nominal, const std::vector<double>& taus);

/// Re-analyses the trap at tau0 - sigma, tau0, tau0 + sigma (in that order).
std::vector<SensitivityRow> tau_sensitivity(const PotentialField& field, const TrapOptions& options,
                                            const TrapReport* nominal = nullptr);

}  // namespace nanotrap
