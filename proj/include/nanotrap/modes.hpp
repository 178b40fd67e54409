#pragma once

#include <array>
#include <complex>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace nanotrap {

using Complex = std::complex<double>;
using CVec3 = std::array<Complex, 3>;

class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class SolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Step-index cylinder in an infinite cladding. Lengths in metres.
struct FiberSpec {
  double radius = 400e-9;
  double n_core = 1.452;
  double n_clad = 1.0;

  void validate() const;
  bool operator==(const FiberSpec&) const = default;
};

/// Vacuum wavelength (m) and total guided power (W).
struct LightSpec {
  double wavelength = 850e-9;
  double power = 0.0;

  void validate() const;
  double k0() const;
  double omega() const;
  bool operator==(const LightSpec&) const = default;
};

enum class ModeFamily { HE, EH, TE, TM };

/// A guided mode label such as HE11 or TE01. `orientation` is the polarisation
/// angle of quasi-linear hybrid modes (ignored for TE/TM). HE11 patterns follow
/// cos(phi - orientation); higher hybrid orders follow cos(nu (phi + orientation))
/// with an overall sign of -1, the usual field-table convention for HE21.
struct ModeId {
  ModeFamily family = ModeFamily::HE;
  int order = 1;   // azimuthal order nu
  int radial = 1;  // radial order m
  double orientation = 0.0;

  std::string name() const;
  bool is_hybrid() const { return family == ModeFamily::HE || family == ModeFamily::EH; }
  /// Same mode family, order and radial index (orientation ignored).
  bool same_mode(const ModeId& other) const {
    return family == other.family && order == other.order && radial == other.radial;
  }
  bool operator==(const ModeId&) const = default;

  /// Parses "HE11", "TE01", "TM01", "EH11", ... (case-insensitive).
  static ModeId parse(std::string_view text);
};

class CutoffError : public std::runtime_error {
 public:
  CutoffError(const ModeId& mode, double required_v, double actual_v);
  const ModeId& mode() const { return mode_; }
  double required_v() const { return required_v_; }
  double actual_v() const { return actual_v_; }

 private:
  ModeId mode_;
  double required_v_;
  double actual_v_;
};

struct CylPoint {
  double r = 0;
  double phi = 0;
  double z = 0;
  bool operator==(const CylPoint&) const = default;
};

/// One solved guided mode. Immutable once built; `amplitude` scales the
/// reference field pattern (E_z prefactor in V/m for hybrid and TM modes, and
/// Z0 times the H_z prefactor for TE modes).
struct ModeSolution {
  ModeId mode;
  FiberSpec fiber;
  double wavelength = 0;
  double beta = 0;          // rad/m
  double h = 0;             // interior transverse wavenumber, rad/m
  double q = 0;             // exterior decay constant, rad/m
  double s = 0;             // hybrid parameter (order factor included), 0 for TE/TM
  double decay_length = 0;  // 1/q, m
  double amplitude = 1.0;
  double boundary_ratio = 0;  // J_nu(ha) / K_nu(qa), matches the exterior field to the core

  double k0() const;
  double omega() const;
  double effective_index() const;
  /// The field-table hybrid parameter: s/nu (equals s for nu = 1).
  double table_s() const;
};

double v_parameter(const FiberSpec& fiber, double wavelength);

/// Cutoff V of a mode (0 for HE11).
double cutoff_v(const FiberSpec& fiber, const ModeId& mode);

/// Pole-free characteristic function in the effective index n_eff; its zeros in
/// (n_clad, n_core) are the modes of the given family and azimuthal order.
double characteristic_function(const FiberSpec& fiber, double wavelength, const ModeId& mode,
                               double n_eff);

/// Guided modes (azimuthal order <= 5, radial order <= 3) ordered by descending beta.
std::vector<ModeId> supported_modes(const FiberSpec& fiber, double wavelength);

ModeSolution solve_mode(const FiberSpec& fiber, double wavelength, const ModeId& mode);

/// Complex E (V/m) in cylindrical components (E_r, E_phi, E_z), carrying
/// exp[i(omega t - beta z)].
CVec3 e_field(const ModeSolution& sol, const CylPoint& p, double t = 0.0);
/// Complex H (A/m) in cylindrical components.
CVec3 h_field(const ModeSolution& sol, const CylPoint& p, double t = 0.0);

/// E together with its partial derivatives with respect to r and phi (z-derivative
/// is -i beta E). Components are cylindrical; the basis is held fixed, so
/// d|E|^2/dr = 2 Re(E* . dE/dr) is exact.
struct FieldJet {
  CVec3 e;
  CVec3 d_r;
  CVec3 d_phi;
};
FieldJet e_field_jet(const ModeSolution& sol, const CylPoint& p);

/// (1/2) Re int (E x H*) . z dA over the whole cross-section, in watts.
double poynting_power(const ModeSolution& sol);

/// Rescales the amplitude so that poynting_power() equals `power` (watts).
ModeSolution normalize_power(const ModeSolution& sol, double power);

CVec3 cylindrical_to_cartesian(const CVec3& v, double phi);
CVec3 cartesian_to_cylindrical(const CVec3& v, double phi);

}  // namespace nanotrap
