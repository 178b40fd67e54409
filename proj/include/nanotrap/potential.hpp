#pragma once

#include <vector>

#include "nanotrap/superposition.hpp"

namespace nanotrap {

struct AtomicLine {
  double wavelength;  // m
  double gamma;       // natural linewidth, rad/s
  double weight;
};

struct AtomSpec {
  double mass = 0;  // kg
  std::vector<AtomicLine> lines;
  double c3 = 0;  // J m^3

  /// Ground-state caesium: D2 + D1 with weights 2/3 and 1/3.
  static AtomSpec cesium();
  static constexpr double kDefaultC3 = 5.6e-49;

  void validate() const;
  /// h^2 / (2 m lambda^2).
  double recoil_energy(double wavelength) const;
};

/// Light shift (J) for intensity in W/m^2. Throws ConfigError unless the light
/// is blue of every line.
double dipole_potential(double intensity, const AtomSpec& atom, double wavelength);
/// Photon scattering rate (1/s) for intensity in W/m^2.
double scattering_rate(double intensity, const AtomSpec& atom, double wavelength);
/// -C3/(r - a)^3 in joules; throws std::domain_error for r <= a.
double vdw_potential(double r, const FiberSpec& fiber, const AtomSpec& atom);

/// The full trapping landscape of one mode pair for one atom. Positions are
/// Cartesian (x, y, z) in metres with z along the fibre axis.
class PotentialField {
 public:
  PotentialField(ModePair pair, AtomSpec atom);

  const ModePair& pair() const { return pair_; }
  const AtomSpec& atom() const { return atom_; }
  const FiberSpec& fiber() const { return pair_.fiber(); }
  double wavelength() const { return pair_.wavelength(); }

  double intensity(const Vec3& xyz) const;
  double light_potential(const Vec3& xyz) const;
  double vdw(const Vec3& xyz) const;
  /// Light shift plus surface term (J).
  double total(const Vec3& xyz) const;
  Vec3 gradient(const Vec3& xyz) const;
  double scattering(const Vec3& xyz) const;

  /// J per (W/m^2), 1/s per (W/m^2).
  double light_coefficient() const { return light_coeff_; }
  double scattering_coefficient() const { return scatter_coeff_; }

 private:
  ModePair pair_;
  AtomSpec atom_;
  double light_coeff_;
  double scatter_coeff_;
};

double total_potential(const PotentialField& field, const Vec3& xyz);
double local_scattering_rate(const PotentialField& field, const Vec3& xyz);

}  // namespace nanotrap
