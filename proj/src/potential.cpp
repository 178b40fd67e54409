#include "nanotrap/potential.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "nanotrap/constants.hpp"

namespace nanotrap {

using namespace constants;

namespace {

constexpr double kCesiumMass = 2.20694695e-25;

struct Coefficients {
  double light;
  double scatter;
};

Coefficients coefficients(const AtomSpec& atom, double wavelength) {
  const double omega = 2.0 * std::numbers::pi * kSpeedOfLight / wavelength;
  Coefficients c{0.0, 0.0};
  for (const AtomicLine& line : atom.lines) {
    const double w0 = 2.0 * std::numbers::pi * kSpeedOfLight / line.wavelength;
    const double detuning = omega - w0;
    if (!(detuning > 0.0)) {
      throw ConfigError("trap light is not blue-detuned from the " +
                        std::to_string(line.wavelength * 1e9) + " nm line");
    }
    const double pref = 3.0 * std::numbers::pi * kSpeedOfLight * kSpeedOfLight / (2.0 * w0 * w0 * w0);
    const double ratio = line.gamma / detuning;
    c.light += line.weight * pref * ratio;
    c.scatter += line.weight * pref * ratio * ratio / kHbar;
  }
  return c;
}

}  // namespace

AtomSpec AtomSpec::cesium() {
  AtomSpec atom;
  atom.mass = kCesiumMass;
  const double two_pi = 2.0 * std::numbers::pi;
  atom.lines = {{852.347e-9, two_pi * 5.22e6, 2.0 / 3.0}, {894.593e-9, two_pi * 4.57e6, 1.0 / 3.0}};
  atom.c3 = kDefaultC3;
  return atom;
}

void AtomSpec::validate() const {
  if (!(mass > 0)) throw ConfigError("atom mass must be positive");
  if (lines.empty()) throw ConfigError("atom needs at least one transition line");
  double total = 0;
  for (const AtomicLine& l : lines) {
    if (!(l.wavelength > 0) || !(l.gamma > 0) || !(l.weight >= 0)) {
      throw ConfigError("transition lines need positive wavelength and linewidth and a non-negative weight");
    }
    total += l.weight;
  }
  if (std::abs(total - 1.0) > 1e-9) throw ConfigError("line weights must sum to 1");
  if (!(c3 >= 0)) throw ConfigError("C3 must be non-negative");
}

double AtomSpec::recoil_energy(double wavelength) const {
  return kPlanck * kPlanck / (2.0 * mass * wavelength * wavelength);
}

double dipole_potential(double intensity, const AtomSpec& atom, double wavelength) {
  return coefficients(atom, wavelength).light * intensity;
}

double scattering_rate(double intensity, const AtomSpec& atom, double wavelength) {
  return coefficients(atom, wavelength).scatter * intensity;
}

double vdw_potential(double r, const FiberSpec& fiber, const AtomSpec& atom) {
  const double d = r - fiber.radius;
  if (!(d > 0)) throw std::domain_error("van der Waals term needs r > fibre radius");
  return -atom.c3 / (d * d * d);
}

PotentialField::PotentialField(ModePair pair, AtomSpec atom) : pair_(std::move(pair)), atom_(std::move(atom)) {
  validate(pair_);
  atom_.validate();
  const Coefficients c = coefficients(atom_, pair_.wavelength());
  light_coeff_ = c.light;
  scatter_coeff_ = c.scatter;
}

double PotentialField::intensity(const Vec3& xyz) const { return mean_intensity(pair_, xyz); }

double PotentialField::light_potential(const Vec3& xyz) const { return light_coeff_ * intensity(xyz); }

double PotentialField::vdw(const Vec3& xyz) const {
  return vdw_potential(std::hypot(xyz[0], xyz[1]), fiber(), atom_);
}

double PotentialField::total(const Vec3& xyz) const { return light_potential(xyz) + vdw(xyz); }

Vec3 PotentialField::gradient(const Vec3& xyz) const {
  Vec3 g = intensity_gradient(pair_, xyz);
  const double r = std::hypot(xyz[0], xyz[1]);
  const double d = r - fiber().radius;
  if (!(d > 0)) throw std::domain_error("van der Waals term needs r > fibre radius");
  const double dvdw_dr = 3.0 * atom_.c3 / (d * d * d * d);
  g[0] = light_coeff_ * g[0] + dvdw_dr * xyz[0] / r;
  g[1] = light_coeff_ * g[1] + dvdw_dr * xyz[1] / r;
  g[2] = light_coeff_ * g[2];
  return g;
}

double PotentialField::scattering(const Vec3& xyz) const { return scatter_coeff_ * intensity(xyz); }

double total_potential(const PotentialField& field, const Vec3& xyz) { return field.total(xyz); }

double local_scattering_rate(const PotentialField& field, const Vec3& xyz) { return field.scattering(xyz); }

}  // namespace nanotrap
