#include "nanotrap/superposition.hpp"

#include <cmath>
#include <numbers>

#include "nanotrap/constants.hpp"

namespace nanotrap {

using namespace constants;

namespace {

double convention_factor(const ModeSolution& sol, HybridConvention convention) {
  return convention == HybridConvention::circular_sum && sol.mode.is_hybrid() ? 2.0 : 1.0;
}

Complex relative_phase(const ModePair& pair, double z) {
  const double arg = pair.delta - (pair.a.beta - pair.b.beta) * z;
  return {std::cos(arg), std::sin(arg)};
}

double norm2(const CVec3& v) { return std::norm(v[0]) + std::norm(v[1]) + std::norm(v[2]); }

}  // namespace

void validate(const ModePair& pair) {
  if (!(pair.tau >= 0.0 && pair.tau <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  if (!(pair.power >= 0.0)) throw ConfigError("total power must be non-negative");
  if (pair.a.wavelength != pair.b.wavelength) throw ConfigError("modes of a pair must share the wavelength");
  if (!(pair.a.fiber == pair.b.fiber)) throw ConfigError("modes of a pair must share the fibre");
}

ModePair make_mode_pair(const FiberSpec& fiber, const LightSpec& light, const ModeId& mode_a,
                        const ModeId& mode_b, double tau, double delta, HybridConvention convention) {
  fiber.validate();
  light.validate();
  if (mode_a.same_mode(mode_b)) throw ConfigError("a mode pair needs two different modes");
  ModePair pair;
  pair.a = solve_mode(fiber, light.wavelength, mode_a);
  pair.b = solve_mode(fiber, light.wavelength, mode_b);
  pair.tau = tau;
  pair.delta = delta;
  pair.power = light.power;
  pair.convention = convention;
  validate(pair);
  return with_tau(pair, tau);
}

ModePair with_tau(const ModePair& pair, double tau) {
  ModePair out = pair;
  out.tau = tau;
  validate(out);
  out.a = normalize_power(pair.a, tau * pair.power * convention_factor(pair.a, pair.convention));
  out.b = normalize_power(pair.b, (1.0 - tau) * pair.power * convention_factor(pair.b, pair.convention));
  return out;
}

CVec3 total_e_field(const ModePair& pair, const CylPoint& p) {
  validate(pair);
  const CVec3 ea = e_field(pair.a, p);
  const CVec3 eb = e_field(pair.b, p);
  const Complex d(std::cos(pair.delta), std::sin(pair.delta));
  return {d * ea[0] + eb[0], d * ea[1] + eb[1], d * ea[2] + eb[2]};
}

double mean_intensity(const ModePair& pair, const CylPoint& p) {
  const CylPoint p0{p.r, p.phi, 0.0};
  const CVec3 ea = e_field(pair.a, p0);
  const CVec3 eb = e_field(pair.b, p0);
  const Complex rel = relative_phase(pair, p.z);
  const CVec3 sum{rel * ea[0] + eb[0], rel * ea[1] + eb[1], rel * ea[2] + eb[2]};
  return 0.5 * kSpeedOfLight * kVacuumPermittivity * norm2(sum);
}

double mean_intensity(const ModePair& pair, const Vec3& xyz) {
  return mean_intensity(pair, to_cylindrical(xyz));
}

Vec3 intensity_gradient(const ModePair& pair, const Vec3& xyz) {
  const CylPoint p = to_cylindrical(xyz);
  const CylPoint p0{p.r, p.phi, 0.0};
  const FieldJet ja = e_field_jet(pair.a, p0);
  const FieldJet jb = e_field_jet(pair.b, p0);
  const Complex rel = relative_phase(pair, p.z);
  const Complex dz_rel = Complex(0.0, -(pair.a.beta - pair.b.beta)) * rel;
  double d_r = 0;
  double d_phi = 0;
  double d_z = 0;
  for (int i = 0; i < 3; ++i) {
    const Complex e = rel * ja.e[i] + jb.e[i];
    d_r += 2.0 * std::real(std::conj(e) * (rel * ja.d_r[i] + jb.d_r[i]));
    d_phi += 2.0 * std::real(std::conj(e) * (rel * ja.d_phi[i] + jb.d_phi[i]));
    d_z += 2.0 * std::real(std::conj(e) * (dz_rel * ja.e[i]));
  }
  const double scale = 0.5 * kSpeedOfLight * kVacuumPermittivity;
  const double c = std::cos(p.phi);
  const double s = std::sin(p.phi);
  const double tangential = d_phi / p.r;
  return {scale * (c * d_r - s * tangential), scale * (s * d_r + c * tangential), scale * d_z};
}

double beat_length(const ModePair& pair) {
  const double dbeta = std::abs(pair.a.beta - pair.b.beta);
  if (!(dbeta > 0.0)) throw ConfigError("degenerate propagation constants: no stationary pattern");
  return 2.0 * std::numbers::pi / dbeta;
}

CylPoint to_cylindrical(const Vec3& xyz) {
  return {std::hypot(xyz[0], xyz[1]), std::atan2(xyz[1], xyz[0]), xyz[2]};
}

Vec3 to_cartesian(const CylPoint& p) { return {p.r * std::cos(p.phi), p.r * std::sin(p.phi), p.z}; }

}  // namespace nanotrap
