#include "nanotrap/trap_analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "nanotrap/constants.hpp"

namespace nanotrap {

using namespace constants;
namespace nm = numerics;

namespace {

constexpr double kPi = std::numbers::pi;

double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }
Vec3 scale(const Vec3& a, double s) { return {a[0] * s, a[1] * s, a[2] * s}; }
Vec3 add(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
Vec3 sub(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
Vec3 normalized(const Vec3& a) { return scale(a, 1.0 / norm(a)); }
Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
}

std::string nm_str(double metres) {
  std::ostringstream os;
  os.precision(4);
  os << metres * 1e9 << " nm";
  return os.str();
}

// Solves H x = b for a symmetric 3x3 matrix by cofactors.
Vec3 solve(const nm::SymmetricMatrix3& h, const Vec3& b) {
  const double c00 = h.yy * h.zz - h.yz * h.yz;
  const double c01 = h.xz * h.yz - h.xy * h.zz;
  const double c02 = h.xy * h.yz - h.xz * h.yy;
  const double c11 = h.xx * h.zz - h.xz * h.xz;
  const double c12 = h.xy * h.xz - h.xx * h.yz;
  const double c22 = h.xx * h.yy - h.xy * h.xy;
  const double det = h.xx * c00 + h.xy * c01 + h.xz * c02;
  return {(c00 * b[0] + c01 * b[1] + c02 * b[2]) / det, (c01 * b[0] + c11 * b[1] + c12 * b[2]) / det,
          (c02 * b[0] + c12 * b[1] + c22 * b[2]) / det};
}

// Minimises g along one coordinate starting from x (current value gx), within
// [lo, hi]. Returns the new coordinate.
double line_minimize(const nm::ScalarFn& g, double x, double gx, double step, double lo, double hi,
                     double tol) {
  const double up = g(std::min(x + step, hi));
  const double down = g(std::max(x - step, lo));
  if (up >= gx && down >= gx) {
    return nm::golden_section_minimize(g, std::max(x - step, lo), std::min(x + step, hi), tol);
  }
  const double dir = up < down ? 1.0 : -1.0;
  double prev = x;
  double cur = std::clamp(x + dir * step, lo, hi);
  double gcur = dir > 0 ? up : down;
  double h = step;
  for (int i = 0; i < 60; ++i) {
    h *= 2.0;
    const double next = std::clamp(cur + dir * h, lo, hi);
    if (next == cur) return cur;  // pinned at the region boundary
    const double gnext = g(next);
    if (gnext >= gcur) {
      return nm::golden_section_minimize(g, std::min(prev, next), std::max(prev, next), tol);
    }
    prev = cur;
    cur = next;
    gcur = gnext;
  }
  return cur;
}

CylPoint cyl_add(const CylPoint& p, int axis, double v) {
  CylPoint q = p;
  if (axis == 0) q.r = v;
  if (axis == 1) q.phi = v;
  if (axis == 2) q.z = v;
  return q;
}

double coord(const CylPoint& p, int axis) { return axis == 0 ? p.r : (axis == 1 ? p.phi : p.z); }

// Point reached by moving s along a local axis: straight lines for r and z,
// the azimuthal arc at fixed radius for phi.
Vec3 along_axis(const Vec3& minimum, int axis, double s) {
  if (axis == 1) {
    const CylPoint c = to_cylindrical(minimum);
    return to_cartesian({c.r, c.phi + s / c.r, c.z});
  }
  const Vec3 d = local_frame(minimum)[axis];
  return add(minimum, scale(d, s));
}

// Distance from the minimum to where U first reaches `level` along +/- axis.
double turning_distance(const PotentialField& field, const Vec3& minimum, int axis, double sign,
                        double u_min, double level) {
  auto g = [&](double s) { return field.total(along_axis(minimum, axis, sign * s)) - level; };
  constexpr double kMaxDistance = 4e-6;
  double prev = 0.0;
  double s = 0.0;
  while (s < kMaxDistance) {
    s += std::max(0.25e-9, 0.02 * s);
    const Vec3 p = along_axis(minimum, axis, sign * s);
    if (std::hypot(p[0], p[1]) <= field.fiber().radius + 0.5e-9) {
      throw NoTrapError("no turning point before the fibre surface");
    }
    const double v = g(s);
    if (v >= 0.0) return nm::find_root(g, {prev, s}, 1e-13);
    if (v + level < u_min - 1e-30) throw NoTrapError("potential falls below the minimum before the turning point");
    prev = s;
  }
  throw NoTrapError("no turning point within " + nm_str(kMaxDistance));
}

double halton(unsigned index, unsigned base) {
  double f = 1.0;
  double r = 0.0;
  while (index > 0) {
    f /= base;
    r += f * (index % base);
    index /= base;
  }
  return r;
}

double beat_or_zero(const ModePair& pair) {
  try {
    return beat_length(pair);
  } catch (const ConfigError&) {
    return 0.0;
  }
}

}  // namespace

double ThermalState::energy() const { return kBoltzmann * temperature; }

std::array<Vec3, 3> local_frame(const Vec3& minimum) {
  const double phi = std::atan2(minimum[1], minimum[0]);
  return {Vec3{std::cos(phi), std::sin(phi), 0.0}, Vec3{-std::sin(phi), std::cos(phi), 0.0},
          Vec3{0.0, 0.0, 1.0}};
}

double seed_axial_position(const PotentialField& field, const SeedRegion& seed) {
  const double z0 = beat_or_zero(field.pair());
  if (!seed.auto_z || !(z0 > 0)) return seed.center.z;
  constexpr int kSamples = 256;
  double best = std::numeric_limits<double>::infinity();
  double z_best = 0.0;
  for (int i = 0; i < kSamples; ++i) {
    const double z = z0 * i / kSamples;
    const double v = field.total(to_cartesian({seed.center.r, seed.center.phi, z}));
    if (v < best) {
      best = v;
      z_best = z;
    }
  }
  return z_best;
}

Vec3 find_minimum(const PotentialField& field, const SeedRegion& seed) {
  const double a = field.fiber().radius;
  if (!(seed.center.r > a)) throw ConfigError("seed radius must lie outside the fibre");
  if (!(seed.radial_halfwidth > 0) || !(seed.azimuthal_halfwidth > 0) || !(seed.axial_halfwidth >= 0)) {
    throw ConfigError("seed half-widths must be positive");
  }
  const double z0 = beat_or_zero(field.pair());
  const double hz = seed.axial_halfwidth > 0 ? seed.axial_halfwidth : (z0 > 0 ? 0.25 * z0 : 1e-6);

  CylPoint p = seed.center;
  auto u = [&](const CylPoint& c) { return field.total(to_cartesian(c)); };
  p.z = seed_axial_position(field, seed);

  const std::array<double, 3> lo{std::max(a + 1e-9, seed.center.r - seed.radial_halfwidth),
                                 seed.center.phi - seed.azimuthal_halfwidth, p.z - hz};
  const std::array<double, 3> hi{seed.center.r + seed.radial_halfwidth,
                                 seed.center.phi + seed.azimuthal_halfwidth, p.z + hz};

  // Coordinate descent in (r, phi, z).
  double up = u(p);
  for (int cycle = 0; cycle < 200; ++cycle) {
    double moved = 0.0;
    for (int axis = 0; axis < 3; ++axis) {
      const double metric = axis == 1 ? p.r : 1.0;
      auto g = [&](double v) { return u(cyl_add(p, axis, v)); };
      const double x0 = coord(p, axis);
      const double x = line_minimize(g, x0, up, 2e-9 / metric, lo[axis], hi[axis], 1e-12 / metric);
      const double ux = g(x);
      if (ux < up) {
        moved = std::max(moved, std::abs(x - x0) * metric);
        p = cyl_add(p, axis, x);
        up = ux;
      }
    }
    if (moved < 0.05e-9) break;
  }
  for (int axis = 0; axis < 3; ++axis) {
    const double metric = axis == 1 ? p.r : 1.0;
    const double c = coord(p, axis);
    if ((c - lo[axis]) * metric < 0.5e-9 || (hi[axis] - c) * metric < 0.5e-9) {
      std::ostringstream os;
      os << "no interior potential minimum in the seed region (descent reached the region boundary at r = "
         << nm_str(p.r) << ", phi = " << p.phi << " rad; tau = " << field.pair().tau << ")";
      throw NoTrapError(os.str());
    }
  }

  // Newton refinement in Cartesian coordinates.
  Vec3 x = to_cartesian(p);
  auto f = [&](const Vec3& q) { return field.total(q); };
  const Vec3 steps{1e-9, 1e-9, 1e-9};
  for (int it = 0; it < 20; ++it) {
    const nm::SymmetricMatrix3 h = nm::hessian(f, x, steps);
    if (!h.positive_definite()) {
      throw NoTrapError("stationary point near r = " + nm_str(std::hypot(x[0], x[1])) + " is not a minimum");
    }
    Vec3 dx = scale(solve(h, field.gradient(x)), -1.0);
    const double len = norm(dx);
    if (len > 2e-9) dx = scale(dx, 2e-9 / len);
    x = add(x, dx);
    if (len < 1e-13) break;
  }
  return x;
}

TrapFrequencies trap_frequencies(const PotentialField& field, const Vec3& minimum, double mass, double step) {
  TrapFrequencies out;
  out.hessian = nm::hessian([&](const Vec3& q) { return field.total(q); }, minimum, {step, step, step});
  const std::array<double, 3> eig = out.hessian.eigenvalues();
  if (!(eig[0] > 0.0)) {
    throw SaddleError("Hessian at the minimum is not positive definite (smallest eigenvalue " +
                      std::to_string(eig[0]) + " J/m^2)");
  }
  const std::array<Vec3, 3> frame = local_frame(minimum);
  std::array<Vec3, 3> vecs;
  for (int i = 0; i < 3; ++i) vecs[i] = out.hessian.eigenvector(eig[i]);
  // Greedy assignment of eigenpairs to local axes by overlap.
  std::array<bool, 3> used_axis{};
  std::array<bool, 3> used_vec{};
  for (int round = 0; round < 3; ++round) {
    double best = -1.0;
    int bi = 0;
    int bj = 0;
    for (int i = 0; i < 3; ++i) {
      if (used_vec[i]) continue;
      for (int j = 0; j < 3; ++j) {
        if (used_axis[j]) continue;
        const double o = std::abs(dot(vecs[i], frame[j]));
        if (o > best) {
          best = o;
          bi = i;
          bj = j;
        }
      }
    }
    used_vec[bi] = used_axis[bj] = true;
    out.omega[bj] = std::sqrt(eig[bi] / mass);
    out.axes[bj] = vecs[bi];
  }
  return out;
}

double directional_barrier(const PotentialField& field, const Vec3& minimum, const Vec3& direction,
                           const RayOptions& options) {
  return ray_barrier(field, minimum, normalized(direction), options).height - field.total(minimum);
}

EscapeBarrier escape_barrier(const PotentialField& field, const Vec3& minimum, const FanOptions& options) {
  const double u_min = field.total(minimum);
  const double res = options.resolution_deg * kPi / 180.0;
  const int n_polar = static_cast<int>(std::lround(180.0 / options.resolution_deg));
  const int n_azimuth = static_cast<int>(std::lround(360.0 / options.resolution_deg));
  std::vector<Vec3> dirs;
  dirs.push_back({0, 0, 1});
  dirs.push_back({0, 0, -1});
  for (int i = 1; i < n_polar; ++i) {
    const double th = i * res;
    for (int j = 0; j < n_azimuth; ++j) {
      const double ph = j * res;
      dirs.push_back({std::sin(th) * std::cos(ph), std::sin(th) * std::sin(ph), std::cos(th)});
    }
  }
  auto pick = [](const std::vector<RayBarrier>& rs) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < rs.size(); ++i) {
      if (rs[i].height < rs[best].height) best = i;
    }
    return best;
  };
  const std::vector<RayBarrier> coarse = scan_rays(field, minimum, dirs, options.ray, options.exec);
  const std::size_t ic = pick(coarse);

  // Local refinement around the best coarse direction.
  const Vec3 d0 = dirs[ic];
  const Vec3 helper = std::abs(d0[2]) < 0.9 ? Vec3{0, 0, 1} : Vec3{1, 0, 0};
  const Vec3 e1 = normalized(cross(d0, helper));
  const Vec3 e2 = cross(d0, e1);
  const int n = static_cast<int>(std::lround(options.refine_span_deg / options.refine_resolution_deg));
  std::vector<Vec3> fine{d0};
  for (int i = -n; i <= n; ++i) {
    for (int j = -n; j <= n; ++j) {
      if (i == 0 && j == 0) continue;
      const double ta = std::tan(i * options.refine_resolution_deg * kPi / 180.0);
      const double tb = std::tan(j * options.refine_resolution_deg * kPi / 180.0);
      fine.push_back(normalized(add(d0, add(scale(e1, ta), scale(e2, tb)))));
    }
  }
  const std::vector<RayBarrier> refined = scan_rays(field, minimum, fine, options.ray, options.exec);
  const std::size_t ir = pick(refined);

  EscapeBarrier out;
  out.height = refined[ir].height;
  out.depth = out.height - u_min;
  out.direction = fine[ir];
  out.length = refined[ir].length;
  out.min_sampled = coarse[ic].height - u_min;
  if (!(out.depth > 0.0)) throw NoTrapError("no confining barrier around the minimum");
  return out;
}

Extents thermal_extents(const PotentialField& field, const Vec3& minimum, const TrapFrequencies& freq,
                        const ThermalState& state) {
  if (!(state.temperature > 0)) throw ConfigError("temperature must be positive");
  const double u_min = field.total(minimum);
  const double level = u_min + state.energy();
  const double mass = field.atom().mass;
  Extents e;
  for (int axis = 0; axis < 3; ++axis) {
    e.inner[axis] = turning_distance(field, minimum, axis, -1.0, u_min, level);
    e.outer[axis] = turning_distance(field, minimum, axis, +1.0, u_min, level);
    e.full[axis] = e.inner[axis] + e.outer[axis];
    const double w = freq.omega[axis];
    e.harmonic[axis] = 2.0 * std::sqrt(2.0 * state.energy() / (mass * w * w));
  }
  return e;
}

double orbit_averaged_scattering(const PotentialField& field, const Vec3& minimum, const Extents& extents,
                                 const ThermalState& state, int samples) {
  (void)state;  // amplitudes already carry the temperature through the extents
  if (samples < 1) throw ConfigError("need at least one orbit sample");
  const CylPoint c = to_cylindrical(minimum);
  double sum = 0.0;
  for (int n = 1; n <= samples; ++n) {
    const double u1 = halton(n, 2);
    const double u2 = halton(n, 3);
    const std::array<double, 3> share{std::min(u1, u2), std::abs(u1 - u2), 1.0 - std::max(u1, u2)};
    const std::array<double, 3> phase{2 * kPi * halton(n, 5), 2 * kPi * halton(n, 7), 2 * kPi * halton(n, 11)};
    std::array<double, 3> x{};
    for (int k = 0; k < 3; ++k) {
      const double cs = std::cos(phase[k]);
      const double amp = cs >= 0 ? extents.outer[k] : extents.inner[k];
      x[k] = cs * amp * std::sqrt(share[k]);
    }
    sum += field.scattering(to_cartesian({c.r + x[0], c.phi + x[1] / c.r, c.z + x[2]}));
  }
  return sum / samples;
}

double lifetime(double depth, const ThermalState& state, double rate, double recoil_energy) {
  if (!(rate >= 0)) throw ConfigError("scattering rate must be non-negative");
  if (!(depth > state.energy())) throw NoTrapError("trap depth does not exceed the thermal energy");
  if (rate == 0.0) return std::numeric_limits<double>::infinity();
  return (depth - state.energy()) / (2.0 * recoil_energy * rate);
}

double tau_sigma(double tau0) {
  if (!(tau0 >= 0.0 && tau0 <= 1.0)) throw ConfigError("tau must lie in [0, 1]");
  return 0.05 * std::sqrt(tau0 * (1.0 - tau0));
}

TrapReport analyze_trap(const PotentialField& field, const TrapOptions& options) {
  TrapReport rep;
  const ModePair& pair = field.pair();
  rep.tau = pair.tau;
  rep.temperature = options.state.temperature;
  rep.beat_length = beat_or_zero(pair);
  rep.minimum = find_minimum(field, options.seed);
  rep.minimum_cyl = to_cylindrical(rep.minimum);
  if (rep.beat_length > 0) {
    rep.minimum_cyl.z = std::fmod(rep.minimum_cyl.z, rep.beat_length);
    if (rep.minimum_cyl.z < 0) rep.minimum_cyl.z += rep.beat_length;
  }
  rep.u_min = field.total(rep.minimum);
  rep.intensity_at_min = field.intensity(rep.minimum);
  rep.light_at_min = field.light_potential(rep.minimum);
  {
    const CylPoint c = to_cylindrical(rep.minimum);
    auto single = [&](const ModeSolution& s) {
      const CVec3 e = e_field(s, c);
      return 0.5 * kSpeedOfLight * kVacuumPermittivity * (std::norm(e[0]) + std::norm(e[1]) + std::norm(e[2]));
    };
    const double ref = single(pair.a) + single(pair.b);
    rep.intensity_ratio_at_min = ref > 0 ? rep.intensity_at_min / ref : 0.0;
    rep.nonzero_min_intensity = rep.intensity_ratio_at_min > 1e-4;
  }

  rep.frequencies = trap_frequencies(field, rep.minimum, field.atom().mass);

  FanOptions fan = options.fan;
  fan.ray.max_length = std::max(fan.ray.max_length, 0.6 * rep.beat_length + 1e-6);
  rep.barrier = escape_barrier(field, rep.minimum, fan);
  const Vec3 rhat = local_frame(rep.minimum)[0];
  rep.radial_barrier_outer = directional_barrier(field, rep.minimum, rhat, fan.ray);
  rep.radial_barrier_inner = directional_barrier(field, rep.minimum, scale(rhat, -1.0), fan.ray);
  if (!(rep.barrier.depth > options.state.energy())) {
    throw NoTrapError("trap depth " + std::to_string(to_millikelvin(rep.barrier.depth)) +
                      " mK does not exceed the thermal energy");
  }

  rep.extents = thermal_extents(field, rep.minimum, rep.frequencies, options.state);
  {
    // Thickness of the inner barrier at the thermal energy.
    const double level = rep.u_min + options.state.energy();
    const RayBarrier inner = ray_barrier(field, rep.minimum, scale(rhat, -1.0), fan.ray);
    auto g = [&](double s) { return field.total(add(rep.minimum, scale(rhat, -s))) - level; };
    const double s1 = rep.extents.inner[0];
    const double a = field.fiber().radius;
    const double s_surface = rep.minimum_cyl.r - a - fan.ray.surface_margin;
    double s2 = s_surface;
    for (double s = inner.length; s < s_surface; s += 0.25e-9) {
      if (g(s) < 0.0) {
        s2 = nm::find_root(g, {s - 0.25e-9, s}, 1e-13);
        break;
      }
    }
    rep.inner_barrier_width = std::max(0.0, s2 - s1);
  }

  rep.scattering = orbit_averaged_scattering(field, rep.minimum, rep.extents, options.state,
                                             options.scattering_samples);
  rep.recoil_energy = field.atom().recoil_energy(field.wavelength());
  rep.lifetime = lifetime(rep.barrier.depth, options.state, rep.scattering, rep.recoil_energy);
  return rep;
}

std::vector<SensitivityRow> tau_sweep(const PotentialField& field, const TrapOptions& options,
                                      const TrapReport& nominal, const std::vector<double>& taus) {
  const double depth0 = nominal.barrier.depth;
  std::vector<SensitivityRow> rows;
  for (double tau : taus) {
    SensitivityRow row;
    row.tau = tau;
    if (tau == field.pair().tau) {
      row.trapped = true;
      row.depth = depth0;
      row.minimum = nominal.minimum;
      rows.push_back(row);
      continue;
    }
    try {
      if (tau < 0.0 || tau > 1.0) throw NoTrapError("tau outside [0, 1]");
      const PotentialField shifted(with_tau(field.pair(), tau), field.atom());
      SeedRegion seed = options.seed;
      seed.center = to_cylindrical(nominal.minimum);
      seed.auto_z = false;
      row.minimum = find_minimum(shifted, seed);
      trap_frequencies(shifted, row.minimum, shifted.atom().mass);
      FanOptions fan = options.fan;
      fan.ray.max_length = std::max(fan.ray.max_length, 0.6 * beat_or_zero(shifted.pair()) + 1e-6);
      row.depth = escape_barrier(shifted, row.minimum, fan).depth;
      row.trapped = true;
      row.relative_depth_change = (row.depth - depth0) / depth0;
      row.shift = norm(sub(row.minimum, nominal.minimum));
    } catch (const NoTrapError& e) {
      row.note = e.what();
    } catch (const SaddleError& e) {
      row.note = e.what();
    }
    rows.push_back(row);
  }
  return rows;
}

std::vector<SensitivityRow> tau_sensitivity(const PotentialField& field, const TrapOptions& options,
                                            const TrapReport* nominal) {
  const double tau0 = field.pair().tau;
  const double sigma = tau_sigma(tau0);
  TrapReport base;
  if (nominal) {
    base = *nominal;
  } else {
    base.minimum = find_minimum(field, options.seed);
    FanOptions fan = options.fan;
    fan.ray.max_length = std::max(fan.ray.max_length, 0.6 * beat_or_zero(field.pair()) + 1e-6);
    base.barrier = escape_barrier(field, base.minimum, fan);
  }
  return tau_sweep(field, options, base, {tau0 - sigma, tau0, tau0 + sigma});
}

}  // namespace nanotrap
