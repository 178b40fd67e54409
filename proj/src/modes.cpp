#include "nanotrap/modes.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <numbers>
#include <sstream>

#include "nanotrap/constants.hpp"
#include "nanotrap/numerics.hpp"

namespace nanotrap {

using namespace constants;
namespace nm = numerics;

namespace {

constexpr int kScanPoints = 2000;
constexpr double kIndexMargin = 1e-9;
constexpr int kMaxOrder = 5;
constexpr int kMaxRadial = 3;

int azimuthal_order(const ModeId& mode) { return mode.is_hybrid() ? mode.order : 0; }

std::string format_v(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

// Positive zeros of g on (0, v_max], in ascending order.
std::vector<double> positive_zeros(const nm::ScalarFn& g, int count, double v_max = 40.0) {
  std::vector<double> zeros;
  constexpr double step = 0.01;
  double prev_v = 1e-3;
  double prev = g(prev_v);
  for (double v = prev_v + step; v <= v_max && static_cast<int>(zeros.size()) < count; v += step) {
    const double cur = g(v);
    if (cur == 0.0) {
      zeros.push_back(v);
    } else if ((cur > 0) != (prev > 0) && prev != 0.0) {
      zeros.push_back(nm::find_root(g, {prev_v, v}, 1e-14));
    }
    prev = cur;
    prev_v = v;
  }
  return zeros;
}

struct Angular {
  double te, th, dte, dth, d2te, d2th;
};

Angular angular(const ModeSolution& sol, double phi) {
  const int l = azimuthal_order(sol.mode);
  if (l == 0) return {1, 1, 0, 0, 0, 0};
  const double psi = l == 1 ? phi - sol.mode.orientation : phi + sol.mode.orientation;
  const double c = std::cos(l * psi);
  const double s = std::sin(l * psi);
  const double l2 = static_cast<double>(l) * l;
  return {c, s, -l * s, l * c, -l2 * c, -l2 * s};
}

struct Radial {
  double e;       // radial profile of E_z / H_z
  double de;      // d/dr
  double d2e;     // d^2/dr^2
  double e_over_r;
  double kappa2;  // h^2 inside, -q^2 outside
  double eps;     // eps0 n^2
};

Radial radial(const ModeSolution& sol, double r) {
  const int l = azimuthal_order(sol.mode);
  const double a = sol.fiber.radius;
  double v[9];
  Radial out{};
  if (r < a) {
    const double x = sol.h * r;
    nm::bessel_j_sequence(x, l + 2, v);
    auto j = [&](int n) { return n >= 0 ? v[n] : ((-n) % 2 ? -v[-n] : v[-n]); };
    out.e = j(l);
    out.de = sol.h * 0.5 * (j(l - 1) - j(l + 1));
    out.d2e = sol.h * sol.h * 0.25 * (j(l - 2) - 2.0 * j(l) + j(l + 2));
    if (l == 0) {
      out.e_over_r = 0.0;  // only ever multiplied by a vanishing azimuthal derivative
    } else if (x < 1e-8) {
      out.e_over_r = l == 1 ? 0.5 * sol.h : 0.0;
    } else {
      out.e_over_r = out.e / r;
    }
    out.kappa2 = sol.h * sol.h;
    out.eps = kVacuumPermittivity * sol.fiber.n_core * sol.fiber.n_core;
  } else {
    const double x = sol.q * r;
    nm::bessel_k_sequence(x, l + 2, v);
    auto k = [&](int n) { return v[n >= 0 ? n : -n]; };
    const double c = sol.boundary_ratio;
    out.e = c * k(l);
    out.de = -c * sol.q * 0.5 * (k(l - 1) + k(l + 1));
    out.d2e = c * sol.q * sol.q * 0.25 * (k(l - 2) + 2.0 * k(l) + k(l + 2));
    out.e_over_r = l == 0 ? 0.0 : out.e / r;
    out.kappa2 = -sol.q * sol.q;
    out.eps = kVacuumPermittivity * sol.fiber.n_clad * sol.fiber.n_clad;
  }
  return out;
}

// Longitudinal amplitudes: E_z = i A e(r) Te(phi), H_z = i B e(r) Th(phi).
struct Longitudinal {
  double a;
  double b;
};

Longitudinal longitudinal(const ModeSolution& sol) {
  const double omega = sol.omega();
  switch (sol.mode.family) {
    case ModeFamily::TE:
      return {0.0, -sol.amplitude / kImpedanceOfFreeSpace};
    case ModeFamily::TM:
      return {sol.amplitude, 0.0};
    default: {
      const double sign = sol.mode.order == 1 ? 1.0 : -1.0;
      const double a = sign * sol.amplitude;
      return {a, -sol.s * sol.beta * a / (omega * kVacuumPermeability)};
    }
  }
}

struct RealFields {
  double er, ep, ez_im, hr, hp, hz_im;
};

RealFields assemble(const ModeSolution& sol, const Radial& rad, const Angular& ang) {
  const Longitudinal lz = longitudinal(sol);
  const double omega = sol.omega();
  const double wmu = omega * kVacuumPermeability;
  const double weps = omega * rad.eps;
  const double beta = sol.beta;
  RealFields f{};
  f.er = (beta * lz.a * rad.de * ang.te + wmu * lz.b * rad.e_over_r * ang.dth) / rad.kappa2;
  f.ep = -(-beta * lz.a * rad.e_over_r * ang.dte + wmu * lz.b * rad.de * ang.th) / rad.kappa2;
  f.ez_im = lz.a * rad.e * ang.te;
  f.hr = (beta * lz.b * rad.de * ang.th - weps * lz.a * rad.e_over_r * ang.dte) / rad.kappa2;
  f.hp = (beta * lz.b * rad.e_over_r * ang.dth + weps * lz.a * rad.de * ang.te) / rad.kappa2;
  f.hz_im = lz.b * rad.e * ang.th;
  return f;
}

Complex phase(const ModeSolution& sol, double z, double t) {
  const double arg = sol.omega() * t - sol.beta * z;
  return {std::cos(arg), std::sin(arg)};
}

double poynting_density(const ModeSolution& sol, double r, const Angular& ang) {
  const RealFields f = assemble(sol, radial(sol, r), ang);
  return 0.5 * (f.er * f.hp - f.ep * f.hr);
}

}  // namespace

// ---------------------------------------------------------------------------

void FiberSpec::validate() const {
  if (!(radius > 0)) throw ConfigError("fiber radius must be positive");
  if (!(n_clad >= 1.0)) throw ConfigError("cladding index must be >= 1");
  if (!(n_core > n_clad)) throw ConfigError("core index must exceed cladding index");
}

void LightSpec::validate() const {
  if (!(wavelength > 0)) throw ConfigError("wavelength must be positive");
  if (!(power >= 0)) throw ConfigError("power must be non-negative");
}

double LightSpec::k0() const { return 2.0 * std::numbers::pi / wavelength; }
double LightSpec::omega() const { return kSpeedOfLight * k0(); }

std::string ModeId::name() const {
  std::string prefix;
  switch (family) {
    case ModeFamily::HE: prefix = "HE"; break;
    case ModeFamily::EH: prefix = "EH"; break;
    case ModeFamily::TE: prefix = "TE"; break;
    case ModeFamily::TM: prefix = "TM"; break;
  }
  return prefix + std::to_string(order) + std::to_string(radial);
}

ModeId ModeId::parse(std::string_view text) {
  std::string up;
  for (char c : text) up.push_back(static_cast<char>(std::toupper(static_cast<unsigned char>(c))));
  if (up.size() != 4 || !std::isdigit(static_cast<unsigned char>(up[2])) ||
      !std::isdigit(static_cast<unsigned char>(up[3]))) {
    throw ConfigError("unrecognised mode name '" + std::string(text) + "'");
  }
  ModeId id;
  const std::string fam = up.substr(0, 2);
  if (fam == "HE") {
    id.family = ModeFamily::HE;
  } else if (fam == "EH") {
    id.family = ModeFamily::EH;
  } else if (fam == "TE") {
    id.family = ModeFamily::TE;
  } else if (fam == "TM") {
    id.family = ModeFamily::TM;
  } else {
    throw ConfigError("unrecognised mode family in '" + std::string(text) + "'");
  }
  id.order = up[2] - '0';
  id.radial = up[3] - '0';
  if (id.radial < 1) throw ConfigError("radial order must be >= 1 in '" + std::string(text) + "'");
  if (id.is_hybrid() && id.order < 1) {
    throw ConfigError("hybrid modes need azimuthal order >= 1 in '" + std::string(text) + "'");
  }
  if (!id.is_hybrid() && id.order != 0) {
    throw ConfigError("TE/TM modes have azimuthal order 0 in '" + std::string(text) + "'");
  }
  return id;
}

CutoffError::CutoffError(const ModeId& mode, double required_v, double actual_v)
    : std::runtime_error(mode.name() + " is below cutoff: needs V > " + format_v(required_v) +
                         ", fibre has V = " + format_v(actual_v)),
      mode_(mode),
      required_v_(required_v),
      actual_v_(actual_v) {}

double ModeSolution::k0() const { return 2.0 * std::numbers::pi / wavelength; }
double ModeSolution::omega() const { return kSpeedOfLight * k0(); }
double ModeSolution::effective_index() const { return beta / k0(); }
double ModeSolution::table_s() const { return mode.is_hybrid() ? s / mode.order : 0.0; }

double v_parameter(const FiberSpec& fiber, double wavelength) {
  const double na2 = fiber.n_core * fiber.n_core - fiber.n_clad * fiber.n_clad;
  return 2.0 * std::numbers::pi * fiber.radius / wavelength * std::sqrt(std::max(na2, 0.0));
}

double cutoff_v(const FiberSpec& fiber, const ModeId& mode) {
  const int nu = mode.order;
  const int m = mode.radial;
  auto jn = [](int n) {
    return [n](double v) {
      double vals[9];
      nm::bessel_j_sequence(v, n, vals);
      return vals[n];
    };
  };
  std::vector<double> zeros;
  int index = m;
  switch (mode.family) {
    case ModeFamily::TE:
    case ModeFamily::TM:
      zeros = positive_zeros(jn(0), m);
      break;
    case ModeFamily::EH:
      zeros = positive_zeros(jn(nu), m);
      break;
    case ModeFamily::HE:
      if (nu == 1) {
        if (m == 1) return 0.0;
        zeros = positive_zeros(jn(1), m - 1);
        index = m - 1;
      } else {
        const double ratio = fiber.n_core * fiber.n_core / (fiber.n_clad * fiber.n_clad);
        auto g = [=](double v) {
          double vals[9];
          nm::bessel_j_sequence(v, nu, vals);
          return (ratio + 1.0) * vals[nu - 1] - v / (nu - 1.0) * vals[nu];
        };
        zeros = positive_zeros(g, m);
      }
      break;
  }
  if (static_cast<int>(zeros.size()) < index) throw SolverError("cutoff of " + mode.name() + " not found");
  return zeros[index - 1];
}

double characteristic_function(const FiberSpec& fiber, double wavelength, const ModeId& mode,
                               double n_eff) {
  const double k0a = 2.0 * std::numbers::pi / wavelength * fiber.radius;
  const double n1 = fiber.n_core;
  const double n2 = fiber.n_clad;
  const double u = k0a * std::sqrt(n1 * n1 - n_eff * n_eff);
  const double w = k0a * std::sqrt(n_eff * n_eff - n2 * n2);
  const int l = azimuthal_order(mode);
  double j[9];
  double k[9];
  nm::bessel_j_sequence(u, l + 1, j);
  nm::bessel_k_sequence(w, l + 1, k);
  switch (mode.family) {
    case ModeFamily::TE:
      return j[1] / u + j[0] * k[1] / (w * k[0]);
    case ModeFamily::TM:
      return n1 * n1 * j[1] / u + n2 * n2 * j[0] * k[1] / (w * k[0]);
    default: {
      // [J'/(uJ) + K'/(wK)] [J'/(uJ) + rho K'/(wK)] = l^2 (1/u^2 + 1/w^2)(1/u^2 + rho/w^2),
      // solved for J'/(uJ) and multiplied through by J_l to remove its poles.
      const double rho = n2 * n2 / (n1 * n1);
      const double k_below = l == 0 ? k[1] : k[l - 1];
      const double kp = -0.5 * (k_below + k[l + 1]) / (w * k[l]);
      const double iu2 = 1.0 / (u * u);
      const double iw2 = 1.0 / (w * w);
      const double disc = std::sqrt(0.25 * (1.0 - rho) * (1.0 - rho) * kp * kp +
                                    static_cast<double>(l) * l * (iu2 + iw2) * (iu2 + rho * iw2));
      const double rhs = -0.5 * (1.0 + rho) * kp + (mode.family == ModeFamily::EH ? disc : -disc);
      const double jl_x = j[l - 1] / u - l * j[l] * iu2;  // J_l(u) * J_l'(u)/(u J_l(u))
      return jl_x - j[l] * rhs;
    }
  }
}

ModeSolution solve_mode(const FiberSpec& fiber, double wavelength, const ModeId& mode) {
  fiber.validate();
  if (!(wavelength > 0)) throw ConfigError("wavelength must be positive");
  if (mode.is_hybrid() && mode.order > 6) throw SolverError("azimuthal order too high");
  const double v = v_parameter(fiber, wavelength);
  const double vc = cutoff_v(fiber, mode);
  if (v <= vc) throw CutoffError(mode, vc, v);

  auto f = [&](double n) { return characteristic_function(fiber, wavelength, mode, n); };
  const double lo = fiber.n_clad + kIndexMargin;
  const double hi = fiber.n_core - kIndexMargin;
  // Scan from the core-index end so that roots come out in radial order.
  std::vector<double> roots;
  double prev_x = hi;
  double prev = f(prev_x);
  for (int i = 1; i < kScanPoints && static_cast<int>(roots.size()) < mode.radial; ++i) {
    const double x = hi - (hi - lo) * i / (kScanPoints - 1);
    const double cur = f(x);
    if (cur == 0.0) {
      roots.push_back(x);
    } else if (prev != 0.0 && (cur > 0) != (prev > 0)) {
      roots.push_back(nm::find_root(f, {x, prev_x}, 1e-15));
    }
    prev = cur;
    prev_x = x;
  }
  if (static_cast<int>(roots.size()) < mode.radial) {
    throw SolverError("no root of the " + mode.name() + " characteristic equation in (n_clad, n_core)");
  }

  ModeSolution sol;
  sol.mode = mode;
  sol.fiber = fiber;
  sol.wavelength = wavelength;
  const double k0 = sol.k0();
  const double neff = roots[mode.radial - 1];
  sol.beta = neff * k0;
  sol.h = k0 * std::sqrt(fiber.n_core * fiber.n_core - neff * neff);
  sol.q = k0 * std::sqrt(neff * neff - fiber.n_clad * fiber.n_clad);
  sol.decay_length = 1.0 / sol.q;
  const int l = azimuthal_order(mode);
  const double u = sol.h * fiber.radius;
  const double w = sol.q * fiber.radius;
  double j[9];
  double k[9];
  nm::bessel_j_sequence(u, l + 1, j);
  nm::bessel_k_sequence(w, l + 1, k);
  sol.boundary_ratio = j[l] / k[l];
  if (mode.is_hybrid()) {
    const double jp = 0.5 * (j[l - 1] - j[l + 1]);
    const double kp = -0.5 * (k[l - 1] + k[l + 1]);
    sol.s = l * (1.0 / (u * u) + 1.0 / (w * w)) / (jp / (u * j[l]) + kp / (w * k[l]));
  }
  sol.amplitude = 1.0;
  return sol;
}

std::vector<ModeId> supported_modes(const FiberSpec& fiber, double wavelength) {
  const double v = v_parameter(fiber, wavelength);
  std::vector<ModeId> candidates;
  for (int m = 1; m <= kMaxRadial; ++m) {
    candidates.push_back({ModeFamily::TE, 0, m, 0.0});
    candidates.push_back({ModeFamily::TM, 0, m, 0.0});
    for (int nu = 1; nu <= kMaxOrder; ++nu) {
      candidates.push_back({ModeFamily::HE, nu, m, 0.0});
      candidates.push_back({ModeFamily::EH, nu, m, 0.0});
    }
  }
  std::vector<std::pair<double, ModeId>> found;
  for (const ModeId& id : candidates) {
    if (cutoff_v(fiber, id) >= v) continue;
    try {
      found.emplace_back(solve_mode(fiber, wavelength, id).beta, id);
    } catch (const SolverError&) {
      // Too close to cutoff to bracket; treated as not guided.
    }
  }
  std::sort(found.begin(), found.end(), [](const auto& x, const auto& y) { return x.first > y.first; });
  std::vector<ModeId> out;
  for (const auto& [beta, id] : found) out.push_back(id);
  return out;
}

CVec3 e_field(const ModeSolution& sol, const CylPoint& p, double t) {
  const RealFields f = assemble(sol, radial(sol, p.r), angular(sol, p.phi));
  const Complex ph = phase(sol, p.z, t);
  return {f.er * ph, f.ep * ph, Complex(0.0, f.ez_im) * ph};
}

CVec3 h_field(const ModeSolution& sol, const CylPoint& p, double t) {
  const RealFields f = assemble(sol, radial(sol, p.r), angular(sol, p.phi));
  const Complex ph = phase(sol, p.z, t);
  return {f.hr * ph, f.hp * ph, Complex(0.0, f.hz_im) * ph};
}

FieldJet e_field_jet(const ModeSolution& sol, const CylPoint& p) {
  const Radial rad = radial(sol, p.r);
  const Angular ang = angular(sol, p.phi);
  const Longitudinal lz = longitudinal(sol);
  const double wmu = sol.omega() * kVacuumPermeability;
  const double beta = sol.beta;
  const double k2 = rad.kappa2;
  const double d_e_over_r = p.r > 0 ? (rad.de - rad.e_over_r) / p.r : 0.0;

  const RealFields f = assemble(sol, rad, ang);
  const double der = (beta * lz.a * rad.d2e * ang.te + wmu * lz.b * d_e_over_r * ang.dth) / k2;
  const double dep = -(-beta * lz.a * d_e_over_r * ang.dte + wmu * lz.b * rad.d2e * ang.th) / k2;
  const double dez = lz.a * rad.de * ang.te;
  const double fer = (beta * lz.a * rad.de * ang.dte + wmu * lz.b * rad.e_over_r * ang.d2th) / k2;
  const double fep = -(-beta * lz.a * rad.e_over_r * ang.d2te + wmu * lz.b * rad.de * ang.dth) / k2;
  const double fez = lz.a * rad.e * ang.dte;

  const Complex ph = phase(sol, p.z, 0.0);
  const Complex i(0.0, 1.0);
  FieldJet jet;
  jet.e = {f.er * ph, f.ep * ph, i * f.ez_im * ph};
  jet.d_r = {der * ph, dep * ph, i * dez * ph};
  jet.d_phi = {fer * ph, fep * ph, i * fez * ph};
  return jet;
}

double poynting_power(const ModeSolution& sol) {
  const int l = azimuthal_order(sol.mode);
  const double a = sol.fiber.radius;
  // S_z = Fc(r) cos^2(l psi) + Fs(r) sin^2(l psi); both pieces evaluated directly.
  const Angular cos_part = l == 0 ? Angular{1, 0, 0, 0, 0, 0} : Angular{1, 0, 0, double(l), 0, 0};
  const Angular sin_part = l == 0 ? Angular{0, 1, 0, 0, 0, 0} : Angular{0, 1, -double(l), 0, 0, 0};
  const double angle_factor = l == 0 ? 2.0 * std::numbers::pi : std::numbers::pi;
  auto density = [&](double rho) {
    const double r = rho * a;
    return rho * (poynting_density(sol, r, cos_part) + poynting_density(sol, r, sin_part));
  };
  const double scale = std::abs(density(1.0)) + std::abs(density(0.5)) + 1e-300;
  auto scaled = [&](double rho) { return density(rho) / scale; };
  const double core = nm::integrate(scaled, 0.0, 1.0, 1e-13);
  const double clad = nm::integrate(scaled, 1.0, nm::kInfinity, 1e-13, 1.0 / (sol.q * a));
  return angle_factor * a * a * scale * (core + clad);
}

ModeSolution normalize_power(const ModeSolution& sol, double power) {
  if (!(power >= 0)) throw ConfigError("mode power must be non-negative");
  ModeSolution out = sol;
  if (power == 0.0) {
    out.amplitude = 0.0;
    return out;
  }
  if (out.amplitude == 0.0) out.amplitude = 1.0;
  const double current = poynting_power(out);
  if (!(current > 0)) throw SolverError("non-positive Poynting flux for " + sol.mode.name());
  out.amplitude *= std::sqrt(power / current);
  return out;
}

CVec3 cylindrical_to_cartesian(const CVec3& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {v[0] * c - v[1] * s, v[0] * s + v[1] * c, v[2]};
}

CVec3 cartesian_to_cylindrical(const CVec3& v, double phi) {
  const double c = std::cos(phi);
  const double s = std::sin(phi);
  return {v[0] * c + v[1] * s, -v[0] * s + v[1] * c, v[2]};
}

}  // namespace nanotrap
