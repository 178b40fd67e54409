#include <cmath>
#include <numbers>
#include <random>
#include <stdexcept>

#include "doctest.h"
#include "fixtures.hpp"
#include "nanotrap/constants.hpp"
#include "nanotrap/potential.hpp"

using namespace nanotrap;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;

// Two-level light shift and scattering per line, written out from scratch.
double shift_oracle(double intensity, double lambda) {
  const double c = 299792458.0, hbar = 1.054571817e-34;
  (void)hbar;
  const double w = 2 * kPi * c / lambda;
  double u = 0;
  const double lines[2][3] = {{852.347e-9, 5.22e6, 2.0 / 3}, {894.593e-9, 4.57e6, 1.0 / 3}};
  for (const auto& l : lines) {
    const double w0 = 2 * kPi * c / l[0];
    u += l[2] * 3 * kPi * c * c / (2 * w0 * w0 * w0) * (2 * kPi * l[1]) / (w - w0) * intensity;
  }
  return u;
}

double rate_oracle(double intensity, double lambda) {
  const double c = 299792458.0, hbar = 1.054571817e-34;
  const double w = 2 * kPi * c / lambda;
  double g = 0;
  const double lines[2][3] = {{852.347e-9, 5.22e6, 2.0 / 3}, {894.593e-9, 4.57e6, 1.0 / 3}};
  for (const auto& l : lines) {
    const double w0 = 2 * kPi * c / l[0];
    const double ratio = 2 * kPi * l[1] / (w - w0);
    g += l[2] * 3 * kPi * c * c / (2 * hbar * w0 * w0 * w0) * ratio * ratio * intensity;
  }
  return g;
}

}  // namespace

TEST_SUITE("potential") {

TEST_CASE("light shift") {
  const AtomSpec cs = AtomSpec::cesium();
  CHECK(dipole_potential(0.0, cs, 850.5e-9) == 0.0);
  CHECK(dipole_potential(1e9, cs, 850.5e-9) > 0.0);
  CHECK(dipole_potential(2e9, cs, 850.5e-9) == Approx(2 * dipole_potential(1e9, cs, 850.5e-9)).epsilon(1e-15));
  for (double lam : {849e-9, 850.5e-9, 851e-9}) {
    CHECK(dipole_potential(3e9, cs, lam) == Approx(shift_oracle(3e9, lam)).epsilon(1e-8));
  }
  CHECK_THROWS_AS(dipole_potential(1e9, cs, 860e-9), ConfigError);
  CHECK_THROWS_AS(dipole_potential(1e9, cs, 900e-9), ConfigError);
}

TEST_CASE("scattering rate") {
  const AtomSpec cs = AtomSpec::cesium();
  CHECK(scattering_rate(0.0, cs, 850.5e-9) == 0.0);
  CHECK(scattering_rate(4e9, cs, 850.5e-9) == Approx(2 * scattering_rate(2e9, cs, 850.5e-9)).epsilon(1e-15));
  CHECK(scattering_rate(3e9, cs, 850.5e-9) == Approx(rate_oracle(3e9, 850.5e-9)).epsilon(1e-8));
  // Gamma_sc = sum_i Gamma_i U_i / (hbar Delta_i).
  double sum = 0;
  const double w = 2 * kPi * constants::kSpeedOfLight / 850.5e-9;
  for (const auto& l : cs.lines) {
    AtomSpec one = cs;
    one.lines = {{l.wavelength, l.gamma, 1.0}};
    const double delta = w - 2 * kPi * constants::kSpeedOfLight / l.wavelength;
    sum += l.weight * l.gamma * dipole_potential(3e9, one, 850.5e-9) / (constants::kHbar * delta);
  }
  CHECK(scattering_rate(3e9, cs, 850.5e-9) == Approx(sum).epsilon(1e-12));
}

TEST_CASE("atom spec") {
  const AtomSpec cs = AtomSpec::cesium();
  CHECK_NOTHROW(cs.validate());
  CHECK(cs.c3 == AtomSpec::kDefaultC3);
  CHECK(cs.recoil_energy(852.347e-9) / constants::kBoltzmann == Approx(0.0991e-6).epsilon(2e-3));
  AtomSpec bad = cs;
  bad.lines[0].weight = 0.5;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
  bad = cs;
  bad.mass = 0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("van der Waals term") {
  const FiberSpec fiber;
  const AtomSpec cs = AtomSpec::cesium();
  const double a = fiber.radius;
  CHECK_THROWS_AS(vdw_potential(a, fiber, cs), std::domain_error);
  CHECK_THROWS_AS(vdw_potential(a - 1e-9, fiber, cs), std::domain_error);
  for (double d : {1e-9, 10e-9, 100e-9}) {
    CHECK(vdw_potential(a + d, fiber, cs) / vdw_potential(a + 2 * d, fiber, cs) == Approx(8.0).epsilon(1e-12));
    CHECK(vdw_potential(a + d, fiber, cs) == Approx(-cs.c3 / (d * d * d)).epsilon(1e-12));
  }
  AtomSpec twice = cs;
  twice.c3 *= 2;
  CHECK(vdw_potential(a + 7e-9, fiber, twice) == Approx(2 * vdw_potential(a + 7e-9, fiber, cs)).epsilon(1e-15));
  CHECK(vdw_potential(a + 1e-12, fiber, cs) == Approx(1e6 * vdw_potential(a + 1e-10, fiber, cs)).epsilon(1e-12));
}

// The fields cancel exactly at one point; the surface attraction pulls the
// total minimum about a nanometre inwards, where the light term is ~0.2 uK.
TEST_CASE("light term vanishes at the trap-1 cancellation point") {
  const auto& f = fixture::field("he11-te01");
  const Vec3& m = fixture::minimum("he11-te01");
  CHECK(f.total(m) < 0.0);
  CHECK(f.total(m) == Approx(f.light_potential(m) + f.vdw(m)).epsilon(1e-14));
  CHECK(total_potential(f, m) == f.total(m));

  Vec3 zero = m;
  double best = f.intensity(m);
  for (double dy = -5e-9; dy <= 5e-9; dy += 0.01e-9) {
    for (double dz = -1e-9; dz <= 1e-9; dz += 0.05e-9) {
      const Vec3 p{m[0], m[1] + dy, m[2] + dz};
      const double i = f.intensity(p);
      if (i < best) best = i, zero = p;
    }
  }
  CHECK(f.light_potential(zero) < 0.01 * constants::kBoltzmann * 1e-6);
  CHECK(zero[1] > m[1]);
  CHECK(zero[1] - m[1] < 2e-9);
  CHECK(f.light_potential(m) < constants::kBoltzmann * 1e-6);
}

TEST_CASE("light term is positive at the trap-2 minimum") {
  const auto& f = fixture::field("he11-he21");
  CHECK(f.light_potential(fixture::minimum("he11-he21")) > 0.01 * constants::kBoltzmann * 1e-6);
}

TEST_CASE("sign structure and decay") {
  std::mt19937 rng(8);
  std::uniform_real_distribution<double> ur(401e-9, 2000e-9), uphi(-kPi, kPi), uz(0, 1e-5);
  for (const char* name : {"he11-te01", "he11-he21", "te01-he21"}) {
    const auto& f = fixture::field(name);
    for (int i = 0; i < 50; ++i) {
      const Vec3 x = to_cartesian({ur(rng), uphi(rng), uz(rng)});
      CHECK(f.light_potential(x) >= 0.0);
      CHECK(f.vdw(x) <= 0.0);
      CHECK(local_scattering_rate(f, x) >= 0.0);
      CHECK(f.scattering(x) == Approx(f.scattering_coefficient() * f.intensity(x)).epsilon(1e-14));
    }
    const Vec3 far = to_cartesian({400e-9 + 60 * f.pair().b.decay_length, 0.3, 0.0});
    CHECK(std::abs(constants::to_millikelvin(f.total(far))) < 1e-6);
  }
}

// Far out the exponential light tail falls below the algebraic surface term,
// which leaves a shallow dip (~0.01 uK near 1.85 um); nothing trapping.
TEST_CASE("a pure HE11 field has no trapping minimum along y") {
  auto cfg = preset("he11-te01");
  cfg.tau = 1.0;
  const auto f = build_field(cfg);
  const double kt = constants::kBoltzmann * 1e-6;
  double u2 = f.total({0, 401e-9, 0}), u1 = f.total({0, 401.5e-9, 0});
  for (double y = 402e-9; y < 3e-6; y += 0.5e-9) {
    const double u = f.total({0, y, 0});
    if (u1 < u2 && u1 < u) {
      CHECK(y > 1.5e-6);
      CHECK(std::abs(u1) < 0.1 * kt);
    }
    u2 = u1;
    u1 = u;
  }
}

TEST_CASE("trap-1 radial profile") {
  const auto& f = fixture::field("he11-te01");
  const Vec3& m = fixture::minimum("he11-te01");
  auto u = [&](double r) { return f.total({0, r, m[2]}); };
  double best_r = 0, best = 1e300;
  for (double r = 420e-9; r < 900e-9; r += 0.25e-9) {
    if (u(r) < best) best = u(r), best_r = r;
  }
  CHECK(best_r == Approx(534e-9).epsilon(0.03));
  double inner_max = -1e300;
  for (double r = 420e-9; r < best_r; r += 0.25e-9) inner_max = std::max(inner_max, u(r));
  CHECK(inner_max > best);
  CHECK(u(420e-9) < inner_max);
  double outer_max = -1e300, outer_r = 0;
  for (double r = best_r; r < 1500e-9; r += 0.25e-9) {
    if (u(r) > outer_max) outer_max = u(r), outer_r = r;
  }
  CHECK(u(1500e-9) < outer_max);
  CHECK(outer_r > best_r);
}

TEST_CASE("potential gradient matches finite differences") {
  std::mt19937 rng(9);
  std::uniform_real_distribution<double> ur(450e-9, 900e-9), uphi(-kPi, kPi), uz(0, 5e-6);
  for (const char* name : {"he11-te01", "he11-he21", "te01-he21"}) {
    const auto& f = fixture::field(name);
    for (int i = 0; i < 10; ++i) {
      const Vec3 x = to_cartesian({ur(rng), uphi(rng), uz(rng)});
      const Vec3 g = f.gradient(x);
      const double gn = std::hypot(g[0], g[1], g[2]);
      for (int k = 0; k < 3; ++k) {
        Vec3 xp = x, xm = x;
        xp[k] += 1e-11;
        xm[k] -= 1e-11;
        CHECK(std::abs(g[k] - (f.total(xp) - f.total(xm)) / 2e-11) < 1e-5 * gn);
      }
    }
  }
}

}
