#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "nanotrap/config.hpp"
#include "nanotrap/numerics.hpp"
#include "nanotrap/trap_analysis.hpp"
#include "oracles.hpp"

using namespace nanotrap::numerics;
using doctest::Approx;

TEST_SUITE("numerics") {

TEST_CASE("bessel_j small values") {
  CHECK(bessel_j(0, 0.0) == 1.0);
  CHECK(bessel_j(1, 0.0) == 0.0);
  CHECK(std::abs(bessel_j(1, 1.0) - 0.44005059) < 1e-7);
  CHECK(std::abs(bessel_j(1, 1.0) - oracle::bessel_j_series(1, 1.0)) < 1e-15);
  CHECK_THROWS_AS(bessel_j(4, 1.0), NumericsError);
  CHECK_THROWS_AS(bessel_j(-1, 1.0), NumericsError);
}

TEST_CASE("first zero of J0 agrees with a series sign scan") {
  auto j0 = [](double x) { return oracle::bessel_j_series(0, x, 40); };
  const auto roots = oracle::scan_roots_descending(j0, 2.0, 3.0, 1000);
  REQUIRE(roots.size() == 1);
  CHECK(std::abs(roots[0] - 2.404826) < 1e-6);
  CHECK(std::abs(bessel_j(0, 2.404826)) < 1e-6);
  CHECK(std::abs(bessel_j(0, roots[0])) < 1e-12);
}

TEST_CASE("bessel_j matches long-double series and the standard library") {
  for (int n = 0; n <= 3; ++n) {
    for (double x = 0.05; x < 12.0; x += 0.37) {
      const double ref = oracle::bessel_j_series(n, x, 60);
      CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-10 * std::max(1.0, std::abs(ref)));
    }
    for (double x = 12.0; x <= 50.0; x += 0.83) {
      const double ref = std::cyl_bessel_j(static_cast<double>(n), x);
      CHECK(std::abs(bessel_j(n, x) - ref) <= 1e-10 * std::max(0.1, std::abs(ref)));
    }
  }
}

TEST_CASE("bessel_k against the integral representation") {
  CHECK(bessel_k(0, 1.0) == Approx(0.42102444).epsilon(1e-7));
  for (int n = 0; n <= 3; ++n) {
    for (double x : {1e-3, 0.01, 0.3, 1.0, 1.99, 2.01, 4.5, 10.0, 25.0, 50.0}) {
      const double ref = oracle::bessel_k_integral(n, x);
      CHECK(bessel_k(n, x) == Approx(ref).epsilon(1e-9));
    }
  }
}

TEST_CASE("bessel_k limits and asymptotics") {
  for (double x : {1e-3, 1e-4, 1e-5}) CHECK(bessel_k(1, x) * x == Approx(1.0).epsilon(1e-3));
  const double x = 20.0;
  const double asym = std::sqrt(std::numbers::pi / (2 * x)) * std::exp(-x) * (1 + 15.0 / (8 * x));
  CHECK(bessel_k(2, x) == Approx(asym).epsilon(1e-3));
  CHECK_THROWS_AS(bessel_k(0, 0.0), NumericsError);
  CHECK_THROWS_AS(bessel_k(1, -1.0), NumericsError);
}

TEST_CASE("bessel_k is positive and strictly decreasing") {
  for (int n = 0; n <= 3; ++n) {
    double prev = bessel_k(n, 1e-3);
    for (double x = 2e-3; x < 50.0; x *= 1.07) {
      const double v = bessel_k(n, x);
      CHECK(v > 0.0);
      CHECK(v < prev);
      prev = v;
    }
  }
}

TEST_CASE("recurrence J_{n-1} + J_{n+1} = (2n/x) J_n") {
  for (int n = 1; n <= 2; ++n) {
    for (double x = 0.1; x <= 30.0; x += 0.173) {
      const double lhs = bessel_j(n - 1, x) + bessel_j(n + 1, x);
      const double rhs = 2.0 * n / x * bessel_j(n, x);
      const double scale = std::max({std::abs(lhs), std::abs(bessel_j(n - 1, x)), std::abs(bessel_j(n + 1, x))});
      CHECK(std::abs(lhs - rhs) <= 1e-8 * scale);
    }
  }
}

TEST_CASE("bessel_deriv") {
  CHECK(bessel_deriv(BesselKind::J, 0, 0.0) == 0.0);
  const double h = 1e-5;
  const double fd = (bessel_j(1, 1.5 + h) - bessel_j(1, 1.5 - h)) / (2 * h);
  CHECK(std::abs(bessel_deriv(BesselKind::J, 1, 1.5) - fd) < 1e-6);
  CHECK(bessel_deriv(BesselKind::K, 1, 2.0) < 0.0);
  for (int n = 0; n <= 3; ++n) {
    for (double x : {0.2, 1.0, 3.3, 9.0}) {
      const double fdk = (bessel_k(n, x + h) - bessel_k(n, x - h)) / (2 * h);
      CHECK(bessel_deriv(BesselKind::K, n, x) == Approx(fdk).epsilon(1e-6));
    }
  }
}

TEST_CASE("sequences extend to order 8 by recurrence") {
  double j[9], k[9];
  bessel_j_sequence(3.7, 8, j);
  bessel_k_sequence(3.7, 8, k);
  for (int n = 0; n <= 8; ++n) {
    CHECK(j[n] == Approx(std::cyl_bessel_j(double(n), 3.7)).epsilon(1e-9));
    CHECK(k[n] == Approx(std::cyl_bessel_k(double(n), 3.7)).epsilon(1e-9));
  }
  CHECK_THROWS_AS(bessel_j_sequence(1.0, 9, j), NumericsError);
}

TEST_CASE("find_root") {
  const double r = find_root([](double x) { return x * x - 2.0; }, {1.0, 2.0}, 1e-12);
  CHECK(r == Approx(std::sqrt(2.0)).epsilon(1e-12));
  CHECK_THROWS_AS(find_root([](double x) { return x - 5.0; }, {1.0, 2.0}, 1e-12), NumericsError);
  CHECK_THROWS_AS(find_root([](double) { return std::nan(""); }, {1.0, 2.0}, 1e-12), NumericsError);
}

TEST_CASE("find_root is insensitive to the bracket") {
  auto f = [](double x) { return std::cos(x) - x; };
  const double base = find_root(f, {0.0, 1.0}, 1e-13);
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> lo(-0.5, 0.7), hi(0.8, 1.5);
  for (int i = 0; i < 50; ++i) {
    const double x = find_root(f, {lo(rng), hi(rng)}, 1e-13);
    CHECK(std::abs(x - base) <= 2e-13);
  }
}

TEST_CASE("integrate") {
  CHECK(integrate([](double x) { return x * x; }, 0.0, 1.0, 1e-12) == Approx(1.0 / 3).epsilon(1e-10));
  CHECK(integrate([](double x) { return x * std::exp(-x); }, 0.0, kInfinity, 1e-12) == Approx(1.0).epsilon(1e-8));
}

// x K1(x)^2 is not integrable at 0, so the tail from 1 is used, plus x K0^2
// over the half line whose value is 1/2.
TEST_CASE("integrate Bessel-squared tails") {
  auto f = [](double x) { return x * bessel_k(1, x) * bessel_k(1, x); };
  const double ref = oracle::romberg(f, 1.0, 40.0, 20);
  CHECK(std::abs(integrate(f, 1.0, kInfinity, 1e-12) - ref) < 1e-6);
  auto g = [](double x) { return x * bessel_k(0, x) * bessel_k(0, x); };
  CHECK(integrate(g, 0.0, kInfinity, 1e-12) == Approx(0.5).epsilon(1e-8));
}

TEST_CASE("integrate reports exhausted budgets") {
  auto f = [](double x) { return std::sin(1.0 / x) / x; };
  try {
    integrate(f, 1e-6, 1.0, 1e-14, 1.0, 5);
    FAIL("expected QuadratureError");
  } catch (const QuadratureError& e) {
    CHECK(std::isfinite(e.best_estimate()));
    CHECK(e.error_estimate() > 0.0);
  }
}

TEST_CASE("hessian of quadratic forms") {
  auto q = [](const Vec3& p) { return p[0] * p[0] + 3 * p[1] * p[1] + 5 * p[2] * p[2]; };
  const auto h = hessian(q, {0, 0, 0}, {1e-3, 1e-3, 1e-3});
  CHECK(h.xx == Approx(2));
  CHECK(h.yy == Approx(6));
  CHECK(h.zz == Approx(10));
  CHECK(std::abs(h.xy) < 1e-8);

  const auto hxy = hessian([](const Vec3& p) { return p[0] * p[1]; }, {0, 0, 0}, {1e-3, 1e-3, 1e-3});
  CHECK(hxy.xy == Approx(1.0));
  CHECK(std::abs(hxy.xx) < 1e-12);
  CHECK(std::abs(hxy.yy) < 1e-12);

  std::mt19937 rng(11);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int t = 0; t < 20; ++t) {
    const double a[6] = {u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    auto f = [&](const Vec3& p) {
      return 0.5 * (a[0] * p[0] * p[0] + a[1] * p[1] * p[1] + a[2] * p[2] * p[2]) + a[3] * p[0] * p[1] +
             a[4] * p[0] * p[2] + a[5] * p[1] * p[2] + 2.0 * p[0] - p[2];
    };
    const auto m = hessian(f, {u(rng), u(rng), u(rng)}, {1e-2, 1e-2, 1e-2});
    const double got[6] = {m.xx, m.yy, m.zz, m.xy, m.xz, m.yz};
    for (int i = 0; i < 6; ++i) CHECK(got[i] == Approx(a[i]).epsilon(1e-8).scale(1.0));
  }
  CHECK_THROWS_AS(hessian([](const Vec3&) { return std::nan(""); }, {0, 0, 0}, {1, 1, 1}), NumericsError);
}

TEST_CASE("symmetric eigenvalues match the characteristic polynomial") {
  std::mt19937 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int t = 0; t < 10; ++t) {
    SymmetricMatrix3 m{u(rng), u(rng), u(rng), u(rng), u(rng), u(rng)};
    const double a[3][3] = {{m.xx, m.xy, m.xz}, {m.xy, m.yy, m.yz}, {m.xz, m.yz, m.zz}};
    const auto ref = oracle::symmetric_eigenvalues(a);
    REQUIRE(ref.size() == 3);
    const auto ev = m.eigenvalues();
    for (int i = 0; i < 3; ++i) CHECK(ev[i] == Approx(ref[i]).epsilon(1e-9).scale(1.0));
    for (double l : ev) {
      const Vec3 v = m.eigenvector(l);
      CHECK(m.quadratic_form(v) == Approx(l).epsilon(1e-9).scale(1.0));
    }
  }
}

TEST_CASE("hessian at the HE11+TE01 minimum is positive definite") {
  const auto cfg = nanotrap::preset("he11-te01");
  const auto field = nanotrap::build_field(cfg);
  const auto opts = nanotrap::build_trap_options(cfg);
  const Vec3 m = nanotrap::find_minimum(field, opts.seed);
  const auto h = hessian([&](const Vec3& p) { return field.total(p); }, m, {1e-9, 1e-9, 1e-9});
  const double a[3][3] = {{h.xx, h.xy, h.xz}, {h.xy, h.yy, h.yz}, {h.xz, h.yz, h.zz}};
  const auto ev = oracle::symmetric_eigenvalues(a);
  REQUIRE(ev.size() == 3);
  for (double l : ev) CHECK(l > 0.0);
  CHECK(h.positive_definite());
}

TEST_CASE("golden section") {
  const double x = golden_section_minimize([](double t) { return (t - 0.3) * (t - 0.3); }, -1, 2, 1e-10);
  CHECK(x == Approx(0.3).epsilon(1e-8));
}

}
