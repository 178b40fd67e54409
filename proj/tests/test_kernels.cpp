#include <cmath>
#include <cstdlib>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "nanotrap/kernels.hpp"

using namespace nanotrap;
using doctest::Approx;

namespace {

std::vector<Vec3> sample_points(int n, unsigned seed) {
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> u(-1.2e-6, 1.2e-6), uz(0, 5e-6);
  std::vector<Vec3> pts;
  for (int i = 0; i < n; ++i) pts.push_back({u(rng), u(rng), uz(rng)});
  pts.push_back({0, 0, 0});
  pts.push_back({400e-9, 0, 0});
  return pts;
}

struct ThreadEnv {
  explicit ThreadEnv(const char* v) { setenv("NANOTRAP_THREADS", v, 1); }
  ~ThreadEnv() { unsetenv("NANOTRAP_THREADS"); }
};

}  // namespace

TEST_SUITE("kernels") {

TEST_CASE("thread count honours the environment") {
  {
    ThreadEnv env("3");
    CHECK(thread_count() == 3);
  }
  {
    ThreadEnv env("zero");
    CHECK(thread_count() >= 1);
  }
  {
    ThreadEnv env("-2");
    CHECK(thread_count() >= 1);
  }
}

TEST_CASE("grid kernels: parallel equals serial") {
  ThreadEnv env("4");
  const auto& f = fixture::field("he11-te01");
  const auto pts = sample_points(3000, 1);
  for (auto q : {GridQuantity::potential, GridQuantity::intensity}) {
    const auto s = evaluate_grid(f, pts, q, Execution::serial);
    const auto p = evaluate_grid(f, pts, q, Execution::parallel);
    REQUIRE(s.size() == pts.size());
    REQUIRE(p.size() == pts.size());
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const bool inside = std::hypot(pts[i][0], pts[i][1]) <= 400e-9;
      CHECK(std::isnan(s[i]) == inside);
      if (inside) {
        CHECK(std::isnan(p[i]));
      } else {
        CHECK(s[i] == p[i]);
        CHECK(s[i] == (q == GridQuantity::potential ? f.total(pts[i]) : f.intensity(pts[i])));
      }
    }
  }
}

TEST_CASE("field grid") {
  ThreadEnv env("4");
  const auto& pair = fixture::field("te01-he21").pair();
  const auto pts = sample_points(500, 2);
  const auto s = evaluate_field_grid(pair, pts, Execution::serial);
  const auto p = evaluate_field_grid(pair, pts, Execution::parallel);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const CylPoint c = to_cylindrical(pts[i]);
    if (c.r <= 400e-9) {
      CHECK(std::isnan(s[i][0].real()));
      continue;
    }
    const CVec3 ref = cylindrical_to_cartesian(total_e_field(pair, c), c.phi);
    for (int k = 0; k < 3; ++k) {
      CHECK(s[i][k] == p[i][k]);
      CHECK(s[i][k] == ref[k]);
    }
  }
}

TEST_CASE("ray barrier against a fine scan") {
  const auto& f = fixture::field("he11-te01");
  const Vec3& m = fixture::minimum("he11-te01");
  const double rho = std::hypot(m[0], m[1]);
  for (const Vec3& d : {Vec3{m[0] / rho, m[1] / rho, 0}, Vec3{0, 0, 1}, Vec3{0.6, 0.0, 0.8}}) {
    const RayBarrier rb = ray_barrier(f, m, d, RayOptions{});
    CHECK(!rb.hit_surface);
    CHECK(!rb.reached_end);
    // First local maximum of a 0.01 nm scan.
    double prev = f.total(m), peak = 0, peak_l = 0;
    for (double l = 1e-11;; l += 1e-11) {
      const double u = f.total({m[0] + l * d[0], m[1] + l * d[1], m[2] + l * d[2]});
      if (u < prev) {
        peak = prev;
        peak_l = l - 1e-11;
        break;
      }
      prev = u;
    }
    CHECK(rb.height == Approx(peak).epsilon(1e-7));
    CHECK(rb.length == Approx(peak_l).epsilon(1e-3));
  }
}

TEST_CASE("rays ending at the surface or the range limit") {
  const auto& f = fixture::field("he11-te01");
  const Vec3 near_surface{0, 402e-9, 0};
  const RayBarrier in = ray_barrier(f, near_surface, {0, -1, 0}, RayOptions{});
  CHECK(in.hit_surface);
  RayOptions shortr;
  shortr.max_length = 5e-9;
  const RayBarrier out = ray_barrier(f, fixture::minimum("he11-te01"), {0, 1, 0}, shortr);
  CHECK(out.reached_end);
}

TEST_CASE("ray fan: parallel equals serial") {
  ThreadEnv env("4");
  const auto& f = fixture::field("he11-he21");
  const Vec3& m = fixture::minimum("he11-he21");
  std::mt19937 rng(5);
  std::normal_distribution<double> n01;
  std::vector<Vec3> dirs;
  for (int i = 0; i < 200; ++i) {
    Vec3 d{n01(rng), n01(rng), n01(rng)};
    const double n = std::hypot(d[0], d[1], d[2]);
    dirs.push_back({d[0] / n, d[1] / n, d[2] / n});
  }
  const auto s = scan_rays(f, m, dirs, RayOptions{}, Execution::serial);
  const auto p = scan_rays(f, m, dirs, RayOptions{}, Execution::parallel);
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    CHECK(s[i].height == p[i].height);
    CHECK(s[i].length == p[i].length);
    CHECK(s[i].hit_surface == p[i].hit_surface);
  }
}

}
