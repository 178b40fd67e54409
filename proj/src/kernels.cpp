#include "nanotrap/kernels.hpp"

#include <omp.h>

#include <cmath>
#include <cstdlib>
#include <limits>

#include "nanotrap/numerics.hpp"

namespace nanotrap {

namespace {

bool inside_fibre(const PotentialField& field, const Vec3& p) {
  return std::hypot(p[0], p[1]) <= field.fiber().radius;
}

double grid_value(const PotentialField& field, const Vec3& p, GridQuantity quantity) {
  if (inside_fibre(field, p)) return std::numeric_limits<double>::quiet_NaN();
  return quantity == GridQuantity::potential ? field.total(p) : field.intensity(p);
}

Vec3 along(const Vec3& origin, const Vec3& d, double l) {
  return {origin[0] + l * d[0], origin[1] + l * d[1], origin[2] + l * d[2]};
}

}  // namespace

int thread_count() {
  if (const char* env = std::getenv("NANOTRAP_THREADS")) {
    char* end = nullptr;
    const long n = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<int>(n);
  }
  return omp_get_max_threads();
}

std::vector<double> evaluate_grid(const PotentialField& field, const std::vector<Vec3>& points,
                                  GridQuantity quantity, Execution exec) {
  std::vector<double> out(points.size());
  const long n = static_cast<long>(points.size());
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) out[i] = grid_value(field, points[i], quantity);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count())
  for (long i = 0; i < n; ++i) out[i] = grid_value(field, points[i], quantity);
  return out;
}

std::vector<CVec3> evaluate_field_grid(const ModePair& pair, const std::vector<Vec3>& points,
                                       Execution exec) {
  std::vector<CVec3> out(points.size());
  const long n = static_cast<long>(points.size());
  auto one = [&](long i) {
    const CylPoint p = to_cylindrical(points[i]);
    if (p.r <= pair.fiber().radius) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      out[i] = CVec3{Complex(nan, nan), Complex(nan, nan), Complex(nan, nan)};
      return;
    }
    out[i] = cylindrical_to_cartesian(total_e_field(pair, p), p.phi);
  };
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) one(i);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 64) num_threads(thread_count())
  for (long i = 0; i < n; ++i) one(i);
  return out;
}

RayBarrier ray_barrier(const PotentialField& field, const Vec3& origin, const Vec3& direction,
                       const RayOptions& options) {
  const double a = field.fiber().radius + options.surface_margin;
  auto u = [&](double l) { return field.total(along(origin, direction, l)); };
  auto outside = [&](double l) {
    const Vec3 p = along(origin, direction, l);
    return std::hypot(p[0], p[1]) > a;
  };

  RayBarrier result;
  double l_prev2 = 0.0;
  double l_prev = 0.0;
  double u_prev = u(0.0);
  double best_l = 0.0;
  double best_u = u_prev;
  bool rising = false;
  for (;;) {
    const double step = std::max(options.min_step, options.relative_step * l_prev);
    const double l = l_prev + step;
    if (l > options.max_length) {
      result.reached_end = true;
      break;
    }
    if (!outside(l)) {
      result.hit_surface = true;
      break;
    }
    const double ul = u(l);
    if (ul > best_u) {
      best_u = ul;
      best_l = l;
    }
    if (ul >= u_prev) {
      rising = true;
    } else if (rising) {
      // Local maximum bracketed by [l_prev2, l]; polish with golden section.
      const double lm = numerics::golden_section_minimize([&](double x) { return -u(x); }, l_prev2, l,
                                                          1e-3 * options.min_step);
      result.height = std::max(u(lm), u_prev);
      result.length = lm;
      return result;
    }
    l_prev2 = l_prev;
    l_prev = l;
    u_prev = ul;
  }
  result.height = best_u;
  result.length = best_l;
  return result;
}

std::vector<RayBarrier> scan_rays(const PotentialField& field, const Vec3& origin,
                                  const std::vector<Vec3>& directions, const RayOptions& options,
                                  Execution exec) {
  std::vector<RayBarrier> out(directions.size());
  const long n = static_cast<long>(directions.size());
  if (exec == Execution::serial) {
    for (long i = 0; i < n; ++i) out[i] = ray_barrier(field, origin, directions[i], options);
    return out;
  }
#pragma omp parallel for schedule(dynamic, 16) num_threads(thread_count())
  for (long i = 0; i < n; ++i) out[i] = ray_barrier(field, origin, directions[i], options);
  return out;
}

}  // namespace nanotrap
