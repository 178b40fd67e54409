#include "nanotrap/numerics.hpp"

#include <cmath>
#include <queue>
#include <vector>

namespace nanotrap::numerics {
namespace {

constexpr double kXgk[8] = {0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
                            0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
                            0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
                            0.207784955007898467600689403773245, 0.0};
constexpr double kWgk[8] = {0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
                            0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
                            0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
                            0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr double kWg[4] = {0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
                           0.381830050505118944950369775488975, 0.417959183673469387755102040816327};

struct Segment {
  double lo;
  double hi;
  double value;
  double error;
  bool operator<(const Segment& other) const { return error < other.error; }
};

Segment kronrod15(const ScalarFn& f, double lo, double hi) {
  const double center = 0.5 * (lo + hi);
  const double half = 0.5 * (hi - lo);
  const double fc = f(center);
  double kronrod = fc * kWgk[7];
  double gauss = fc * kWg[3];
  for (int j = 0; j < 7; ++j) {
    const double dx = half * kXgk[j];
    const double fsum = f(center - dx) + f(center + dx);
    kronrod += kWgk[j] * fsum;
    if (j % 2 == 1) gauss += kWg[j / 2] * fsum;
  }
  kronrod *= half;
  gauss *= half;
  if (!std::isfinite(kronrod)) throw NumericsError("integrate: non-finite integrand");
  return {lo, hi, kronrod, std::abs(kronrod - gauss)};
}

}  // namespace

double integrate(const ScalarFn& f, double lo, double hi, double tol, double tail_scale,
                 int max_subdivisions) {
  if (std::isinf(hi)) {
    if (!(tail_scale > 0)) throw NumericsError("integrate: tail_scale must be positive");
    // x = lo + L t/(1-t), dx = L dt/(1-t)^2
    auto mapped = [&](double t) {
      const double one_minus = 1.0 - t;
      const double x = lo + tail_scale * t / one_minus;
      const double v = f(x);
      return v == 0.0 ? 0.0 : v * tail_scale / (one_minus * one_minus);
    };
    return integrate(mapped, 0.0, 1.0, tol, 1.0, max_subdivisions);
  }
  if (hi == lo) return 0.0;
  if (hi < lo) return -integrate(f, hi, lo, tol, tail_scale, max_subdivisions);

  std::priority_queue<Segment> work;
  Segment first = kronrod15(f, lo, hi);
  double total = first.value;
  double total_error = first.error;
  work.push(first);
  int subdivisions = 0;
  while (total_error > std::max(tol, tol * std::abs(total))) {
    if (subdivisions >= max_subdivisions) {
      throw QuadratureError("integrate: subdivision budget exhausted", total, total_error);
    }
    Segment worst = work.top();
    work.pop();
    const double mid = 0.5 * (worst.lo + worst.hi);
    Segment left = kronrod15(f, worst.lo, mid);
    Segment right = kronrod15(f, mid, worst.hi);
    total += left.value + right.value - worst.value;
    total_error += left.error + right.error - worst.error;
    work.push(left);
    work.push(right);
    ++subdivisions;
  }
  // Re-sum to shed accumulated cancellation in the running total.
  double sum = 0.0;
  while (!work.empty()) {
    sum += work.top().value;
    work.pop();
  }
  return sum;
}

}  // namespace nanotrap::numerics
