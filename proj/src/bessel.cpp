#include "nanotrap/numerics.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace nanotrap::numerics {
namespace {

constexpr int kSequenceMax = 8;
constexpr double kSeriesCrossoverJ = 12.0;
constexpr double kSeriesCrossoverK = 2.0;
constexpr double kEps = 1e-17;

void check_order(int order, int max_order) {
  if (order < 0 || order > max_order) {
    throw NumericsError("Bessel order " + std::to_string(order) + " unsupported (0.." +
                        std::to_string(max_order) + ")");
  }
}

// Ascending series sum_k (-1)^k (x/2)^(2k+n) / (k! (k+n)!).
double j_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  const double y = -half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * (k + n));
    sum += term;
    if (std::abs(term) < kEps * std::abs(sum) && k > half) break;
  }
  return sum;
}

// Hankel asymptotic expansion, usable for x >= 12 at orders 0 and 1.
double j_asymptotic(int n, double x) {
  const double mu = 4.0 * n * n;
  double p = 1.0;
  double q = 0.0;
  double term = 1.0;
  double last = 1.0;
  for (int k = 1; k < 60; ++k) {
    const double odd = 2.0 * k - 1.0;
    term *= (mu - odd * odd) / (k * 8.0 * x);
    if (std::abs(term) > std::abs(last) && k > 2) break;
    switch (k % 4) {
      case 1: q += term; break;
      case 2: p -= term; break;
      case 3: q -= term; break;
      case 0: p += term; break;
    }
    last = term;
    if (std::abs(term) < kEps) break;
  }
  const double chi = x - (0.5 * n + 0.25) * std::numbers::pi;
  return std::sqrt(2.0 / (std::numbers::pi * x)) * (p * std::cos(chi) - q * std::sin(chi));
}

// Power series for I_n(x) used by the small-argument K branch.
double i_series(int n, double x) {
  const double half = 0.5 * x;
  double term = 1.0;
  for (int i = 1; i <= n; ++i) term *= half / i;
  const double y = half * half;
  double sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= y / (static_cast<double>(k) * (k + n));
    sum += term;
    if (term < kEps * sum) break;
  }
  return sum;
}

void k01_series(double x, double& k0, double& k1) {
  const double y = 0.25 * x * x;
  const double log_half = std::log(0.5 * x);
  constexpr double gamma = std::numbers::egamma;

  // K0 = -(ln(x/2)+gamma) I0 + sum_{k>=1} H_k y^k / (k!)^2
  double t0 = 1.0;
  double h = 0.0;
  double s0 = 0.0;
  // K1 = 1/x + ln(x/2) I1 - (x/4) sum_{k>=0} (psi(k+1)+psi(k+2)) y^k / (k!(k+1)!)
  double t1 = 1.0;
  double s1 = (-2.0 * gamma + 1.0) * t1;
  for (int k = 1; k < 200; ++k) {
    t0 *= y / (static_cast<double>(k) * k);
    h += 1.0 / k;
    s0 += h * t0;
    t1 *= y / (static_cast<double>(k) * (k + 1));
    const double psi_sum = -2.0 * gamma + h + (h + 1.0 / (k + 1));
    s1 += psi_sum * t1;
    if (t0 < kEps && t1 < kEps) break;
  }
  k0 = -(log_half + gamma) * i_series(0, x) + s0;
  k1 = 1.0 / x + log_half * i_series(1, x) - 0.25 * x * s1;
}

// Steed's continued fraction (CF2) for K0 and K1, accurate for x >= 2.
void k01_continued_fraction(double x, double& k0, double& k1) {
  double b = 2.0 * (1.0 + x);
  double d = 1.0 / b;
  double h = d;
  double delh = d;
  double q1 = 0.0;
  double q2 = 1.0;
  const double a1 = 0.25;
  double q = a1;
  double c = a1;
  double a = -a1;
  double s = 1.0 + q * delh;
  for (int i = 1; i < 10000; ++i) {
    a -= 2 * i;
    c = -a * c / (i + 1.0);
    const double qnew = (q1 - b * q2) / a;
    q1 = q2;
    q2 = qnew;
    q += c * qnew;
    b += 2.0;
    d = 1.0 / (b + a * d);
    delh = (b * d - 1.0) * delh;
    h += delh;
    const double dels = q * delh;
    s += dels;
    if (std::abs(dels / s) < kEps) break;
  }
  h *= a1;
  k0 = std::sqrt(std::numbers::pi / (2.0 * x)) * std::exp(-x) / s;
  k1 = k0 * (x + 0.5 - h) / x;
}

}  // namespace

void bessel_j_sequence(double x, int nmax, double* out) {
  check_order(nmax, kSequenceMax);
  if (!(x >= 0.0)) throw NumericsError("bessel_j: argument must be non-negative");
  if (x < kSeriesCrossoverJ) {
    for (int n = 0; n <= nmax; ++n) out[n] = j_series(n, x);
    return;
  }
  out[0] = j_asymptotic(0, x);
  if (nmax >= 1) out[1] = j_asymptotic(1, x);
  for (int n = 1; n < nmax; ++n) out[n + 1] = (2.0 * n / x) * out[n] - out[n - 1];
}

void bessel_k_sequence(double x, int nmax, double* out) {
  check_order(nmax, kSequenceMax);
  if (!(x > 0.0)) throw NumericsError("bessel_k: argument must be positive");
  double k0 = 0.0;
  double k1 = 0.0;
  if (x <= kSeriesCrossoverK) {
    k01_series(x, k0, k1);
  } else {
    k01_continued_fraction(x, k0, k1);
  }
  out[0] = k0;
  if (nmax >= 1) out[1] = k1;
  for (int n = 1; n < nmax; ++n) out[n + 1] = out[n - 1] + (2.0 * n / x) * out[n];
}

double bessel_j(int order, double x) {
  check_order(order, kMaxBesselOrder);
  double v[kSequenceMax + 1];
  if (x < kSeriesCrossoverJ && x >= 0.0) return j_series(order, x);
  bessel_j_sequence(x, order, v);
  return v[order];
}

double bessel_k(int order, double x) {
  check_order(order, kMaxBesselOrder);
  double v[kSequenceMax + 1];
  bessel_k_sequence(x, order, v);
  return v[order];
}

double bessel_deriv(BesselKind kind, int order, double x) {
  check_order(order, kMaxBesselOrder);
  double v[kSequenceMax + 1];
  if (kind == BesselKind::J) {
    bessel_j_sequence(x, order + 1, v);
    const double below = order == 0 ? -v[1] : v[order - 1];
    return 0.5 * (below - v[order + 1]);
  }
  bessel_k_sequence(x, order + 1, v);
  const double below = order == 0 ? v[1] : v[order - 1];
  return -0.5 * (below + v[order + 1]);
}

}  // namespace nanotrap::numerics
