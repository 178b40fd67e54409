#pragma once

#include <array>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace nanotrap::numerics {

class NumericsError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised by integrate() when the subdivision budget is exhausted.
class QuadratureError : public NumericsError {
 public:
  QuadratureError(const std::string& what, double best_estimate, double error_estimate)
      : NumericsError(what), best_estimate_(best_estimate), error_estimate_(error_estimate) {}
  double best_estimate() const { return best_estimate_; }
  double error_estimate() const { return error_estimate_; }

 private:
  double best_estimate_;
  double error_estimate_;
};

using Vec3 = std::array<double, 3>;
using ScalarFn = std::function<double(double)>;
using FieldFn = std::function<double(const Vec3&)>;

struct Bracket {
  double lo;
  double hi;
};

// ---------------------------------------------------------------------------
// Bessel functions of integer order 0..3. The sequence helpers go to order 8
// for the higher fibre modes used in dispersion sweeps.

inline constexpr int kMaxBesselOrder = 3;

enum class BesselKind { J, K };

double bessel_j(int order, double x);
double bessel_k(int order, double x);
double bessel_deriv(BesselKind kind, int order, double x);

/// J_0..J_nmax (nmax <= 8) in one pass; out must hold nmax+1 values.
void bessel_j_sequence(double x, int nmax, double* out);
/// K_0..K_nmax (nmax <= 8) in one pass; out must hold nmax+1 values.
void bessel_k_sequence(double x, int nmax, double* out);

// ---------------------------------------------------------------------------

/// Safeguarded bisection/secant refinement of a sign-changing bracket.
/// Terminates when the bracket is narrower than tol (or f hits zero).
double find_root(const ScalarFn& f, Bracket bracket, double tol, int max_iterations = 200);

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Adaptive Gauss-Kronrod (7/15) quadrature. An infinite upper limit is mapped
/// onto [0,1) with x = lo + tail_scale * t/(1-t); tail_scale should be of the
/// order of the decay length of f.
double integrate(const ScalarFn& f, double lo, double hi, double tol, double tail_scale = 1.0,
                 int max_subdivisions = 2000);

// ---------------------------------------------------------------------------

struct SymmetricMatrix3 {
  double xx = 0, yy = 0, zz = 0, xy = 0, xz = 0, yz = 0;

  double operator()(int i, int j) const;
  /// Eigenvalues in ascending order (closed-form trigonometric solution).
  std::array<double, 3> eigenvalues() const;
  /// Unit eigenvector for a given eigenvalue.
  Vec3 eigenvector(double lambda) const;
  double quadratic_form(const Vec3& v) const;
  bool positive_definite() const;
};

/// Central-difference Hessian; diagonal from 3-point, off-diagonal from the
/// 4-point mixed stencil.
SymmetricMatrix3 hessian(const FieldFn& f, const Vec3& point, const Vec3& steps);

/// Central-difference gradient.
Vec3 gradient(const FieldFn& f, const Vec3& point, const Vec3& steps);

/// Golden-section minimisation of a unimodal function on [lo, hi].
double golden_section_minimize(const ScalarFn& f, double lo, double hi, double tol);

}  // namespace nanotrap::numerics
