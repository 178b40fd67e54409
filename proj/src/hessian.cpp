#include "nanotrap/numerics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace nanotrap::numerics {

double SymmetricMatrix3::operator()(int i, int j) const {
  if (i > j) std::swap(i, j);
  if (i == j) return i == 0 ? xx : (i == 1 ? yy : zz);
  if (i == 0) return j == 1 ? xy : xz;
  return yz;
}

double SymmetricMatrix3::quadratic_form(const Vec3& v) const {
  return xx * v[0] * v[0] + yy * v[1] * v[1] + zz * v[2] * v[2] +
         2.0 * (xy * v[0] * v[1] + xz * v[0] * v[2] + yz * v[1] * v[2]);
}

// Smith's closed form for the eigenvalues of a real symmetric 3x3 matrix.
std::array<double, 3> SymmetricMatrix3::eigenvalues() const {
  const double off = xy * xy + xz * xz + yz * yz;
  const double scale = std::max({std::abs(xx), std::abs(yy), std::abs(zz), std::sqrt(off)});
  if (off <= 1e-30 * scale * scale) {
    std::array<double, 3> d{xx, yy, zz};
    std::sort(d.begin(), d.end());
    return d;
  }
  const double q = (xx + yy + zz) / 3.0;
  const double p2 = (xx - q) * (xx - q) + (yy - q) * (yy - q) + (zz - q) * (zz - q) + 2.0 * off;
  const double p = std::sqrt(p2 / 6.0);
  // B = (A - qI)/p ; r = det(B)/2
  const double bxx = (xx - q) / p, byy = (yy - q) / p, bzz = (zz - q) / p;
  const double bxy = xy / p, bxz = xz / p, byz = yz / p;
  const double det = bxx * (byy * bzz - byz * byz) - bxy * (bxy * bzz - byz * bxz) +
                     bxz * (bxy * byz - byy * bxz);
  const double r = std::clamp(0.5 * det, -1.0, 1.0);
  const double phi = std::acos(r) / 3.0;
  const double e1 = q + 2.0 * p * std::cos(phi);
  const double e3 = q + 2.0 * p * std::cos(phi + 2.0 * std::numbers::pi / 3.0);
  const double e2 = 3.0 * q - e1 - e3;
  std::array<double, 3> d{e1, e2, e3};
  std::sort(d.begin(), d.end());
  return d;
}

Vec3 SymmetricMatrix3::eigenvector(double lambda) const {
  // Largest cross product of two rows of (A - lambda I).
  const Vec3 r0{xx - lambda, xy, xz};
  const Vec3 r1{xy, yy - lambda, yz};
  const Vec3 r2{xz, yz, zz - lambda};
  auto cross = [](const Vec3& a, const Vec3& b) {
    return Vec3{a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]};
  };
  auto norm2 = [](const Vec3& v) { return v[0] * v[0] + v[1] * v[1] + v[2] * v[2]; };
  Vec3 best = cross(r0, r1);
  for (const Vec3& c : {cross(r0, r2), cross(r1, r2)}) {
    if (norm2(c) > norm2(best)) best = c;
  }
  double n = std::sqrt(norm2(best));
  if (n == 0.0) {
    // Degenerate eigenvalue: any vector orthogonal to a non-zero row works.
    for (const Vec3& r : {r0, r1, r2}) {
      if (norm2(r) > 0.0) {
        best = cross(r, std::abs(r[0]) < 0.9 * std::sqrt(norm2(r)) ? Vec3{1, 0, 0} : Vec3{0, 1, 0});
        n = std::sqrt(norm2(best));
        break;
      }
    }
    if (n == 0.0) return {1.0, 0.0, 0.0};
  }
  return {best[0] / n, best[1] / n, best[2] / n};
}

bool SymmetricMatrix3::positive_definite() const { return eigenvalues()[0] > 0.0; }

SymmetricMatrix3 hessian(const FieldFn& f, const Vec3& point, const Vec3& steps) {
  for (double s : steps) {
    if (!(s > 0)) throw NumericsError("hessian: steps must be positive");
  }
  auto eval = [&](const Vec3& p) {
    const double v = f(p);
    if (!std::isfinite(v)) throw NumericsError("hessian: non-finite value on stencil");
    return v;
  };
  auto shifted = [&](int i, double si, int j, double sj) {
    Vec3 p = point;
    p[i] += si;
    if (j >= 0) p[j] += sj;
    return p;
  };
  const double f0 = eval(point);
  double diag[3];
  for (int i = 0; i < 3; ++i) {
    const double h = steps[i];
    diag[i] = (eval(shifted(i, h, -1, 0)) - 2.0 * f0 + eval(shifted(i, -h, -1, 0))) / (h * h);
  }
  auto mixed = [&](int i, int j) {
    const double hi = steps[i], hj = steps[j];
    return (eval(shifted(i, hi, j, hj)) - eval(shifted(i, hi, j, -hj)) - eval(shifted(i, -hi, j, hj)) +
            eval(shifted(i, -hi, j, -hj))) /
           (4.0 * hi * hj);
  };
  SymmetricMatrix3 m;
  m.xx = diag[0];
  m.yy = diag[1];
  m.zz = diag[2];
  m.xy = mixed(0, 1);
  m.xz = mixed(0, 2);
  m.yz = mixed(1, 2);
  return m;
}

Vec3 gradient(const FieldFn& f, const Vec3& point, const Vec3& steps) {
  Vec3 g{};
  for (int i = 0; i < 3; ++i) {
    Vec3 plus = point;
    Vec3 minus = point;
    plus[i] += steps[i];
    minus[i] -= steps[i];
    g[i] = (f(plus) - f(minus)) / (2.0 * steps[i]);
  }
  return g;
}

}  // namespace nanotrap::numerics
