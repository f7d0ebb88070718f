#pragma once

// Hand-rolled reference computations used to freeze expected values. None of
// these call into the library's numerical routines.

#include <array>
#include <cmath>
#include <vector>

namespace oracle {

using M2 = std::array<double, 4>;  // row-major 2x2

// Eigenvalues of [[a,b],[b,c]], ascending, from the characteristic polynomial.
inline std::array<double, 2> eig2(double a, double b, double c) {
  const double m = 0.5 * (a + c);
  const double r = std::sqrt(0.25 * (a - c) * (a - c) + b * b);
  return {m - r, m + r};
}

inline M2 inv2(const M2& a) {
  const double det = a[0] * a[3] - a[1] * a[2];
  return {a[3] / det, -a[1] / det, -a[2] / det, a[0] / det};
}

inline M2 mul2(const M2& a, const M2& b) {
  return {a[0] * b[0] + a[1] * b[2], a[0] * b[1] + a[1] * b[3], a[2] * b[0] + a[3] * b[2],
          a[2] * b[1] + a[3] * b[3]};
}

inline M2 transpose2(const M2& a) { return {a[0], a[2], a[1], a[3]}; }

inline M2 add2(const M2& a, const M2& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]}; }

inline M2 id2() { return {1, 0, 0, 1}; }

// T (X (T^t T - I) + I)^{-1} X T^t with explicit 2x2 algebra.
inline M2 automorphism2(const M2& t, const M2& x) {
  const M2 g = add2(mul2(transpose2(t), t), {-1, 0, 0, -1});
  const M2 inner = inv2(add2(mul2(x, g), id2()));
  return mul2(mul2(mul2(t, inner), x), transpose2(t));
}

// sup { t : tP <= A } on a 2x2 A by bisection, with PSD tested through the
// 2x2 trace/determinant criterion.
inline double strength2(const M2& a, double x0, double x1, int iterations = 200) {
  const double nx = std::hypot(x0, x1);
  x0 /= nx;
  x1 /= nx;
  auto psd = [](double p, double q, double r) {
    const double scale = 1.0 + std::abs(p) + std::abs(r);
    return p >= -1e-14 * scale && r >= -1e-14 * scale && p * r - q * q >= -1e-14 * scale * scale;
  };
  double lo = 0.0;
  double hi = std::abs(a[0]) + std::abs(a[3]) + 2.0 * std::abs(a[1]) + 1.0;
  for (int k = 0; k < iterations; ++k) {
    const double mid = 0.5 * (lo + hi);
    if (psd(a[0] - mid * x0 * x0, a[1] - mid * x0 * x1, a[3] - mid * x1 * x1)) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return lo;
}

// Scalar Mobius map x / (p x + 1 - p).
inline double mobius(double p, double x) { return x / (p * x + 1.0 - p); }

}  // namespace oracle
