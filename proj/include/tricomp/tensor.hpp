#pragma once

#include <Eigen/Dense>

#include <cmath>
#include <numbers>

namespace tricomp {

// Symmetric 2x2 stress; only the three independent components are stored.
struct StressTensor {
  double sxx = 0.0;
  double syy = 0.0;
  double sxy = 0.0;

  static StressTensor identity(double s = 1.0) { return {s, s, 0.0}; }
  static StressTensor diag(double a, double b) { return {a, b, 0.0}; }

  double trace() const { return sxx + syy; }
  double det() const { return sxx * syy - sxy * sxy; }
  double frob2() const { return sxx * sxx + syy * syy + 2.0 * sxy * sxy; }

  friend StressTensor operator+(StressTensor a, const StressTensor& b) {
    return {a.sxx + b.sxx, a.syy + b.syy, a.sxy + b.sxy};
  }
  friend StressTensor operator-(StressTensor a, const StressTensor& b) {
    return {a.sxx - b.sxx, a.syy - b.syy, a.sxy - b.sxy};
  }
  friend StressTensor operator*(double c, StressTensor a) {
    return {c * a.sxx, c * a.syy, c * a.sxy};
  }
  friend bool operator==(const StressTensor&, const StressTensor&) = default;
};

struct Invariants {
  double trace;
  double det;
  double frob2;
};

inline Invariants invariants(const StressTensor& s) { return {s.trace(), s.det(), s.frob2()}; }

struct Eigen2 {
  double lambda1;  // smaller
  double lambda2;  // larger
  double angle;    // direction of the lambda2 eigenvector, in (-pi/2, pi/2]
};

inline Eigen2 eigen(const StressTensor& s) {
  const double mean = 0.5 * (s.sxx + s.syy);
  const double half = 0.5 * (s.sxx - s.syy);
  const double r = std::hypot(half, s.sxy);
  Eigen2 e{mean - r, mean + r, 0.0};
  // Recompute the smaller-magnitude root from the determinant to avoid cancellation.
  if (std::abs(e.lambda2) >= std::abs(e.lambda1) && e.lambda2 != 0.0)
    e.lambda1 = s.det() / e.lambda2;
  else if (e.lambda1 != 0.0)
    e.lambda2 = s.det() / e.lambda1;
  const double scale = std::abs(s.sxx) + std::abs(s.syy) + std::abs(s.sxy);
  if (r <= 1e-15 * scale || r == 0.0) return e;
  double a = 0.5 * std::atan2(2.0 * s.sxy, s.sxx - s.syy);
  if (a <= -std::numbers::pi / 2) a += std::numbers::pi;
  e.angle = a;
  return e;
}

// Rebuilds lambda2 e e^T + lambda1 e' e'^T with e = (cos a, sin a).
inline StressTensor from_eigen(double lambda1, double lambda2, double angle) {
  const double c = std::cos(angle), s = std::sin(angle);
  return {lambda2 * c * c + lambda1 * s * s, lambda2 * s * s + lambda1 * c * c,
          (lambda2 - lambda1) * c * s};
}

// R(theta) sigma R(theta)^T.
inline StressTensor rotate(const StressTensor& s, double theta) {
  const double c = std::cos(theta), n = std::sin(theta);
  const double c2 = c * c, n2 = n * n, cn = c * n;
  return {c2 * s.sxx + n2 * s.syy - 2.0 * cn * s.sxy, n2 * s.sxx + c2 * s.syy + 2.0 * cn * s.sxy,
          cn * (s.sxx - s.syy) + (c2 - n2) * s.sxy};
}

// det(a - b); zero iff a and b are rank-one connected (or equal).
inline double rank_one_gap(const StressTensor& a, const StressTensor& b) { return (a - b).det(); }

// Coordinates (sxx, syy, sqrt2 sxy): the Euclidean norm squared equals Tr(sigma^2).
using Vec3 = Eigen::Vector3d;
using Mat3 = Eigen::Matrix3d;

inline Vec3 to_mandel(const StressTensor& s) { return {s.sxx, s.syy, std::numbers::sqrt2 * s.sxy}; }
inline StressTensor from_mandel(const Vec3& v) { return {v(0), v(1), v(2) / std::numbers::sqrt2}; }

// Matrix Q with to_mandel(rotate(s, theta)) = Q * to_mandel(s).
inline Mat3 mandel_rotation(double theta) {
  const double c = std::cos(theta), n = std::sin(theta);
  const double c2 = c * c, n2 = n * n, cn = c * n, r2 = std::numbers::sqrt2;
  Mat3 q;
  q << c2, n2, -r2 * cn,
       n2, c2, r2 * cn,
       r2 * cn, -r2 * cn, c2 - n2;
  return q;
}

}  // namespace tricomp
