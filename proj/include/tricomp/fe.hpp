#pragma once

// Bilinear quadrilateral on an axis-aligned hx x hy rectangle, engineering strains
// (exx, eyy, gxy). Local nodes run counter-clockwise from the lower-left corner.

#include "compliance_map.hpp"

#include <Eigen/Dense>

#include <array>
#include <cmath>
#include <numbers>

namespace tricomp::fe {

using Mat8 = Eigen::Matrix<double, 8, 8>;
using Vec8 = Eigen::Matrix<double, 8, 1>;
using Mat38 = Eigen::Matrix<double, 3, 8>;

inline Mat38 strain_matrix(double xi, double eta, double hx, double hy) {
  static constexpr int sx[4] = {-1, 1, 1, -1};
  static constexpr int sy[4] = {-1, -1, 1, 1};
  Mat38 b = Mat38::Zero();
  for (int a = 0; a < 4; ++a) {
    const double dx = 0.25 * sx[a] * (1.0 + sy[a] * eta) * 2.0 / hx;
    const double dy = 0.25 * sy[a] * (1.0 + sx[a] * xi) * 2.0 / hy;
    b(0, 2 * a) = dx;
    b(1, 2 * a + 1) = dy;
    b(2, 2 * a) = dy;
    b(2, 2 * a + 1) = dx;
  }
  return b;
}

// Element matrices for every Voigt stiffness component, so K_e = sum_ab D_ab * parts[a][b].
struct Q4 {
  double hx, hy;
  std::array<std::array<Mat8, 3>, 3> parts;
  std::array<Mat38, 4> gauss_b;
  Mat38 center_b;

  Q4(double hx_, double hy_) : hx(hx_), hy(hy_) {
    const double g = 1.0 / std::sqrt(3.0);
    const double pts[4][2] = {{-g, -g}, {g, -g}, {g, g}, {-g, g}};
    const double w = 0.25 * hx * hy;
    for (auto& row : parts)
      for (auto& m : row) m.setZero();
    for (int q = 0; q < 4; ++q) {
      gauss_b[q] = strain_matrix(pts[q][0], pts[q][1], hx, hy);
      for (int a = 0; a < 3; ++a)
        for (int c = 0; c < 3; ++c)
          parts[a][c] += w * gauss_b[q].row(a).transpose() * gauss_b[q].row(c);
    }
    center_b = strain_matrix(0.0, 0.0, hx, hy);
  }

  double area() const { return hx * hy; }

  Mat8 stiffness(const Mat3& d) const {
    Mat8 k = Mat8::Zero();
    for (int a = 0; a < 3; ++a)
      for (int c = 0; c < 3; ++c)
        if (d(a, c) != 0.0) k += d(a, c) * parts[a][c];
    return k;
  }
};

// Voigt (engineering shear) stiffness from a Mandel stiffness and back.
inline Mat3 mandel_to_voigt(const Mat3& cm) {
  const Vec3 t(1.0, 1.0, 1.0 / std::numbers::sqrt2);
  return t.asDiagonal() * cm * t.asDiagonal();
}
inline Mat3 voigt_to_mandel(const Mat3& cv) {
  const Vec3 t(1.0, 1.0, std::numbers::sqrt2);
  return t.asDiagonal() * cv * t.asDiagonal();
}

}  // namespace tricomp::fe
