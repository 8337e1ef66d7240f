#pragma once

#include "errors.hpp"
#include "phases.hpp"
#include "tensor.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>

namespace tricomp {

// Effective elastic map on Mandel stress coordinates. The stiffness is stored so that voids and
// degenerate laminates (zero stiffness in some directions) stay exact.
class ComplianceMap {
 public:
  ComplianceMap() : c_(Mat3::Zero()) {}

  static ComplianceMap from_stiffness(const Mat3& c) {
    ComplianceMap m;
    m.c_ = 0.5 * (c + c.transpose());
    return m;
  }
  static ComplianceMap from_compliance(const Mat3& s) {
    Mat3 sym = 0.5 * (s + s.transpose());
    return from_stiffness(sym.inverse());
  }
  static ComplianceMap isotropic(double kappa) {
    return from_stiffness(std::isinf(kappa) ? Mat3::Zero().eval() : (Mat3::Identity() / kappa).eval());
  }
  // Diagonal compliance in a frame rotated by `angle`; infinite entries mean zero stiffness.
  static ComplianceMap orthotropic(double sx, double sy, double sg, double angle = 0.0) {
    Vec3 d(1.0 / sx, 1.0 / sy, 1.0 / sg);
    Mat3 c = d.asDiagonal();
    const Mat3 q = mandel_rotation(angle);
    return from_stiffness(q * c * q.transpose());
  }

  const Mat3& stiffness() const { return c_; }

  double scale() const { return c_.cwiseAbs().maxCoeff(); }

  // Rank test relative to the largest stiffness entry.
  bool finite_compliance() const {
    Eigen::SelfAdjointEigenSolver<Mat3> es(c_);
    const double mx = es.eigenvalues().cwiseAbs().maxCoeff();
    return mx > 0.0 && es.eigenvalues().minCoeff() > 1e-12 * mx;
  }
  bool finite_stiffness() const { return c_.allFinite(); }

  Mat3 compliance() const {
    if (!finite_compliance()) throw NumericalError("compliance requested for a degenerate (void-like) map");
    return c_.inverse();
  }

  ComplianceMap rotated(double theta) const {
    const Mat3 q = mandel_rotation(theta);
    return from_stiffness(q * c_ * q.transpose());
  }

  // 1/2 sigma : S sigma, or +inf when sigma leaves the range of the stiffness.
  double energy(const StressTensor& s) const {
    const Vec3 v = to_mandel(s);
    const double nv = v.norm();
    if (nv == 0.0) return 0.0;
    Eigen::SelfAdjointEigenSolver<Mat3> es(c_);
    const double mx = es.eigenvalues().cwiseAbs().maxCoeff();
    double e = 0.0;
    for (int i = 0; i < 3; ++i) {
      const double lam = es.eigenvalues()(i);
      const double p = es.eigenvectors().col(i).dot(v);
      if (lam > 1e-12 * mx)
        e += p * p / lam;
      else if (std::abs(p) > 1e-9 * nv)
        return kInf;
    }
    return 0.5 * e;
  }

  // Bulk compliance: energy under sigma0 = I, i.e. (S11 + S22 + 2 S12) / 2.
  double bulk() const { return energy(StressTensor::identity()); }

 private:
  Mat3 c_;
};

}  // namespace tricomp
