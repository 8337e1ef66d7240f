#pragma once

#include "errors.hpp"
#include "phases.hpp"
#include "tensor.hpp"

#include <algorithm>
#include <cmath>
#include <utility>
#include <vector>

namespace tricomp {

// W_i = 1/2 kappa Tr(sigma^2). A void phase only admits zero stress.
inline double well_energy(const Phase& phase, const StressTensor& s) {
  if (phase.is_void()) {
    if (s.frob2() != 0.0) throw InputError("void cannot carry stress");
    return 0.0;
  }
  return 0.5 * phase.kappa * s.frob2();
}

struct WellChoice {
  double value;
  std::size_t well;
};

// min_i W_i(sigma) + gamma_i; ties go to the smaller compliance.
inline WellChoice multiwell_lagrangian(const PhaseSet& ps, const StressTensor& s) {
  WellChoice best{kInf, 0};
  for (std::size_t i = 0; i < ps.size(); ++i) {
    const Phase& p = ps.phases[i];
    double v;
    if (p.is_void())
      v = s.frob2() == 0.0 ? p.cost : kInf;
    else
      v = 0.5 * p.kappa * s.frob2() + p.cost;
    if (v < best.value) best = {v, i};
  }
  return best;
}

// Harmonic mean of compliances; void terms vanish.
inline double wiener_bound(const PhaseSet& ps) {
  double sum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!ps.phases[i].is_void()) sum += ps.m[i] / ps.kappa(i);
  if (sum == 0.0) throw InputError("all-void composite has no finite compliance");
  return 1.0 / sum;
}

inline double hs_bound(const PhaseSet& ps) {
  if (ps.size() == 0) throw InputError("empty phase set");
  const double k1 = ps.kappa(0);
  double sum = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (!ps.phases[i].is_void()) sum += ps.m[i] / (ps.kappa(i) + k1);
  return -k1 + 1.0 / sum;
}

inline double hs_void(double k1, double k2, double m1, double m2) {
  return -k1 + 1.0 / (m1 / (2.0 * k1) + m2 / (k1 + k2));
}

struct Thresholds {
  double m11;
  double m12;
};

inline Thresholds three_material_thresholds(double k1, double k2, double m2) {
  const double g = std::sqrt(m2) - m2;
  return {2.0 * k1 * g / (k2 + k1), k1 * g / k2};
}

struct BoundValue {
  double value;
  int branch;
};

// Isotropic three-material bound with a void third phase; kappa* in the tensor convention.
inline BoundValue three_material_bound(double k1, double k2, double m1, double m2) {
  if (!(k1 > 0.0 && k2 > k1)) throw InputError("need 0 < kappa1 < kappa2");
  if (m1 < 0.0 || m2 < 0.0 || m1 + m2 > 1.0 + 1e-12) throw InputError("fractions outside the simplex");
  const auto [m11, m12] = three_material_thresholds(k1, k2, m2);
  if (m1 >= m11) return {hs_void(k1, k2, m1, m2), 1};
  if (m1 >= m12 && m1 > 0.0) {
    const double r = 1.0 - std::sqrt(m2);
    return {k2 + 2.0 * k1 * r * r / m1, 2};
  }
  return {-k2 + 1.0 / (m1 / (2.0 * k1) + m2 / (2.0 * k2)), 3};
}

// 1/2 kappa Tr(sigma^2) + t det(sigma) on the cone det >= 0, +inf elsewhere.
// The sign makes the null-Lagrangian translation reproduce the three-branch bound.
inline double translated_well(const Phase& phase, const StressTensor& s, double t) {
  const double d = s.det();
  if (d < 0.0) return kInf;
  if (phase.is_void()) return s.frob2() == 0.0 ? 0.0 : kInf;
  return 0.5 * phase.kappa * s.frob2() + t * d;
}

struct SupportSet {
  std::vector<StressTensor> points;
  std::vector<double> weights;
  std::size_t owner = 0;
};

namespace detail {

// Symmetric bilinear form with B(a, a) = det(a).
inline double det_form(const StressTensor& a, const StressTensor& b) {
  return 0.5 * (a.sxx * b.syy + a.syy * b.sxx) - a.sxy * b.sxy;
}

}  // namespace detail

struct HullRange {
  double min;
  double max;
};

// Range of det(rho_A - rho) over rho_A in the convex hull of `pts`.
// Extremes of a quadratic over a polytope in the 3D space of symmetric tensors sit at stationary
// points of its faces, and every such point lies in a simplex of at most four vertices.
inline HullRange det_range_on_hull(const StressTensor& rho, const std::vector<StressTensor>& pts) {
  const std::size_t n = pts.size();
  if (n == 0) throw InputError("empty support set");
  std::vector<StressTensor> q;
  q.reserve(n);
  for (const auto& p : pts) q.push_back(p - rho);
  Eigen::MatrixXd g(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) g(i, j) = detail::det_form(q[i], q[j]);

  HullRange r{kInf, -kInf};
  auto consider = [&](double v) {
    r.min = std::min(r.min, v);
    r.max = std::max(r.max, v);
  };
  std::vector<std::size_t> idx;
  auto visit = [&]() {
    const std::size_t k = idx.size();
    if (k == 1) {
      consider(g(idx[0], idx[0]));
      return;
    }
    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(k + 1, k + 1);
    Eigen::VectorXd b = Eigen::VectorXd::Zero(k + 1);
    for (std::size_t i = 0; i < k; ++i) {
      for (std::size_t j = 0; j < k; ++j) a(i, j) = g(idx[i], idx[j]);
      a(i, k) = -1.0;
      a(k, i) = 1.0;
    }
    b(k) = 1.0;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(a);
    lu.setThreshold(1e-13);
    if (!lu.isInvertible()) return;
    Eigen::VectorXd x = lu.solve(b);
    for (std::size_t i = 0; i < k; ++i)
      if (x(i) < -1e-14) return;
    StressTensor p{};
    for (std::size_t i = 0; i < k; ++i) p = p + x(i) * q[idx[i]];
    consider(p.det());
  };
  // Enumerate subsets of size <= 4 in lexicographic order.
  auto rec = [&](auto&& self, std::size_t start) -> void {
    for (std::size_t i = start; i < n; ++i) {
      idx.push_back(i);
      visit();
      if (idx.size() < 4) self(self, i + 1);
      idx.pop_back();
    }
  };
  rec(rec, 0);
  return r;
}

// True iff some rho_A in conv(others) is rank-one connected to rho.
inline bool compatibility_check(const StressTensor& rho, const SupportSet& others) {
  if (others.points.empty()) throw InputError("compatibility check needs at least one support");
  const HullRange r = det_range_on_hull(rho, others.points);
  constexpr double tol = 1e-10;
  return r.min <= tol && r.max >= -tol;
}

inline bool mean_field_check(const StressTensor& rho1, const StressTensor& s0) {
  return rank_one_gap(rho1, s0) <= 1e-12;
}

}  // namespace tricomp
