#pragma once

#include "compliance_map.hpp"
#include "errors.hpp"
#include "phases.hpp"

#include <memory>
#include <numbers>
#include <string>
#include <vector>

namespace tricomp {

// Rank-one lamination of A (fraction f) and B with layer normal (cos angle, sin angle).
// Strain jumps sym(a (x) n) span a 2D space P; continuity of traction fixes the jump, giving
//   C* = Cbar - f(1-f) dC P M^+ P^T dC,  M = P^T ((1-f) C_A + f C_B) P.
// The pseudo-inverse keeps the formula exact when one partner is void.
inline ComplianceMap laminate_pair(const ComplianceMap& a, const ComplianceMap& b, double f, double angle) {
  if (!(f >= 0.0 && f <= 1.0)) throw InputError("lamination fraction outside [0,1]");
  if (f == 1.0) return a;
  if (f == 0.0) return b;
  const double c = std::cos(angle), s = std::sin(angle), r2 = std::numbers::sqrt2;
  Eigen::Matrix<double, 3, 2> p;
  p << c * c, -r2 * c * s,
       s * s, r2 * c * s,
       r2 * c * s, c * c - s * s;
  const Mat3& ca = a.stiffness();
  const Mat3& cb = b.stiffness();
  const Mat3 dc = ca - cb;
  const Eigen::Matrix2d m = p.transpose() * ((1.0 - f) * ca + f * cb) * p;
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(m);
  const double mx = es.eigenvalues().cwiseAbs().maxCoeff();
  Eigen::Matrix2d pinv = Eigen::Matrix2d::Zero();
  for (int i = 0; i < 2; ++i) {
    const double lam = es.eigenvalues()(i);
    if (lam > 1e-13 * mx) pinv += es.eigenvectors().col(i) * es.eigenvectors().col(i).transpose() / lam;
  }
  const Mat3 cbar = f * ca + (1.0 - f) * cb;
  const Eigen::Matrix<double, 3, 2> q = dc * p;
  return ComplianceMap::from_stiffness(cbar - f * (1.0 - f) * q * pinv * q.transpose());
}

// Hierarchical laminate: a leaf holds a phase index, an inner node laminates two subtrees.
struct LaminateNode {
  int phase = -1;  // >= 0 for leaves
  std::shared_ptr<const LaminateNode> a, b;
  double f = 1.0;
  double angle = 0.0;

  static std::shared_ptr<const LaminateNode> leaf(int phase) {
    auto n = std::make_shared<LaminateNode>();
    n->phase = phase;
    return n;
  }
  static std::shared_ptr<const LaminateNode> lam(std::shared_ptr<const LaminateNode> a,
                                                 std::shared_ptr<const LaminateNode> b, double f, double angle) {
    auto n = std::make_shared<LaminateNode>();
    n->a = std::move(a);
    n->b = std::move(b);
    n->f = f;
    n->angle = angle;
    return n;
  }

  bool is_leaf() const { return phase >= 0; }
  int depth() const { return is_leaf() ? 0 : 1 + std::max(a->depth(), b->depth()); }
};

using NodePtr = std::shared_ptr<const LaminateNode>;

inline ComplianceMap effective_map(const LaminateNode& n, const std::vector<Phase>& phases) {
  if (n.is_leaf()) {
    if (std::size_t(n.phase) >= phases.size()) throw InputError("laminate leaf refers to a missing phase");
    return ComplianceMap::isotropic(phases[n.phase].kappa);
  }
  if (!(n.f >= 0.0 && n.f <= 1.0)) throw InputError("laminate fraction outside [0,1]");
  return laminate_pair(effective_map(*n.a, phases), effective_map(*n.b, phases), n.f, n.angle);
}

inline void accumulate_fractions(const LaminateNode& n, double w, std::vector<double>& out) {
  if (n.is_leaf()) {
    if (std::size_t(n.phase) >= out.size()) out.resize(n.phase + 1, 0.0);
    out[n.phase] += w;
    return;
  }
  accumulate_fractions(*n.a, w * n.f, out);
  accumulate_fractions(*n.b, w * (1.0 - n.f), out);
}

struct StructureEnergy {
  double energy;
  std::vector<double> fractions;
  bool carriable;  // false when the load has a component on a zero-stiffness direction
};

inline StructureEnergy evaluate_structure(const LaminateNode& n, const std::vector<Phase>& phases,
                                          const StressTensor& s0) {
  if (n.depth() > 3) throw InputError("laminate tree deeper than rank three");
  std::vector<double> fr(phases.size(), 0.0);
  accumulate_fractions(n, 1.0, fr);
  const double e = effective_map(n, phases).energy(s0);
  return {e, fr, std::isfinite(e)};
}

}  // namespace tricomp
