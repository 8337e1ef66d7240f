#pragma once

// Relaxed three-material compliance design. Each element carries an effective compliance that
// is a damped mixture of catalog microstructures; the loop alternates an elasticity solve with a
// pointwise choice of the best microstructure for the element-averaged stress.

#include "bounds.hpp"
#include "catalog.hpp"
#include "envelope.hpp"
#include "errors.hpp"
#include "fe.hpp"
#include "io.hpp"
#include "palette.hpp"
#include "parallel.hpp"

#include <Eigen/Sparse>
#include <Eigen/SparseCholesky>

#include <algorithm>
#include <cmath>
#include <map>
#include <string>
#include <vector>

namespace tricomp {

struct PointLoad {
  int ix = 0, iy = 0;  // node indices, origin bottom-left
  double fx = 0.0, fy = 0.0;
};

struct DesignProblem {
  int nx = 160, ny = 80;
  double height = 4.0;  // square elements of side height / ny; sets the stress level under a unit load
  CatalogPhases phases{1.0, 2.0, 1.0, 0.6, 0.0};
  std::vector<PointLoad> loads;  // empty: default tip load of magnitude `force`
  double force = 1.0;
  double omega = 0.3;
  int max_iter = 200;
  double tol = 1e-4;
  double ersatz = 1e-6;      // stiffness floor, relative to the kappa1 stiffness
  double aniso_fast = 0.05;  // |p - 1| below this uses the isotropic envelope
  bool catalog_only = false;
  bool warm_start = false;  // polish each element from its previous parameters instead of a fresh search
  unsigned threads = 1;
  unsigned long long seed = 0;

  double h() const { return height / ny; }

  // Downward force at the right mid-edge; split over two nodes when ny is odd.
  std::vector<PointLoad> effective_loads() const {
    if (!loads.empty()) return loads;
    if (ny % 2 == 0) return {{nx, ny / 2, 0.0, -force}};
    return {{nx, ny / 2, 0.0, -0.5 * force}, {nx, ny / 2 + 1, 0.0, -0.5 * force}};
  }

  void validate() const {
    if (nx < 1 || ny < 1) throw InputError("design grid must be at least 1 x 1");
    if (!(omega > 0.0 && omega <= 1.0)) throw InputError("damping must lie in (0, 1]");
    if (max_iter < 0) throw InputError("max_iter must be nonnegative");
    if (!(phases.k1 > 0.0) || (phases.has_k2() && !(phases.k2 > phases.k1)))
      throw InputError("need 0 < kappa1 < kappa2");
    const auto ld = effective_loads();
    if (ld.empty()) throw InputError("at least one load is required");
    for (const auto& l : ld)
      if (l.ix < 0 || l.ix > nx || l.iy < 0 || l.iy > ny) throw InputError("load node outside the grid");
  }
};

struct DesignField {
  int nx = 0, ny = 0;
  std::vector<Fractions> m;
  std::vector<std::string> label;
  std::vector<Mat3> compliance;  // Mandel, including the stiffness floor

  std::size_t size() const { return m.size(); }
  std::size_t index(int i, int j) const { return std::size_t(j) * nx + i; }
};

struct DesignResult {
  DesignField design;
  std::vector<double> history;
  std::vector<double> omega;  // accepted damping per step
  bool converged = false;
  std::string warning;
};

namespace detail {

// Linear elasticity on the structured grid with the left edge clamped.
class CantileverSolver {
 public:
  explicit CantileverSolver(const DesignProblem& p) : p_(p), el_(p.h(), p.h()) {
    const int nnx = p.nx + 1, nny = p.ny + 1;
    dof_map_.assign(std::size_t(2) * nnx * nny, -1);
    int next = 0;
    for (int j = 0; j < nny; ++j)
      for (int i = 0; i < nnx; ++i)
        if (i > 0) {
          dof_map_[2 * node(i, j)] = next++;
          dof_map_[2 * node(i, j) + 1] = next++;
        }
    nfree_ = next;
    std::vector<Eigen::Triplet<double>> trip;
    for (int j = 0; j < p.ny; ++j)
      for (int i = 0; i < p.nx; ++i) {
        const auto d = element_dofs(i, j);
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b)
            if (d[a] >= 0 && d[b] >= 0 && d[a] >= d[b]) trip.emplace_back(d[a], d[b], 1.0);
      }
    k_.resize(nfree_, nfree_);
    k_.setFromTriplets(trip.begin(), trip.end());
    k_.makeCompressed();
    slots_.resize(std::size_t(p.nx) * p.ny * 64, -1);
    for (int j = 0; j < p.ny; ++j)
      for (int i = 0; i < p.nx; ++i) {
        const auto d = element_dofs(i, j);
        const std::size_t e = std::size_t(j) * p.nx + i;
        for (int a = 0; a < 8; ++a)
          for (int b = 0; b < 8; ++b)
            if (d[a] >= 0 && d[b] >= 0 && d[a] >= d[b])
              slots_[e * 64 + a * 8 + b] = &k_.coeffRef(d[a], d[b]) - k_.valuePtr();
      }
    f_ = Eigen::VectorXd::Zero(nfree_);
    for (const auto& l : p.effective_loads()) {
      const int dx = dof_map_[2 * node(l.ix, l.iy)], dy = dof_map_[2 * node(l.ix, l.iy) + 1];
      if (dx < 0) continue;  // load on a clamped node does no work
      f_(dx) += l.fx;
      f_(dy) += l.fy;
    }
    ldlt_.analyzePattern(k_);
  }

  struct Solution {
    Eigen::VectorXd u;
    double compliance;  // f . u
    std::vector<StressTensor> stress;  // element averages
  };

  Solution solve(const std::vector<Mat3>& compliance) {
    std::fill(k_.valuePtr(), k_.valuePtr() + k_.nonZeros(), 0.0);
    std::vector<Mat3> stiff(compliance.size());
    for (std::size_t e = 0; e < compliance.size(); ++e) {
      stiff[e] = compliance[e].inverse();
      const fe::Mat8 ke = el_.stiffness(fe::mandel_to_voigt(stiff[e]));
      for (int ab = 0; ab < 64; ++ab) {
        const auto s = slots_[e * 64 + ab];
        if (s >= 0) k_.valuePtr()[s] += ke(ab / 8, ab % 8);
      }
    }
    ldlt_.factorize(k_);
    if (ldlt_.info() != Eigen::Success) throw NumericalError("singular global stiffness");
    Solution sol;
    sol.u = ldlt_.solve(f_);
    if (ldlt_.info() != Eigen::Success || !sol.u.allFinite()) throw NumericalError("elasticity solve failed");
    sol.compliance = f_.dot(sol.u);
    sol.stress.resize(compliance.size());
    for (int j = 0; j < p_.ny; ++j)
      for (int i = 0; i < p_.nx; ++i) {
        const auto d = element_dofs(i, j);
        fe::Vec8 ue;
        for (int a = 0; a < 8; ++a) ue(a) = d[a] >= 0 ? sol.u(d[a]) : 0.0;
        const Vec3 ev = el_.center_b * ue;
        const Vec3 em(ev(0), ev(1), ev(2) / std::numbers::sqrt2);
        const std::size_t e = std::size_t(j) * p_.nx + i;
        sol.stress[e] = from_mandel(stiff[e] * em);
      }
    return sol;
  }

  double element_area() const { return el_.area(); }

 private:
  int node(int i, int j) const { return j * (p_.nx + 1) + i; }
  std::array<int, 8> element_dofs(int i, int j) const {
    const int ns[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
    std::array<int, 8> d{};
    for (int a = 0; a < 4; ++a) {
      d[2 * a] = dof_map_[2 * ns[a]];
      d[2 * a + 1] = dof_map_[2 * ns[a] + 1];
    }
    return d;
  }

  const DesignProblem& p_;
  fe::Q4 el_;
  std::vector<int> dof_map_;
  int nfree_ = 0;
  Eigen::SparseMatrix<double> k_;
  std::vector<std::ptrdiff_t> slots_;
  Eigen::VectorXd f_;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>, Eigen::Lower> ldlt_;
};

struct Candidate {
  Fractions m;
  std::string label;
  Mat3 compliance;  // floored
  double value;     // local energy + cost at the element stress, without floor
};

inline Mat3 floored(const ComplianceMap& c, double floor_stiffness) {
  return (c.stiffness() + floor_stiffness * Mat3::Identity()).inverse();
}

inline double cost_of(const CatalogPhases& ph, const Fractions& m) { return ph.g1 * m[0] + ph.g2 * m[1] + ph.g3 * m[2]; }

inline bool envelope_applies(const CatalogPhases& ph) {
  return ph.has_k2() && ph.g1 == 1.0 && ph.g3 == 0.0 && in_gamma_interval(ph.k1, ph.k2, ph.g2);
}

}  // namespace detail

// Best local microstructure for one element stress.
struct LocalChoice {
  CatalogResult result;
  bool fast_path = false;
};

inline LocalChoice local_choice(const DesignProblem& p, const StressTensor& s, const std::vector<Params>* warm,
                                bool full_search) {
  const auto& ph = p.phases;
  LocalChoice lc;
  const auto e = eigen(s);
  const double big = std::max(std::abs(e.lambda1), std::abs(e.lambda2));
  if (big == 0.0) return lc;  // void
  const double ratio = std::abs(e.lambda2) >= std::abs(e.lambda1) ? e.lambda1 / e.lambda2 : e.lambda2 / e.lambda1;
  if (!p.catalog_only && detail::envelope_applies(ph) && std::abs(ratio - 1.0) < p.aniso_fast) {
    const double sv = std::sqrt(s.frob2());
    const EnvelopePoint ep = envelope_eval(sv, ph.k1, ph.k2, ph.g2);
    CatalogResult r;
    r.label = regime_structure(ep.regime);
    r.index = catalog_index(r.label);
    r.m = ep.m;
    r.energy = 0.5 * ep.kappa_eff * sv * sv;
    r.cost = detail::cost_of(ph, ep.m);
    r.value = ep.value;
    r.diag = {ep.kappa_eff, ep.kappa_eff, ep.kappa_eff};  // isotropic assemblage
    r.angle = 0.0;
    lc.result = r;
    lc.fast_path = true;
    return lc;
  }
  CatalogOptions o;
  o.seed = p.seed;
  o.allow_negative_det = true;
  o.face_escape = false;  // its extra branch decisions split mirrored elements on rounding-level ties
  o.restarts = 0;  // lattice seeds alone suffice at the element level
  lc.result = best_in_catalog(ph, s, o, full_search ? nullptr : warm);
  return lc;
}

inline double design_objective(double compliance, const DesignField& d, const CatalogPhases& ph, double area) {
  double cost = 0.0;
  for (const auto& m : d.m) cost += detail::cost_of(ph, m);
  return 0.5 * compliance + area * cost;
}

inline DesignField uniform_design(const DesignProblem& p, const Fractions& m, const std::string& label, double kappa) {
  DesignField d;
  d.nx = p.nx;
  d.ny = p.ny;
  const std::size_t n = std::size_t(p.nx) * p.ny;
  const Mat3 s = detail::floored(ComplianceMap::isotropic(kappa), p.ersatz / p.phases.k1);
  d.m.assign(n, m);
  d.label.assign(n, label);
  d.compliance.assign(n, s);
  return d;
}

// Objective of a fixed design (one elasticity solve).
inline double evaluate_design(const DesignProblem& p, const DesignField& d) {
  p.validate();
  detail::CantileverSolver solver(p);
  const auto sol = solver.solve(d.compliance);
  return design_objective(sol.compliance, d, p.phases, solver.element_area());
}

struct Baselines {
  double kappa1, kappa2, half;
};

// Constant designs: all kappa1, all kappa2, and the isotropic 50/50 kappa1/kappa2 composite at
// the Hashin-Shtrikman compliance.
inline Baselines constant_baselines(const DesignProblem& p) {
  const auto& ph = p.phases;
  Baselines b{};
  b.kappa1 = evaluate_design(p, uniform_design(p, {1, 0, 0}, "kappa1", ph.k1));
  if (ph.has_k2()) {
    b.kappa2 = evaluate_design(p, uniform_design(p, {0, 1, 0}, "kappa2", ph.k2));
    const double khs = hs_bound(PhaseSet::of({ph.k1, ph.k2}, {0.5, 0.5}));
    b.half = evaluate_design(p, uniform_design(p, {0.5, 0.5, 0}, "L(12,1)", khs));
  } else {
    b.kappa2 = b.half = kInf;
  }
  return b;
}

inline DesignResult solve_design(const DesignProblem& p) {
  p.validate();
  const auto& ph = p.phases;
  const std::size_t n = std::size_t(p.nx) * p.ny;
  const double floor_stiff = p.ersatz / ph.k1;
  detail::CantileverSolver solver(p);
  const double area = solver.element_area();

  DesignResult res;
  DesignField cur = uniform_design(p, {1, 0, 0}, "kappa1", ph.k1);
  auto sol = solver.solve(cur.compliance);
  double j_cur = design_objective(sol.compliance, cur, ph, area);
  res.history.push_back(j_cur);

  std::vector<std::vector<Params>> warm(n, std::vector<Params>(catalog().size(), Params{0.5, 0.5, 0.5, 0.5}));
  std::vector<char> seeded(n, 0);
  std::vector<detail::Candidate> cand(n);

  for (int it = 0; it < p.max_iter; ++it) {
    parallel_for(n, p.threads, [&](std::size_t e) {
      const StressTensor& s = sol.stress[e];
      const LocalChoice lc = local_choice(p, s, &warm[e], !(seeded[e] && p.warm_start));
      const CatalogResult& r = lc.result;
      if (!lc.fast_path && r.index >= 0) {
        warm[e][r.index] = r.params;
        seeded[e] = 1;
      }
      detail::Candidate c{r.m, r.label, detail::floored(r.map(), floor_stiff), r.value};
      // Keep the current design when the candidate is no better at this stress.
      const double current = 0.5 * to_mandel(s).dot(cur.compliance[e] * to_mandel(s)) + detail::cost_of(ph, cur.m[e]);
      const double cand_floored = 0.5 * to_mandel(s).dot(c.compliance * to_mandel(s)) + detail::cost_of(ph, c.m);
      if (!(cand_floored <= current)) c = {cur.m[e], cur.label[e], cur.compliance[e], current};
      cand[e] = std::move(c);
    });

    bool accepted = false;
    double w = p.omega;
    for (int halving = 0; halving < 8 && !accepted; ++halving, w *= 0.5) {
      DesignField trial = cur;
      for (std::size_t e = 0; e < n; ++e) {
        trial.compliance[e] = (1.0 - w) * cur.compliance[e] + w * cand[e].compliance;
        for (int k = 0; k < 3; ++k) trial.m[e][k] = (1.0 - w) * cur.m[e][k] + w * cand[e].m[k];
        trial.label[e] = cand[e].label;
      }
      auto tsol = solver.solve(trial.compliance);
      const double j_try = design_objective(tsol.compliance, trial, ph, area);
      if (j_try <= j_cur) {
        const double change = (j_cur - j_try) / std::max(std::abs(j_cur), 1e-300);
        cur = std::move(trial);
        sol = std::move(tsol);
        j_cur = j_try;
        res.history.push_back(j_cur);
        res.omega.push_back(w);
        accepted = true;
        if (change < p.tol && halving == 0) res.converged = true;
      }
    }
    if (!accepted) {
      res.converged = true;  // no damped step decreases the objective
      break;
    }
    if (res.converged) break;
  }
  if (!res.converged) res.warning = "iteration limit reached before the relative change fell below tolerance";
  res.design = std::move(cur);
  return res;
}

// Mode filter on labels; display only.
inline std::vector<std::string> smooth_labels(const DesignField& d) {
  std::vector<std::string> out(d.label.size());
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      std::map<std::string, int> count;
      for (int dj = -1; dj <= 1; ++dj)
        for (int di = -1; di <= 1; ++di) {
          const int a = i + di, b = j + dj;
          if (a >= 0 && a < d.nx && b >= 0 && b < d.ny) ++count[d.label[d.index(a, b)]];
        }
      const std::string& self = d.label[d.index(i, j)];
      std::string best = self;
      int best_n = count[self];
      for (const auto& [lab, c] : count)
        if (c > best_n) {
          best = lab;
          best_n = c;
        }
      out[d.index(i, j)] = best;
    }
  return out;
}

// Image row 0 is the top of the domain.
inline io::RgbImage design_image(const DesignField& d, bool smooth = true) {
  const auto labels = smooth ? smooth_labels(d) : d.label;
  io::RgbImage img{d.nx, d.ny, {}};
  img.pixels.resize(std::size_t(d.nx) * d.ny);
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) img.pixels[std::size_t(d.ny - 1 - j) * d.nx + i] = label_color(labels[d.index(i, j)]);
  return img;
}

inline io::CsvWriter design_csv(const DesignField& d) {
  io::CsvWriter w({"ix", "iy", "m1", "m2", "m3", "label"});
  for (int j = 0; j < d.ny; ++j)
    for (int i = 0; i < d.nx; ++i) {
      const auto& m = d.m[d.index(i, j)];
      w.row({std::to_string(i), std::to_string(j), io::num(m[0]), io::num(m[1]), io::num(m[2]), d.label[d.index(i, j)]});
    }
  return w;
}

inline io::CsvWriter history_csv(const DesignResult& r) {
  io::CsvWriter w({"iteration", "objective", "omega"});
  for (std::size_t k = 0; k < r.history.size(); ++k)
    w.row({std::to_string(k), io::num(r.history[k]), k == 0 ? "" : io::num(r.omega[k - 1])});
  return w;
}

inline void export_design(const DesignField& d, const std::string& prefix) {
  io::save_ppm(design_image(d), prefix + ".ppm");
  design_csv(d).save(prefix + ".csv");
}

}  // namespace tricomp
