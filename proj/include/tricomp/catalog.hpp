#pragma once

// Catalog of hierarchical laminates built from kappa1 (phase 0), kappa2 (phase 1) and void
// (phase 2). With zero-Poisson phases every catalog member is orthotropic in its own frame,
// so it is evaluated through three diagonal compliances (x, y, Mandel shear) that may be
// infinite. Layers with normal x average x and shear arithmetically and y harmonically.

#include "compliance_map.hpp"
#include "errors.hpp"
#include "laminate.hpp"
#include "optimize.hpp"
#include "parallel.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <optional>
#include <random>
#include <string>
#include <vector>

namespace tricomp {

struct Diag {
  double x, y, g;
};

namespace detail {

inline double arith(double a, double b, double f) {
  if (f >= 1.0) return a;
  if (f <= 0.0) return b;
  return f * a + (1.0 - f) * b;
}

inline double harm(double a, double b, double f) {
  if (f >= 1.0) return a;
  if (f <= 0.0) return b;
  const double inv = f / a + (1.0 - f) / b;
  return inv == 0.0 ? kInf : 1.0 / inv;
}

inline Diag lam_x(const Diag& a, const Diag& b, double f) {
  return {arith(a.x, b.x, f), harm(a.y, b.y, f), arith(a.g, b.g, f)};
}
inline Diag lam_y(const Diag& a, const Diag& b, double f) {
  return {harm(a.x, b.x, f), arith(a.y, b.y, f), arith(a.g, b.g, f)};
}

inline double sq_term(double d, double v) { return v == 0.0 ? 0.0 : d * v * v; }

}  // namespace detail

struct CatalogPhases {
  double k1 = 1.0;
  double k2 = 2.0;  // NaN disables every structure that uses the intermediate phase
  double g1 = 1.0;
  double g2 = 0.6;
  double g3 = 0.0;

  bool has_k2() const { return !std::isnan(k2); }
  std::vector<Phase> phases() const { return {{k1, g1}, {has_k2() ? k2 : 2.0 * k1, g2}, {kInf, g3}}; }
};

using Params = std::array<double, 4>;
using Fractions = std::array<double, 3>;

struct StructureTemplate {
  const char* label;
  int nparams;
  bool uses_k2;
  int free_at_fixed_m;  // free parameters once the fractions are prescribed
  Fractions (*fractions)(const Params&);
  Diag (*diag)(const Params&, const Diag& k1, const Diag& k2);
  NodePtr (*node)(const Params&, double angle);
  // Maps free coordinates in [0,1]^k to parameters with the prescribed fractions.
  std::optional<Params> (*complete)(const std::array<double, 2>& u, const Fractions& m);
};

namespace detail {

constexpr double kHalfPi = std::numbers::pi / 2;
constexpr double kZeroTol = 1e-12;
inline const Diag kVoid{kInf, kInf, kInf};

inline NodePtr L(int p) { return LaminateNode::leaf(p); }
inline NodePtr lamx(NodePtr a, NodePtr b, double f, double th) { return LaminateNode::lam(a, b, f, th); }
inline NodePtr lamy(NodePtr a, NodePtr b, double f, double th) { return LaminateNode::lam(a, b, f, th + kHalfPi); }

inline double safe_div(double a, double b) { return b <= 0.0 ? 1.0 : std::clamp(a / b, 0.0, 1.0); }
inline double lerp(double lo, double hi, double u) { return lo + u * (hi - lo); }

inline const std::vector<StructureTemplate>& catalog_templates() {
  static const std::vector<StructureTemplate> t = {
      {"kappa1", 0, false, 0, [](const Params&) { return Fractions{1, 0, 0}; },
       [](const Params&, const Diag& a, const Diag&) { return a; },
       [](const Params&, double) { return L(0); },
       [](const std::array<double, 2>&, const Fractions& m) -> std::optional<Params> {
         if (m[0] < 1.0 - kZeroTol) return std::nullopt;
         return Params{};
       }},
      {"kappa2", 0, true, 0, [](const Params&) { return Fractions{0, 1, 0}; },
       [](const Params&, const Diag&, const Diag& b) { return b; },
       [](const Params&, double) { return L(1); },
       [](const std::array<double, 2>&, const Fractions& m) -> std::optional<Params> {
         if (m[1] < 1.0 - kZeroTol) return std::nullopt;
         return Params{};
       }},
      {"L(1,2)", 1, true, 0, [](const Params& p) { return Fractions{p[0], 1 - p[0], 0}; },
       [](const Params& p, const Diag& a, const Diag& b) { return lam_x(a, b, p[0]); },
       [](const Params& p, double th) { return lamx(L(0), L(1), p[0], th); },
       [](const std::array<double, 2>&, const Fractions& m) -> std::optional<Params> {
         if (m[2] > kZeroTol) return std::nullopt;
         return Params{m[0]};
       }},
      {"L(12,1)", 2, true, 1,
       [](const Params& p) { return Fractions{p[1] * p[0] + 1 - p[1], p[1] * (1 - p[0]), 0}; },
       [](const Params& p, const Diag& a, const Diag& b) { return lam_x(lam_y(a, b, p[0]), a, p[1]); },
       [](const Params& p, double th) { return lamx(lamy(L(0), L(1), p[0], th), L(0), p[1], th); },
       [](const std::array<double, 2>& u, const Fractions& m) -> std::optional<Params> {
         if (m[2] > kZeroTol) return std::nullopt;
         const double fb = lerp(m[1], 1.0, u[0]);
         return Params{1.0 - safe_div(m[1], fb), fb};
       }},
      {"L(1,3)", 1, false, 0, [](const Params& p) { return Fractions{p[0], 0, 1 - p[0]}; },
       [](const Params& p, const Diag& a, const Diag&) { return lam_y(a, kVoid, p[0]); },
       [](const Params& p, double th) { return lamy(L(0), L(2), p[0], th); },
       [](const std::array<double, 2>&, const Fractions& m) -> std::optional<Params> {
         if (m[1] > kZeroTol) return std::nullopt;
         return Params{m[0]};
       }},
      {"L(13,2)", 2, true, 0,
       [](const Params& p) { return Fractions{p[0] * p[1], 1 - p[1], p[1] * (1 - p[0])}; },
       [](const Params& p, const Diag& a, const Diag& b) { return lam_x(lam_y(a, kVoid, p[0]), b, p[1]); },
       [](const Params& p, double th) { return lamx(lamy(L(0), L(2), p[0], th), L(1), p[1], th); },
       [](const std::array<double, 2>&, const Fractions& m) -> std::optional<Params> {
         const double fb = 1.0 - m[1];
         return Params{safe_div(m[0], fb), fb};
       }},
      {"L(13,2,13)", 4, true, 2,
       [](const Params& p) {
         const double m1 = p[2] * p[0] * p[1] + (1 - p[2]) * p[3], m2 = p[2] * (1 - p[1]);
         return Fractions{m1, m2, 1 - m1 - m2};
       },
       [](const Params& p, const Diag& a, const Diag& b) {
         const Diag inner = lam_x(lam_y(a, kVoid, p[0]), b, p[1]);
         return lam_y(inner, lam_x(a, kVoid, p[3]), p[2]);
       },
       [](const Params& p, double th) {
         return lamy(lamx(lamy(L(0), L(2), p[0], th), L(1), p[1], th), lamx(L(0), L(2), p[3], th), p[2], th);
       },
       [](const std::array<double, 2>& u, const Fractions& m) -> std::optional<Params> {
         const double fc = lerp(m[1], 1.0, u[0]);
         const double fb = 1.0 - safe_div(m[1], fc);
         const double pw = fc * fb, qw = 1.0 - fc;
         const double lo = pw > 0.0 ? std::max(0.0, (m[0] - qw) / pw) : 0.0;
         const double hi = pw > 0.0 ? std::min(1.0, m[0] / pw) : 0.0;
         const double fa = lerp(lo, hi, u[1]);
         const double fd = qw > 0.0 ? std::clamp((m[0] - pw * fa) / qw, 0.0, 1.0) : 0.0;
         return Params{fa, fb, fc, fd};
       }},
      {"L(13,2,1)", 3, true, 1,
       [](const Params& p) {
         const double m1 = p[2] * p[0] * p[1] + 1 - p[2], m2 = p[2] * (1 - p[1]);
         return Fractions{m1, m2, 1 - m1 - m2};
       },
       [](const Params& p, const Diag& a, const Diag& b) {
         return lam_y(lam_x(lam_y(a, kVoid, p[0]), b, p[1]), a, p[2]);
       },
       [](const Params& p, double th) {
         return lamy(lamx(lamy(L(0), L(2), p[0], th), L(1), p[1], th), L(0), p[2], th);
       },
       [](const std::array<double, 2>& u, const Fractions& m) -> std::optional<Params> {
         const double fc = lerp(m[1] + m[2], 1.0, u[0]);
         const double fb = 1.0 - safe_div(m[1], fc);
         const double fa = 1.0 - safe_div(m[2], fc * fb);
         return Params{fa, fb, fc};
       }},
      {"L(13,2,23)", 4, true, 2,
       [](const Params& p) {
         const double m1 = p[2] * p[0] * p[1], m2 = p[2] * (1 - p[1]) + (1 - p[2]) * p[3];
         return Fractions{m1, m2, 1 - m1 - m2};
       },
       [](const Params& p, const Diag& a, const Diag& b) {
         const Diag inner = lam_x(lam_y(a, kVoid, p[0]), b, p[1]);
         return lam_y(inner, lam_x(b, kVoid, p[3]), p[2]);
       },
       [](const Params& p, double th) {
         return lamy(lamx(lamy(L(0), L(2), p[0], th), L(1), p[1], th), lamx(L(1), L(2), p[3], th), p[2], th);
       },
       [](const std::array<double, 2>& u, const Fractions& m) -> std::optional<Params> {
         const double fc = lerp(m[0], 1.0, u[0]);
         if (fc <= 0.0) return std::nullopt;
         const double lo = std::max(m[0] / fc, 1.0 - m[1] / fc);
         const double hi = std::min(1.0, (1.0 - m[1]) / fc);
         if (lo > hi + 1e-12) return std::nullopt;
         const double fb = std::clamp(lerp(lo, std::max(lo, hi), u[1]), 0.0, 1.0);
         const double fa = safe_div(m[0], fc * fb);
         const double fd = fc < 1.0 ? std::clamp((m[1] - fc * (1.0 - fb)) / (1.0 - fc), 0.0, 1.0) : 0.0;
         return Params{fa, fb, fc, fd};
       }},
      {"L(13,1)", 2, false, 1,
       [](const Params& p) { return Fractions{p[1] * p[0] + 1 - p[1], 0, p[1] * (1 - p[0])}; },
       [](const Params& p, const Diag& a, const Diag&) { return lam_x(lam_y(a, kVoid, p[0]), a, p[1]); },
       [](const Params& p, double th) { return lamx(lamy(L(0), L(2), p[0], th), L(0), p[1], th); },
       [](const std::array<double, 2>& u, const Fractions& m) -> std::optional<Params> {
         if (m[1] > kZeroTol) return std::nullopt;
         const double fb = lerp(m[2], 1.0, u[0]);
         return Params{1.0 - safe_div(m[2], fb), fb};
       }},
  };
  return t;
}

}  // namespace detail

inline const std::vector<StructureTemplate>& catalog() { return detail::catalog_templates(); }

inline int catalog_index(const std::string& label) {
  const auto& c = catalog();
  for (std::size_t i = 0; i < c.size(); ++i)
    if (label == c[i].label) return int(i);
  return -1;
}

struct AlignedEnergy {
  double energy;
  double phi;  // angle from the structure x axis to the lambda2 direction
};

// Minimum over in-plane orientation of the energy of a diagonal map under principal stresses.
// With c = cos(2 phi) the energy is a quadratic in c on [-1, 1]. Maps with an infinite entry
// are only tried aligned (c = +-1), where the infinite direction may be unloaded.
inline AlignedEnergy oriented_energy(const Diag& d, double l1, double l2) {
  const double lbar = 0.5 * (l1 + l2), del = 0.5 * (l2 - l1);
  auto at = [&](double c) {
    const double sx = lbar + del * c, sy = lbar - del * c, sxy2 = del * del * (1.0 - c * c);
    return 0.5 * (detail::sq_term(d.x, sx) + detail::sq_term(d.y, sy) + detail::sq_term(d.g, std::sqrt(2.0 * sxy2)));
  };
  const double e1 = at(1.0), em = at(-1.0);
  AlignedEnergy best = e1 <= em ? AlignedEnergy{e1, 0.0} : AlignedEnergy{em, detail::kHalfPi};
  if (std::isfinite(d.x) && std::isfinite(d.y) && std::isfinite(d.g) && del != 0.0) {
    // E(c) = A c^2 + B c + C
    const double a = 0.5 * del * del * (d.x + d.y - 2.0 * d.g);
    const double b = lbar * del * (d.x - d.y);
    if (a > 0.0) {
      const double c = -b / (2.0 * a);
      if (c > -1.0 && c < 1.0) {
        const double e = at(c);
        if (e < best.energy) best = {e, 0.5 * std::acos(c)};
      }
    }
  }
  return best;
}

struct CatalogOptions {
  int sweeps = 5;
  int restarts = 3;
  int grid_seeds = 3;  // lattice points used as extra starting points
  double tol = 1e-8;
  bool polish = true;  // Nelder-Mead after coordinate descent
  unsigned long long seed = 0;
  unsigned threads = 1;
  bool allow_negative_det = false;  // the structures stay admissible; only the lower bound needs det >= 0
  bool face_escape = true;          // restart from inside faces the best point landed on
};

struct CatalogResult {
  double value = kInf;  // energy + cost
  double energy = kInf;
  double cost = 0.0;
  int index = -1;  // into catalog(), -1 for void
  std::string label = "void";
  Params params{};
  double angle = 0.0;  // structure x axis in the lab frame
  Fractions m{0, 0, 1};
  Diag diag{kInf, kInf, kInf};

  ComplianceMap map() const {
    if (index < 0) return ComplianceMap::isotropic(kInf);
    return ComplianceMap::orthotropic(diag.x, diag.y, diag.g, angle);
  }
  NodePtr node() const {
    if (index < 0) return LaminateNode::leaf(2);
    return catalog()[index].node(params, angle);
  }
};

namespace detail {

struct StructureObjective {
  const StructureTemplate* t;
  Diag k1, k2;
  double l1, l2;
  std::array<double, 3> gam;
  bool with_cost = true;

  double cost(const Fractions& m) const { return gam[0] * m[0] + gam[1] * m[1] + gam[2] * m[2]; }

  double operator()(const Params& p) const {
    const double e = oriented_energy(t->diag(p, k1, k2), l1, l2).energy;
    return with_cost ? e + cost(t->fractions(p)) : e;
  }
};

// Energies are even in the stress; a fixed sign keeps the search identical for s and -s.
inline StressTensor canonical_sign(const StressTensor& s) { return s.trace() < 0.0 ? -1.0 * s : s; }

inline Params to_params(const Eigen::VectorXd& x) {
  Params p{};
  for (Eigen::Index i = 0; i < x.size(); ++i) p[i] = std::clamp(x(i), 0.0, 1.0);
  return p;
}

inline CatalogResult finish(const StructureObjective& obj, int index, const Params& p, double angle_l2) {
  CatalogResult r;
  r.index = index;
  r.label = obj.t->label;
  r.params = p;
  r.diag = obj.t->diag(p, obj.k1, obj.k2);
  r.m = obj.t->fractions(p);
  const auto oe = oriented_energy(r.diag, obj.l1, obj.l2);
  r.energy = oe.energy;
  r.cost = obj.cost(r.m);
  r.value = r.energy + r.cost;
  r.angle = angle_l2 - oe.phi;
  return r;
}

}  // namespace detail

// Optimizes the free parameters of one structure for load sigma0 (energy + cost).
// `warm` seeds the search; with restarts = 0 and a warm start only one descent runs.
inline CatalogResult optimize_structure(int index, const CatalogPhases& ph, const StressTensor& s0,
                                        const CatalogOptions& o = {}, const Params* warm = nullptr) {
  const auto& t = catalog()[index];
  const auto e = eigen(detail::canonical_sign(s0));
  detail::StructureObjective obj{&t, {ph.k1, ph.k1, ph.k1}, {ph.k2, ph.k2, ph.k2}, e.lambda1, e.lambda2,
                                 {ph.g1, ph.g2, ph.g3}};
  if (t.nparams == 0) return detail::finish(obj, index, Params{}, e.angle);
  auto f = [&](const Eigen::VectorXd& x) { return obj(detail::to_params(x)); };
  std::vector<Eigen::VectorXd> starts;
  if (warm) {
    Eigen::VectorXd w(t.nparams);
    for (int i = 0; i < t.nparams; ++i) w(i) = (*warm)[i];
    starts.push_back(w);
  }
  if (!warm || o.restarts > 0) {
    // Coarse lattice scan; the best few lattice points seed the local descents.
    const int g = t.nparams <= 2 ? 11 : (t.nparams == 3 ? 8 : 6);
    int total = 1;
    for (int i = 0; i < t.nparams; ++i) total *= g;
    std::vector<std::pair<double, Eigen::VectorXd>> scan;
    scan.reserve(total);
    Eigen::VectorXd x(t.nparams);
    for (int id = 0; id < total; ++id) {
      int r = id;
      for (int i = 0; i < t.nparams; ++i, r /= g) x(i) = (r % g + 0.5) / g;
      scan.emplace_back(f(x), x);
    }
    const int keep = std::min<int>(o.grid_seeds, total);
    std::partial_sort(scan.begin(), scan.begin() + keep, scan.end(),
                      [](const auto& a, const auto& b) { return a.first < b.first; });
    for (int i = 0; i < keep; ++i) starts.push_back(scan[i].second);
  }
  std::mt19937_64 rng(o.seed * 7919ULL + index);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int r = 0; r < o.restarts; ++r) {
    Eigen::VectorXd x(t.nparams);
    for (int i = 0; i < t.nparams; ++i) x(i) = u(rng);
    starts.push_back(x);
  }
  Eigen::VectorXd best;
  double fbest = kInf;
  for (const auto& x0 : starts) {
    auto r = opt::coordinate_descent(f, x0, o.sweeps, o.tol, 1e-15);
    if (o.polish && std::isfinite(r.f)) {
      auto nm = opt::nelder_mead_box(f, r.x, 0.02);
      if (nm.f < r.f) r = {nm.x, nm.f};
      auto again = opt::coordinate_descent(f, r.x, 2, o.tol, 1e-15);
      if (again.f < r.f) r = again;
    }
    if (r.f < fbest || best.size() == 0) {
      fbest = r.f;
      best = r.x;
    }
  }
  // A parameter on its bound can make others irrelevant (a flat face), which traps coordinate
  // descent on a lower-rank sub-structure. Restart from just inside each such face.
  if (o.polish && o.face_escape && std::isfinite(fbest))
    for (int i = 0; i < t.nparams; ++i) {
      if (best(i) > 1e-9 && best(i) < 1.0 - 1e-9) continue;
      for (double inset : {0.02, 0.1}) {
        Eigen::VectorXd x0 = best;
        x0(i) = best(i) < 0.5 ? inset : 1.0 - inset;
        for (int j = 0; j < t.nparams; ++j)
          if (j != i && (best(j) <= 1e-9 || best(j) >= 1.0 - 1e-9)) x0(j) = 0.5;
        auto r = opt::coordinate_descent(f, x0, o.sweeps, o.tol, 1e-15);
        auto nm = opt::nelder_mead_box(f, r.x, 0.02);
        if (nm.f < r.f) r = {nm.x, nm.f};
        if (r.f < fbest - 1e-9 * std::abs(fbest)) {  // ties keep the face point
          fbest = r.f;
          best = r.x;
        }
      }
    }
  return detail::finish(obj, index, detail::to_params(best), e.angle);
}

// Minimum energy (no cost) of one structure at prescribed fractions, or nullopt if the structure
// cannot realize them.
inline std::optional<CatalogResult> structure_at_fractions(int index, const CatalogPhases& ph, const StressTensor& s0,
                                                           const Fractions& m) {
  const auto& t = catalog()[index];
  if (t.uses_k2 && !ph.has_k2()) return std::nullopt;
  const auto e = eigen(detail::canonical_sign(s0));
  detail::StructureObjective obj{&t, {ph.k1, ph.k1, ph.k1}, {ph.k2, ph.k2, ph.k2}, e.lambda1, e.lambda2,
                                 {ph.g1, ph.g2, ph.g3}, false};
  auto feasible = [&](const Params& p) {
    const auto fm = t.fractions(p);
    for (int i = 0; i < 3; ++i)
      if (std::abs(fm[i] - m[i]) > 1e-9) return false;
    return true;
  };
  auto value = [&](const std::array<double, 2>& u) {
    const auto p = t.complete(u, m);
    if (!p || !feasible(*p)) return kInf;
    return obj(*p);
  };
  std::array<double, 2> best_u{0.5, 0.5};
  double best = kInf;
  const int k = t.free_at_fixed_m;
  const int n = k == 0 ? 1 : (k == 1 ? 401 : 61);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < (k == 2 ? n : 1); ++j) {
      std::array<double, 2> u{n > 1 ? double(i) / (n - 1) : 0.5, k == 2 ? double(j) / (n - 1) : 0.5};
      const double v = value(u);
      if (v < best) {
        best = v;
        best_u = u;
      }
    }
  if (!std::isfinite(best)) return std::nullopt;
  if (k > 0) {
    auto fx = [&](const Eigen::VectorXd& x) {
      std::array<double, 2> u{std::clamp(x(0), 0.0, 1.0), k == 2 ? std::clamp(x(1), 0.0, 1.0) : 0.5};
      return value(u);
    };
    Eigen::VectorXd x0(k);
    for (int i = 0; i < k; ++i) x0(i) = best_u[i];
    auto r = opt::coordinate_descent(fx, x0, 50, 1e-12, 1e-16);
    auto nm = opt::nelder_mead_box(fx, r.x, 0.5 / n, 1e-16, 20000);
    if (nm.f < r.f) r = {nm.x, nm.f};
    auto r2 = opt::coordinate_descent(fx, r.x, 50, 1e-12, 1e-16);
    if (r2.f < r.f) r = r2;
    for (int i = 0; i < k; ++i) best_u[i] = std::clamp(r.x(i), 0.0, 1.0);
  }
  return detail::finish(obj, index, *t.complete(best_u, m), e.angle);
}

// Catalog winner for load sigma0 with costs; ties resolve toward the earlier catalog entry.
inline CatalogResult best_in_catalog(const CatalogPhases& ph, const StressTensor& s0, const CatalogOptions& o = {},
                                     const std::vector<Params>* warm = nullptr) {
  if (!o.allow_negative_det && s0.det() < -1e-14 * s0.frob2()) throw InputError("anisotropic negative-det loading unsupported");
  CatalogResult best;
  if (s0.frob2() == 0.0) {
    best.value = ph.g3;
    best.energy = 0.0;
    best.cost = ph.g3;
    return best;
  }
  const auto& cat = catalog();
  std::vector<CatalogResult> all(cat.size());
  parallel_for(cat.size(), o.threads, [&](std::size_t i) {
    if (cat[i].uses_k2 && !ph.has_k2()) return;
    all[i] = optimize_structure(int(i), ph, s0, o, warm ? &(*warm)[i] : nullptr);
  });
  for (const auto& r : all)
    if (r.index >= 0 && r.value < best.value - 1e-12 * std::abs(r.value)) best = r;
  return best;
}

}  // namespace tricomp
