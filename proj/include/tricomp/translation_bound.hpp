#pragma once

#include "bounds.hpp"
#include "optimize.hpp"
#include "parallel.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <random>
#include <string>
#include <vector>

namespace tricomp {

struct TranslationBoundOptions {
  int n_supports = 4;
  int starts = 32;
  double penalty = 1e6;
  double tol = 1e-8;
  bool det_constraint = true;   // translated wells are +inf off the det >= 0 cone
  bool mean_field = true;       // det(rho_1 - sigma0) <= 0 on the stiffest phase
  double t_cap = kInf;          // outer search on [0, min(t_cap, 4 * max finite kappa)]
  unsigned long long seed = 0;
  unsigned threads = 1;
};

struct TranslationBoundResult {
  double value = 0.0;
  double t_opt = 0.0;
  std::vector<SupportSet> supports;
  bool det_active = false;  // some stiffest-phase support sits on det = 0
  bool mean_field_active = false;
  std::string region;  // best-effort A-E label
};

namespace detail {

struct InnerProblem {
  std::vector<double> kappa;  // finite phases carrying supports
  std::vector<double> mass;   // their fractions
  std::vector<std::size_t> owner;
  int n = 1;
  StressTensor s0;  // unit-normalized load
  double t = 0.0;
  bool det_c = true;
  bool mf_c = true;
  bool has_first = false;  // whether entry 0 is the stiffest phase of the set

  Eigen::Index dim() const { return Eigen::Index(kappa.size()) * n * 4; }

  // Layout per phase: n logits followed by n triples (xx, yy, xy).
  double eval(const Eigen::VectorXd& x, Eigen::VectorXd& grad, double pen) const {
    grad.setZero(x.size());
    const std::size_t np = kappa.size();
    double e = -t * s0.det();
    double ax = 0.0, ay = 0.0, axy = 0.0;
    std::vector<double> w(np * n), gw(np * n);
    for (std::size_t i = 0; i < np; ++i) {
      const Eigen::Index base = Eigen::Index(i) * n * 4;
      double zmax = -kInf;
      for (int k = 0; k < n; ++k) zmax = std::max(zmax, x(base + k));
      double zs = 0.0;
      for (int k = 0; k < n; ++k) zs += std::exp(x(base + k) - zmax);
      for (int k = 0; k < n; ++k) w[i * n + k] = mass[i] * std::exp(x(base + k) - zmax) / zs;
      for (int k = 0; k < n; ++k) {
        const Eigen::Index o = base + n + 3 * k;
        const double xx = x(o), yy = x(o + 1), xy = x(o + 2);
        const double wk = w[i * n + k];
        ax += wk * xx;
        ay += wk * yy;
        axy += wk * xy;
      }
    }
    const double dx = ax - s0.sxx, dy = ay - s0.syy, dxy = axy - s0.sxy;
    e += pen * (dx * dx + dy * dy + 2.0 * dxy * dxy);
    for (std::size_t i = 0; i < np; ++i) {
      const Eigen::Index base = Eigen::Index(i) * n * 4;
      const double kap = kappa[i];
      const bool first = has_first && i == 0;
      for (int k = 0; k < n; ++k) {
        const Eigen::Index o = base + n + 3 * k;
        const double xx = x(o), yy = x(o + 1), xy = x(o + 2);
        const double wk = w[i * n + k];
        const double d = xx * yy - xy * xy;
        double g = 0.5 * kap * (xx * xx + yy * yy + 2.0 * xy * xy) + t * d;
        double gx = kap * xx + t * yy, gy = kap * yy + t * xx, gxy = 2.0 * kap * xy - 2.0 * t * xy;
        if (det_c && d < 0.0) {
          g += pen * d * d;
          gx += 2.0 * pen * d * yy;
          gy += 2.0 * pen * d * xx;
          gxy += 2.0 * pen * d * (-2.0 * xy);
        }
        if (first && mf_c) {
          const double ux = xx - s0.sxx, uy = yy - s0.syy, uxy = xy - s0.sxy;
          const double dm = ux * uy - uxy * uxy;
          if (dm > 0.0) {
            g += pen * dm * dm;
            gx += 2.0 * pen * dm * uy;
            gy += 2.0 * pen * dm * ux;
            gxy += 2.0 * pen * dm * (-2.0 * uxy);
          }
        }
        e += wk * g;
        grad(o) = wk * (gx + 2.0 * pen * dx);
        grad(o + 1) = wk * (gy + 2.0 * pen * dy);
        grad(o + 2) = wk * (gxy + 4.0 * pen * dxy);
        gw[i * n + k] = g + 2.0 * pen * (dx * xx + dy * yy + 2.0 * dxy * xy);
      }
      double avg = 0.0;
      for (int k = 0; k < n; ++k) avg += w[i * n + k] * gw[i * n + k];
      avg /= mass[i];
      for (int k = 0; k < n; ++k) grad(base + k) = w[i * n + k] * (gw[i * n + k] - avg);
    }
    return e;
  }

  struct Violation {
    double mean, det, mf;
  };

  Violation violation(const Eigen::VectorXd& x) const {
    Violation v{0, 0, 0};
    double ax = 0, ay = 0, axy = 0;
    for (std::size_t i = 0; i < kappa.size(); ++i) {
      const auto ws = weights(x, i);
      for (int k = 0; k < n; ++k) {
        const StressTensor r = point(x, i, k);
        ax += ws[k] * r.sxx;
        ay += ws[k] * r.syy;
        axy += ws[k] * r.sxy;
        if (ws[k] < 1e-9) continue;
        if (det_c) v.det = std::max(v.det, -r.det());
        if (mf_c && has_first && i == 0) v.mf = std::max(v.mf, rank_one_gap(r, s0));
      }
    }
    v.mean = std::sqrt((ax - s0.sxx) * (ax - s0.sxx) + (ay - s0.syy) * (ay - s0.syy) +
                       2 * (axy - s0.sxy) * (axy - s0.sxy));
    return v;
  }

  std::vector<double> weights(const Eigen::VectorXd& x, std::size_t i) const {
    const Eigen::Index base = Eigen::Index(i) * n * 4;
    std::vector<double> w(n);
    double zmax = -kInf, zs = 0.0;
    for (int k = 0; k < n; ++k) zmax = std::max(zmax, x(base + k));
    for (int k = 0; k < n; ++k) zs += std::exp(x(base + k) - zmax);
    for (int k = 0; k < n; ++k) w[k] = mass[i] * std::exp(x(base + k) - zmax) / zs;
    return w;
  }

  StressTensor point(const Eigen::VectorXd& x, std::size_t i, int k) const {
    const Eigen::Index o = Eigen::Index(i) * n * 4 + n + 3 * k;
    return {x(o), x(o + 1), x(o + 2)};
  }
};

struct InnerSolution {
  double value = kInf;
  Eigen::VectorXd x;
};

inline InnerSolution solve_inner_from(const InnerProblem& p, Eigen::VectorXd x, double pen_final, double tol) {
  auto run = [&](double pen) {
    auto fg = [&](const Eigen::VectorXd& v, Eigen::VectorXd& g) { return p.eval(v, g, pen); };
    auto r = opt::bfgs(fg, x, tol, 3000);
    x = r.x;
    return r.f;
  };
  double f = kInf;
  for (double pen = 1e2; pen < pen_final; pen *= 100.0) f = run(pen);
  double pen = pen_final;
  f = run(pen);
  for (int restart = 0; restart < 3; ++restart) {
    const auto v = p.violation(x);
    if (v.mean < 1e-6 && v.det < 1e-6 && v.mf < 1e-6) break;
    pen *= 10.0;
    f = run(pen);
  }
  return {f, x};
}

inline InnerSolution solve_inner(const InnerProblem& p, const TranslationBoundOptions& o) {
  const int starts = std::max(1, o.starts);
  std::vector<InnerSolution> sols(starts);
  parallel_for(std::size_t(starts), o.threads, [&](std::size_t s) {
    Eigen::VectorXd x = Eigen::VectorXd::Zero(p.dim());
    std::mt19937_64 rng(o.seed * 1000003ULL + s);
    std::normal_distribution<double> nd(0.0, 1.0);
    const double spread = s == 0 ? 0.0 : std::array<double, 3>{0.5, 1.0, 2.0}[s % 3];
    for (std::size_t i = 0; i < p.kappa.size(); ++i) {
      const Eigen::Index base = Eigen::Index(i) * p.n * 4;
      for (int k = 0; k < p.n; ++k) {
        x(base + k) = s == 0 ? 0.0 : nd(rng);
        const Eigen::Index q = base + p.n + 3 * k;
        x(q) = p.s0.sxx + spread * nd(rng);
        x(q + 1) = p.s0.syy + spread * nd(rng);
        x(q + 2) = p.s0.sxy + spread * nd(rng);
      }
    }
    sols[s] = solve_inner_from(p, x, o.penalty, o.tol);
  });
  InnerSolution best;
  for (auto& s : sols)
    if (s.value < best.value) best = std::move(s);
  return best;
}

}  // namespace detail

// max_t min over supported microstructures of sum m_i V_i - t det(sigma0), searched numerically.
inline TranslationBoundResult modified_translation_bound(const PhaseSet& ps, const StressTensor& s0,
                                                         const TranslationBoundOptions& o = {}) {
  ps.validate();
  if (s0.det() < -1e-14 * s0.frob2()) throw InputError("anisotropic negative-det loading unsupported");
  if (o.n_supports < 1 || o.n_supports > 4) throw InputError("n_supports must be in [1, 4]");

  detail::InnerProblem p;
  p.n = o.n_supports;
  p.det_c = o.det_constraint;
  p.mf_c = o.mean_field;
  double kmax = 0.0;
  for (std::size_t i = 0; i < ps.size(); ++i) {
    if (ps.phases[i].is_void()) continue;
    kmax = std::max(kmax, ps.kappa(i));
    if (ps.m[i] <= 0.0) continue;
    if (i == 0) p.has_first = true;
    p.kappa.push_back(ps.kappa(i));
    p.mass.push_back(ps.m[i]);
    p.owner.push_back(i);
  }
  if (p.kappa.empty()) throw InputError("infeasible fractions: no finite phase present");

  TranslationBoundResult res;
  const double scale = s0.frob2();
  if (scale == 0.0) {
    res.region = "C";
    return res;
  }
  p.s0 = (1.0 / std::sqrt(scale)) * s0;

  detail::InnerSolution best_sol;
  double best_val = -kInf, best_t = 0.0;
  auto value_at = [&](double t) {
    p.t = t;
    auto sol = detail::solve_inner(p, o);
    if (sol.value > best_val) {
      best_val = sol.value;
      best_t = t;
      best_sol = sol;
    }
    return sol.value;
  };
  const double hi = std::min(o.t_cap, 4.0 * kmax);
  value_at(0.0);
  value_at(hi);
  opt::golden_min([&](double t) { return -value_at(t); }, 0.0, hi, 1e-7 * hi);

  res.value = best_val * scale;
  res.t_opt = best_t;
  p.t = best_t;
  const auto& x = best_sol.x;
  for (std::size_t i = 0; i < p.kappa.size(); ++i) {
    SupportSet set;
    set.owner = p.owner[i];
    const auto w = p.weights(x, i);
    for (int k = 0; k < p.n; ++k) {
      if (w[k] < 1e-9) continue;
      set.points.push_back(std::sqrt(scale) * p.point(x, i, k));
      set.weights.push_back(w[k]);
      if (p.has_first && i == 0) {
        const StressTensor r = p.point(x, i, k);
        if (std::abs(r.det()) < 1e-5) res.det_active = true;
        if (std::abs(rank_one_gap(r, p.s0)) < 1e-5) res.mean_field_active = true;
      }
    }
    res.supports.push_back(std::move(set));
  }
  for (std::size_t i = 0; i < ps.size(); ++i)
    if (ps.phases[i].is_void() && ps.m[i] > 0.0) res.supports.push_back({{StressTensor{}}, {ps.m[i]}, i});

  // Region labels follow the active-constraint narrative; diagnostic only.
  const double k1 = ps.kappa(0);
  const double k2 = ps.size() > 1 && !ps.phases[1].is_void() ? ps.kappa(1) : kInf;
  const double tt = 1e-3 * std::max(1.0, k1);
  if (std::abs(best_t - k1) < tt && !res.det_active)
    res.region = "D";
  else if (std::isfinite(k2) && std::abs(best_t - k2) < tt * k2 / k1)
    res.region = "A";
  else if (res.det_active && res.mean_field_active)
    res.region = "E";
  else if (res.det_active && best_t > k1)
    res.region = "B";
  else
    res.region = "C";
  return res;
}

}  // namespace tricomp
