#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace tricomp::opt {

struct Scalar1D {
  double x;
  double f;
};

// Golden-section minimization on [a, b]; tolerates +inf values.
template <class F>
Scalar1D golden_min(F&& f, double a, double b, double tol = 1e-8, int max_iter = 200) {
  constexpr double r = 0.6180339887498949;
  double c = b - r * (b - a), d = a + r * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < max_iter && (b - a) > tol; ++it) {
    if (fc <= fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - r * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + r * (b - a);
      fd = f(d);
    }
  }
  return fc <= fd ? Scalar1D{c, fc} : Scalar1D{d, fd};
}

// Same search, but also probes the interval ends so boundary optima are exact.
template <class F>
Scalar1D golden_min_closed(F&& f, double a, double b, double tol = 1e-8) {
  Scalar1D best = golden_min(f, a, b, tol);
  for (double x : {a, b}) {
    const double v = f(x);
    if (v < best.f) best = {x, v};
  }
  return best;
}

struct BfgsResult {
  Eigen::VectorXd x;
  double f;
  int iterations;
  bool converged;
};

// Dense BFGS with Armijo backtracking. fg(x, grad) returns f and fills grad.
template <class FG>
BfgsResult bfgs(FG&& fg, Eigen::VectorXd x, double gtol = 1e-10, int max_iter = 2000) {
  const Eigen::Index n = x.size();
  Eigen::VectorXd g(n), gn(n), xn(n);
  double f = fg(x, g);
  Eigen::MatrixXd h = Eigen::MatrixXd::Identity(n, n);
  int it = 0;
  bool converged = false;
  for (; it < max_iter; ++it) {
    if (g.lpNorm<Eigen::Infinity>() <= gtol * std::max(1.0, std::abs(f))) {
      converged = true;
      break;
    }
    Eigen::VectorXd p = -h * g;
    double slope = g.dot(p);
    if (!(slope < 0.0)) {
      h.setIdentity();
      p = -g;
      slope = -g.squaredNorm();
    }
    double step = 1.0;
    double fn = 0.0;
    bool ok = false;
    for (int ls = 0; ls < 60; ++ls) {
      xn = x + step * p;
      fn = fg(xn, gn);
      if (std::isfinite(fn) && fn <= f + 1e-4 * step * slope) {
        ok = true;
        break;
      }
      step *= 0.5;
    }
    if (!ok) {
      converged = true;  // no further descent at machine precision
      break;
    }
    const Eigen::VectorXd s = xn - x;
    const Eigen::VectorXd y = gn - g;
    const double sy = s.dot(y);
    const double df = f - fn;
    x = xn;
    g = gn;
    f = fn;
    if (sy > 1e-14 * s.norm() * y.norm()) {
      if (it == 0) h *= sy / y.squaredNorm();
      const Eigen::VectorXd hy = h * y;
      const double rho = 1.0 / sy;
      h += (rho * rho * y.dot(hy) + rho) * s * s.transpose() - rho * (hy * s.transpose() + s * hy.transpose());
    }
    if (df <= 1e-15 * std::max(1.0, std::abs(f)) && s.lpNorm<Eigen::Infinity>() < 1e-13) {
      converged = true;
      break;
    }
  }
  return {x, f, it, converged};
}

struct BoxResult {
  Eigen::VectorXd x;
  double f;
};

// Cyclic coordinate descent with golden-section line searches in the unit box.
// Stops after `sweeps` passes or when a pass improves by less than `ftol`.
template <class F>
BoxResult coordinate_descent(F&& f, Eigen::VectorXd x, int sweeps, double tol = 1e-8, double ftol = 0.0) {
  double fx = f(x);
  for (int s = 0; s < sweeps; ++s) {
    const double before = fx;
    for (Eigen::Index i = 0; i < x.size(); ++i) {
      Eigen::VectorXd y = x;
      auto line = [&](double v) {
        y(i) = v;
        return f(y);
      };
      const Scalar1D r = golden_min_closed(line, 0.0, 1.0, tol);
      if (r.f < fx) {
        x(i) = r.x;
        fx = r.f;
      }
    }
    if (!(before - fx > ftol)) break;
  }
  return {x, fx};
}

// Nelder-Mead restricted to the unit box by clamping; used to polish coordinate descent.
template <class F>
BoxResult nelder_mead_box(F&& f, Eigen::VectorXd x0, double step = 0.05, double ftol = 1e-15, int max_eval = 4000) {
  const Eigen::Index n = x0.size();
  auto clampv = [](Eigen::VectorXd v) { return v.cwiseMax(0.0).cwiseMin(1.0).eval(); };
  std::vector<Eigen::VectorXd> pts(n + 1, x0);
  std::vector<double> val(n + 1);
  for (Eigen::Index i = 0; i < n; ++i) {
    pts[i + 1](i) += (x0(i) + step <= 1.0) ? step : -step;
    pts[i + 1] = clampv(pts[i + 1]);
  }
  int evals = 0;
  auto fe = [&](const Eigen::VectorXd& v) {
    ++evals;
    return f(v);
  };
  for (Eigen::Index i = 0; i <= n; ++i) val[i] = fe(pts[i]);
  std::vector<Eigen::Index> order(n + 1);
  while (evals < max_eval) {
    for (Eigen::Index i = 0; i <= n; ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return val[a] < val[b]; });
    const auto lo = order[0], hi = order[n], nh = order[n - 1];
    if (std::isfinite(val[hi]) && val[hi] - val[lo] <= ftol * (1.0 + std::abs(val[lo]))) break;
    Eigen::VectorXd c = Eigen::VectorXd::Zero(n);
    for (Eigen::Index i = 0; i <= n; ++i)
      if (i != hi) c += pts[i];
    c /= double(n);
    const Eigen::VectorXd xr = clampv(c + (c - pts[hi]));
    const double fr = fe(xr);
    if (fr < val[lo]) {
      const Eigen::VectorXd xe = clampv(c + 2.0 * (c - pts[hi]));
      const double fe2 = fe(xe);
      if (fe2 < fr) {
        pts[hi] = xe;
        val[hi] = fe2;
      } else {
        pts[hi] = xr;
        val[hi] = fr;
      }
    } else if (fr < val[nh]) {
      pts[hi] = xr;
      val[hi] = fr;
    } else {
      const Eigen::VectorXd xc = clampv(c + 0.5 * (pts[hi] - c));
      const double fc = fe(xc);
      if (fc < val[hi]) {
        pts[hi] = xc;
        val[hi] = fc;
      } else {
        for (Eigen::Index i = 0; i <= n; ++i) {
          if (i == lo) continue;
          pts[i] = pts[lo] + 0.5 * (pts[i] - pts[lo]);
          val[i] = fe(pts[i]);
        }
      }
    }
  }
  Eigen::Index best = 0;
  for (Eigen::Index i = 1; i <= n; ++i)
    if (val[i] < val[best]) best = i;
  return {pts[best], val[best]};
}

}  // namespace tricomp::opt
