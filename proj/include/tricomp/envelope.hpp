#pragma once

// Isotropic part of the relaxed three-well energy. Scalar convention: a pure phase at intensity s
// stores 1/2 kappa s^2, i.e. sigma0 = (s / sqrt2) I in tensor terms (Tr sigma0^2 = s^2).

#include "bounds.hpp"
#include "errors.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

namespace tricomp {

enum class Regime { U1 = 1, U2, U3, U4 };

inline const char* regime_name(Regime r) {
  switch (r) {
    case Regime::U1: return "U1";
    case Regime::U2: return "U2";
    case Regime::U3: return "U3";
    case Regime::U4: return "U4";
  }
  return "?";
}

// Structure attaining the envelope in each isotropic regime.
inline const char* regime_structure(Regime r) {
  switch (r) {
    case Regime::U1: return "L(13,2,13)";
    case Regime::U2: return "kappa2";
    case Regime::U3: return "L(12,1)";
    case Regime::U4: return "kappa1";
  }
  return "?";
}

struct EnvelopePoint {
  double s = 0.0;
  Regime regime = Regime::U1;
  std::array<double, 3> m{0, 0, 1};
  double value = 0.0;
  double kappa_eff = kInf;
  double strain = 0.0;
  bool degenerate = false;  // gamma outside the three-material interval; oracle values
};

struct GammaInterval {
  double a;
  double b;
};

inline GammaInterval gamma_interval(double k1, double k2) {
  if (!(k1 > 0.0 && k2 > k1)) throw InputError("need 0 < kappa1 < kappa2");
  return {k1 / k2, 2.0 * k1 / (k1 + k2)};
}

struct RegimeThresholds {
  double rho1, rho2, rho3;
};

inline RegimeThresholds thresholds(double k1, double k2, double g) {
  if (!(g >= 0.0 && g <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  return {g / std::sqrt(k1), 2.0 * std::sqrt(k1 * (1.0 - g) / (k2 * k2 - k1 * k1)),
          std::sqrt((1.0 - g) * (k1 + k2) / (k1 * (k2 - k1)))};
}

inline bool in_gamma_interval(double k1, double k2, double g) {
  const auto [a, b] = gamma_interval(k1, k2);
  const double tol = 1e-12 * b;
  return g >= a - tol && g <= b + tol;
}

// Branch energies and their derivatives in s.
namespace detail {

inline double u3_root(double k1, double k2, double g) {
  return std::sqrt(k1 * (k1 + k2) * (1.0 - g) / (k2 - k1));
}

inline EnvelopePoint closed_form(double s, double k1, double k2, double g) {
  const auto th = thresholds(k1, k2, g);
  EnvelopePoint p;
  p.s = s;
  if (s <= th.rho1) {
    p.regime = Regime::U1;
    p.value = 0.5 * (k2 - 2.0 * k1 / g) * s * s + 2.0 * std::sqrt(k1) * s;
    p.strain = (k2 - 2.0 * k1 / g) * s + 2.0 * std::sqrt(k1);
    // Clamped so rounding at the thresholds stays on the simplex.
    const double m2 = std::min(1.0, k1 * s * s / (g * g));
    const double m1 = std::clamp((k1 / g) * (g / std::sqrt(k1) - s) * s, 0.0, 1.0 - m2);
    p.m = {m1, m2, 1.0 - m1 - m2};
  } else if (s <= th.rho2) {
    p.regime = Regime::U2;
    p.value = 0.5 * k2 * s * s + g;
    p.strain = k2 * s;
    p.m = {0.0, 1.0, 0.0};
  } else if (s <= th.rho3) {
    p.regime = Regime::U3;
    const double r = u3_root(k1, k2, g);
    p.value = -0.5 * k1 * s * s + 2.0 * r * s + (g * (k1 + k2) - 2.0 * k1) / (k2 - k1);
    p.strain = -k1 * s + 2.0 * r;
    const double m1 =
        std::clamp(-2.0 * k1 / (k2 - k1) + s * std::sqrt(k1 * (k1 + k2) / ((1.0 - g) * (k2 - k1))), 0.0, 1.0);
    p.m = {m1, 1.0 - m1, 0.0};
  } else {
    p.regime = Regime::U4;
    p.value = 0.5 * k1 * s * s + 1.0;
    p.strain = k1 * s;
    p.m = {1.0, 0.0, 0.0};
  }
  p.kappa_eff = (p.m[0] == 0.0 && p.m[1] == 0.0) ? kInf : three_material_bound(k1, k2, p.m[0], p.m[1]).value;
  return p;
}

}  // namespace detail

struct OracleResult {
  double value;
  double m1;
  double m2;
};

// Brute-force minimization of 1/2 b2(m) s^2 + m1 + gamma m2 over the fraction simplex.
// The bound values on the grid do not depend on s or gamma, so they are cached per (k1, k2, n).
class EnvelopeOracle {
 public:
  EnvelopeOracle(double k1, double k2, int grid_n = 2000) : k1_(k1), k2_(k2), n_(grid_n) {
    if (grid_n < 2) throw InputError("oracle grid too coarse");
    b_.resize(std::size_t(n_ + 1) * (n_ + 2) / 2);
    std::size_t at = 0;
    for (int i = 0; i <= n_; ++i)
      for (int j = 0; i + j <= n_; ++j)
        b_[at++] = (i == 0 && j == 0) ? kInf : three_material_bound(k1_, k2_, double(i) / n_, double(j) / n_).value;
  }

  double objective(double m1, double m2, double s, double g) const {
    if (m1 < 0.0 || m2 < 0.0 || m1 + m2 > 1.0) return kInf;
    const double cost = m1 + g * m2;
    if (s == 0.0) return cost;
    if (m1 == 0.0 && m2 == 0.0) return kInf;
    return 0.5 * three_material_bound(k1_, k2_, m1, m2).value * s * s + cost;
  }

  OracleResult minimize(double s, double g) const {
    if (s < 0.0) throw InputError("stress intensity must be nonnegative");
    const double h = 1.0 / n_;
    const double s2 = 0.5 * s * s;
    double best = kInf;
    int bi = 0, bj = 0;
    std::size_t at = 0;
    for (int i = 0; i <= n_; ++i)
      for (int j = 0; i + j <= n_; ++j, ++at) {
        const double v = (s == 0.0 && i == 0 && j == 0) ? 0.0 : b_[at] * s2 + (i + g * j) * h;
        if (v < best) {
          best = v;
          bi = i;
          bj = j;
        }
      }
    // Pattern search along the axes and the m3 = const edge, halving the step.
    double m1 = bi * h, m2 = bj * h;
    double f = objective(m1, m2, s, g);
    static constexpr int dirs[6][2] = {{1, 0}, {-1, 0}, {0, 1}, {0, -1}, {1, -1}, {-1, 1}};
    for (double step = h; step > 1e-15;) {
      bool moved = false;
      for (const auto& d : dirs) {
        double a = std::clamp(m1 + d[0] * step, 0.0, 1.0), b = std::clamp(m2 + d[1] * step, 0.0, 1.0);
        if (a + b > 1.0) {
          if (d[0] > 0) a = 1.0 - b;
          else b = 1.0 - a;
        }
        const double v = objective(a, b, s, g);
        if (v < f) {
          f = v;
          m1 = a;
          m2 = b;
          moved = true;
        }
      }
      if (!moved) step *= 0.5;
    }
    return {f, m1, m2};
  }

  double kappa1() const { return k1_; }
  double kappa2() const { return k2_; }
  int grid() const { return n_; }

 private:
  double k1_, k2_;
  int n_;
  std::vector<double> b_;
};

namespace detail {

inline std::shared_ptr<const EnvelopeOracle> cached_oracle(double k1, double k2, int n) {
  static std::mutex mu;
  static std::map<std::tuple<double, double, int>, std::shared_ptr<const EnvelopeOracle>> cache;
  std::lock_guard lk(mu);
  auto key = std::make_tuple(k1, k2, n);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  if (cache.size() > 8) cache.clear();
  auto o = std::make_shared<const EnvelopeOracle>(k1, k2, n);
  cache.emplace(key, o);
  return o;
}

}  // namespace detail

inline OracleResult envelope_oracle(double s, double k1, double k2, double g, int grid_n = 2000) {
  return detail::cached_oracle(k1, k2, grid_n)->minimize(s, g);
}

// Classifies an oracle minimizer by the phases it uses.
inline Regime classify_fractions(double m1, double m2) {
  constexpr double eps = 1e-7;
  const double m3 = 1.0 - m1 - m2;
  if (m1 > 1.0 - eps) return Regime::U4;
  if (m2 > 1.0 - eps) return Regime::U2;
  if (m3 < eps) return Regime::U3;
  return Regime::U1;
}

inline EnvelopePoint envelope_eval(double s, double k1, double k2, double g) {
  if (s < 0.0) throw InputError("stress intensity must be nonnegative");
  if (!(k1 > 0.0 && k2 > k1)) throw InputError("need 0 < kappa1 < kappa2");
  if (!(g >= 0.0 && g <= 1.0)) throw InputError("gamma must lie in [0, 1]");
  if (in_gamma_interval(k1, k2, g)) return detail::closed_form(s, k1, k2, g);

  // Outside the interval only two-material or pure designs remain; the oracle is authoritative.
  const auto r = envelope_oracle(s, k1, k2, g, 1000);
  EnvelopePoint p;
  p.s = s;
  p.degenerate = true;
  p.value = r.value;
  p.m = {r.m1, r.m2, std::max(0.0, 1.0 - r.m1 - r.m2)};
  p.regime = classify_fractions(r.m1, r.m2);
  p.kappa_eff = (r.m1 == 0.0 && r.m2 == 0.0) ? kInf : three_material_bound(k1, k2, r.m1, r.m2).value;
  const double h = 1e-6 * std::max(1.0, s);
  const double lo = envelope_oracle(std::max(0.0, s - h), k1, k2, g, 1000).value;
  const double hi = envelope_oracle(s + h, k1, k2, g, 1000).value;
  p.strain = (hi - lo) / (s + h - std::max(0.0, s - h));
  return p;
}

struct StrainSample {
  double s;
  double strain;
};

inline std::vector<StrainSample> strain_curve(const std::vector<double>& s_list, double k1, double k2, double g) {
  if (!std::is_sorted(s_list.begin(), s_list.end())) throw InputError("stress samples must be sorted");
  std::vector<StrainSample> out;
  out.reserve(s_list.size());
  for (double s : s_list) out.push_back({s, envelope_eval(s, k1, k2, g).strain});
  return out;
}

}  // namespace tricomp
