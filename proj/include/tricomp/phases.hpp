#pragma once

#include "errors.hpp"

#include <cmath>
#include <limits>
#include <vector>

namespace tricomp {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct Phase {
  double kappa = 1.0;  // compliance; +inf is void
  double cost = 0.0;

  bool is_void() const { return std::isinf(kappa); }
};

// Phases ordered by strictly increasing compliance, with volume fractions.
struct PhaseSet {
  std::vector<Phase> phases;
  std::vector<double> m;

  PhaseSet() = default;
  PhaseSet(std::vector<Phase> p, std::vector<double> frac) : phases(std::move(p)), m(std::move(frac)) {
    validate();
  }

  // Convenience: compliances only, costs zero.
  static PhaseSet of(const std::vector<double>& kappa, const std::vector<double>& frac) {
    std::vector<Phase> p;
    for (double k : kappa) p.push_back({k, 0.0});
    return PhaseSet(std::move(p), frac);
  }

  std::size_t size() const { return phases.size(); }
  double kappa(std::size_t i) const { return phases[i].kappa; }

  void validate() const {
    if (phases.empty()) throw InputError("empty phase set");
    if (m.size() != phases.size()) throw InputError("fraction count does not match phase count");
    double sum = 0.0;
    for (std::size_t i = 0; i < phases.size(); ++i) {
      const double k = phases[i].kappa;
      if (!(k > 0.0)) throw InputError("compliance must be positive");
      if (i > 0 && !(k > phases[i - 1].kappa)) throw InputError("compliances must be strictly increasing");
      if (phases[i].cost < 0.0) throw InputError("cost must be nonnegative");
      if (!(m[i] >= 0.0 && m[i] <= 1.0)) throw InputError("fraction outside [0,1]");
      sum += m[i];
    }
    if (std::abs(sum - 1.0) > 1e-12) throw InputError("fractions must sum to 1");
  }
};

}  // namespace tricomp
