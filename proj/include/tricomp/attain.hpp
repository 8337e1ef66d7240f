#pragma once

// Regime maps over principal stresses and the bound / catalog / FEM attainability table.

#include "bounds.hpp"
#include "catalog.hpp"
#include "cellfem.hpp"
#include "io.hpp"
#include "palette.hpp"
#include "parallel.hpp"

#include <cmath>
#include <optional>
#include <string>
#include <vector>

namespace tricomp {

struct RegimeCell {
  double l1, l2;
  CatalogResult best;
};

struct RegimeMap {
  std::vector<double> l1, l2;     // axis samples
  std::vector<RegimeCell> cells;  // row-major, l2 index outer

  const RegimeCell& at(std::size_t i1, std::size_t i2) const { return cells[i2 * l1.size() + i1]; }
};

// Catalog winner at every (lambda1, lambda2) pair; the load is diag(lambda1, lambda2).
inline RegimeMap regime_map(const CatalogPhases& ph, const std::vector<double>& l1, const std::vector<double>& l2,
                            const CatalogOptions& o = {}) {
  for (double a : l1)
    for (double b : l2)
      if (a * b < 0.0) throw InputError("regime map grid must stay in the det >= 0 quadrant");
  RegimeMap map{l1, l2, std::vector<RegimeCell>(l1.size() * l2.size())};
  CatalogOptions inner = o;
  inner.threads = 1;
  parallel_for(map.cells.size(), o.threads, [&](std::size_t k) {
    const double a = l1[k % l1.size()], b = l2[k / l1.size()];
    map.cells[k] = {a, b, best_in_catalog(ph, StressTensor::diag(a, b), inner)};
  });
  return map;
}

inline std::vector<double> linspace(double lo, double hi, int n) {
  std::vector<double> v(n);
  for (int i = 0; i < n; ++i) v[i] = n == 1 ? lo : lo + (hi - lo) * i / (n - 1);
  return v;
}

// Image row 0 is the largest lambda2.
inline io::RgbImage regime_image(const RegimeMap& m) {
  const int w = int(m.l1.size()), h = int(m.l2.size());
  io::RgbImage img{w, h, std::vector<io::Rgb>(std::size_t(w) * h)};
  for (int j = 0; j < h; ++j)
    for (int i = 0; i < w; ++i) img.pixels[std::size_t(h - 1 - j) * w + i] = label_color(m.at(i, j).best.label);
  return img;
}

inline io::CsvWriter regime_csv(const RegimeMap& m) {
  io::CsvWriter w({"lambda1", "lambda2", "label", "value", "m1", "m2", "m3"});
  for (const auto& c : m.cells)
    w.row({io::num(c.l1), io::num(c.l2), c.best.label, io::num(c.best.value), io::num(c.best.m[0]), io::num(c.best.m[1]),
           io::num(c.best.m[2])});
  return w;
}

// One structure at prescribed fractions under the isotropic load I. All values are effective bulk
// compliances, i.e. the stored energy at that load.
struct AttainRow {
  std::string name;
  std::string label;
  Fractions m;
  double bound = NAN;
  double catalog = NAN;
  double fem = NAN;
  int bound_branch = 0;

  static double gap(double a, double b) { return std::abs(a - b) / std::abs(b); }
  double gap_bound_catalog() const { return gap(catalog, bound); }
  double gap_catalog_fem() const { return gap(fem, catalog); }
  double gap_bound_fem() const { return gap(fem, bound); }
};

struct AttainCase {
  std::string name;
  std::string label;  // catalog structure, or "coated" for the coated-circle cell
  Fractions m;
  bool fem = true;
};

struct AttainOptions {
  int n = 128;
  CircleArrangement circles = CircleArrangement::Hex;
  HomogenizeOptions fem;
  unsigned threads = 1;
};

inline std::vector<AttainCase> default_attain_cases() {
  return {
      {"kappa1", "kappa1", {1, 0, 0}, true},
      {"L(12,1) HS point", "L(12,1)", {0.5, 0.5, 0}, true},
      {"HS(13) coated circles", "coated", {0.5, 0, 0.5}, true},
      {"L(13,2,13) branch 2", "L(13,2,13)", {0.14, 0.2, 0.66}, false},
      {"L(13,2,13) branch 3", "L(13,2,13)", {0.1, 0.25, 0.65}, false},
      {"L(13,2,23) branch 3", "L(13,2,23)", {0.05, 0.3, 0.65}, false},
  };
}

inline AttainRow attain_row(const CatalogPhases& ph, const AttainCase& c, const AttainOptions& o = {}) {
  AttainRow r{c.name, c.label, c.m};
  const std::vector<double> kappa{ph.k1, ph.has_k2() ? ph.k2 : 2.0 * ph.k1, kInf};
  const auto b = three_material_bound(ph.k1, kappa[1], c.m[0], c.m[1]);
  r.bound = b.value;
  r.bound_branch = b.branch;
  const StressTensor load = StressTensor::identity();
  std::optional<CatalogResult> best;
  if (c.label == "coated") {
    // Best catalog structure made of the stiff phase and void at these fractions.
    for (const char* l : {"L(1,3)", "L(13,1)"}) {
      auto s = structure_at_fractions(catalog_index(l), ph, load, c.m);
      if (s && (!best || s->energy < best->energy)) best = s;
    }
  } else {
    best = structure_at_fractions(catalog_index(c.label), ph, load, c.m);
  }
  if (best) r.catalog = best->energy;
  if (c.fem) {
    CellGrid g;
    if (c.label == "coated") {
      g = rasterize_coated_circles(2, 0, c.m[2], kappa, o.n, o.circles);
    } else if (best) {
      g = rasterize_laminate(*best->node(), kappa, o.n);
    }
    if (!g.cell.empty()) {
      HomogenizeOptions fo = o.fem;
      fo.threads = o.threads;
      r.fem = homogenize(g, fo).bulk();
    }
  }
  return r;
}

inline std::vector<AttainRow> attainability_report(const CatalogPhases& ph, const std::vector<AttainCase>& cases,
                                                   const AttainOptions& o = {}) {
  std::vector<AttainRow> rows;
  for (const auto& c : cases) rows.push_back(attain_row(ph, c, o));
  return rows;
}

inline io::CsvWriter attain_csv(const std::vector<AttainRow>& rows) {
  io::CsvWriter w({"structure", "label", "m1", "m2", "m3", "branch", "bound", "catalog", "fem", "gap_bound_catalog",
                   "gap_catalog_fem", "gap_bound_fem"});
  for (const auto& r : rows)
    w.row({r.name, r.label, io::num(r.m[0]), io::num(r.m[1]), io::num(r.m[2]), std::to_string(r.bound_branch),
           io::num(r.bound), io::num(r.catalog), io::num(r.fem), io::num(r.gap_bound_catalog()),
           io::num(r.gap_catalog_fem()), io::num(r.gap_bound_fem())});
  return w;
}

}  // namespace tricomp
