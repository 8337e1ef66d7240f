#pragma once

// Periodic unit-cell homogenization on pixel grids. Each pixel is a bilinear element with the
// zero-Poisson law sigma = eps / kappa; the cell is loaded by three average strains.

#include "catalog.hpp"
#include "compliance_map.hpp"
#include "errors.hpp"
#include "fe.hpp"
#include "io.hpp"
#include "laminate.hpp"
#include "parallel.hpp"

#include <Eigen/IterativeLinearSolvers>
#include <Eigen/Sparse>

#include <cmath>
#include <cstdint>
#include <numbers>
#include <string>
#include <vector>

namespace tricomp {

// Square pixels of side 1/nx, so the cell is 1 wide and ny/nx tall.
struct CellGrid {
  int nx = 0, ny = 0;
  std::vector<std::uint8_t> cell;  // phase index, row-major with row j at y = (j + 1/2) / nx
  std::vector<double> kappa;       // per phase; +inf is void

  CellGrid() = default;
  CellGrid(int nx_, int ny_, std::vector<double> k) : nx(nx_), ny(ny_), cell(std::size_t(nx_) * ny_, 0), kappa(std::move(k)) {
    if (nx < 8 || ny < 8) throw InputError("cell grid needs at least 8 pixels per side");
  }

  std::uint8_t& at(int i, int j) { return cell[std::size_t(j) * nx + i]; }
  std::uint8_t at(int i, int j) const { return cell[std::size_t(j) * nx + i]; }

  std::vector<double> fractions() const {
    std::vector<double> f(kappa.size(), 0.0);
    for (auto c : cell) f[c] += 1.0;
    for (auto& v : f) v /= double(cell.size());
    return f;
  }

  friend bool operator==(const CellGrid& a, const CellGrid& b) {
    return a.nx == b.nx && a.ny == b.ny && a.cell == b.cell;
  }
};

namespace detail {

// Whether pixel p of a run of length len belongs to the first partner (evenly spread).
inline bool dither(int p, double f) {
  return std::floor((p + 1) * f + 0.5) - std::floor(p * f + 0.5) >= 1.0;
}

inline bool axis_aligned(double angle, bool& normal_x) {
  const double q = angle / (std::numbers::pi / 2);
  const double r = std::round(q);
  if (std::abs(q - r) > 1e-9) return false;
  normal_x = (long long)(r) % 2 == 0;
  return true;
}

// Fills `ids` (pixel coordinates of a region) following the tree. The root layer is one
// contiguous slab pair per cell; deeper layers are dithered at pixel scale along their normal.
inline void paint(const LaminateNode& n, CellGrid& g, const std::vector<std::pair<int, int>>& ids, bool root) {
  if (n.is_leaf()) {
    for (auto [i, j] : ids) g.at(i, j) = std::uint8_t(n.phase);
    return;
  }
  bool nx_dir = true;
  if (!axis_aligned(n.angle, nx_dir)) throw InputError("only axis-aligned laminates can be rasterized");
  std::vector<std::pair<int, int>> a, b;
  if (root) {
    const int len = nx_dir ? g.nx : g.ny;
    const int k = int(std::lround(n.f * len));
    for (auto [i, j] : ids) ((nx_dir ? i : j) < k ? a : b).push_back({i, j});
  } else {
    for (auto [i, j] : ids) (dither(nx_dir ? i : j, n.f) ? a : b).push_back({i, j});
  }
  paint(*n.a, g, a, false);
  paint(*n.b, g, b, false);
}

}  // namespace detail

inline CellGrid rasterize_laminate(const LaminateNode& node, const std::vector<double>& kappa, int n) {
  CellGrid g(n, n, kappa);
  std::vector<std::pair<int, int>> ids;
  ids.reserve(std::size_t(n) * n);
  for (int j = 0; j < n; ++j)
    for (int i = 0; i < n; ++i) ids.push_back({i, j});
  detail::paint(node, g, ids, true);
  std::vector<double> want(kappa.size(), 0.0);
  accumulate_fractions(node, 1.0, want);
  const auto got = g.fractions();
  for (std::size_t p = 0; p < kappa.size(); ++p)
    if (std::abs(got[p] - (p < want.size() ? want[p] : 0.0)) > 2.0 / n)
      throw InputError("fraction infeasible at resolution " + std::to_string(n) + ": phase " + std::to_string(p) +
                       " achievable " + io::num(got[p]));
  return g;
}

enum class CircleArrangement { Square, Hex };

// Disks of `core` inside `coat` with total area fraction m_core. Square: one centered disk in
// an n x n cell. Hex: two disks in an n x round(sqrt3 n) cell, i.e. a triangular array, which is
// a much closer stand-in for the space-filling coated-circle assemblage.
inline CellGrid rasterize_coated_circles(int core, int coat, double m_core, const std::vector<double>& kappa, int n,
                                         CircleArrangement arr = CircleArrangement::Square) {
  if (!(m_core >= 0.0 && m_core <= 1.0)) throw InputError("core fraction outside [0,1]");
  const bool hex = arr == CircleArrangement::Hex;
  const int ny = hex ? int(std::lround(n * std::sqrt(3.0))) : n;
  const double height = double(ny) / n;
  const int disks = hex ? 2 : 1;
  const double max_frac = disks * std::numbers::pi * 0.25 / height;
  if (m_core > max_frac)
    throw InputError("fraction infeasible: non-overlapping disks hold at most " + io::num(max_frac));
  CellGrid g(n, ny, kappa);
  const double r2 = m_core * height / (disks * std::numbers::pi);
  const double centers[2][2] = {{hex ? 0.0 : 0.5, hex ? 0.0 : 0.5 * height}, {0.5, 0.5 * height}};
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < n; ++i) {
      const double x = (i + 0.5) / n, y = (j + 0.5) / n;
      bool in = false;
      for (int d = 0; d < disks; ++d) {
        double dx = x - centers[d][0], dy = y - centers[d][1];
        dx -= std::round(dx);
        dy -= height * std::round(dy / height);
        in |= dx * dx + dy * dy < r2;
      }
      g.at(i, j) = std::uint8_t(in ? core : coat);
    }
  const double got = g.fractions()[core];
  if (std::abs(got - m_core) > 2.0 / n)
    throw InputError("fraction infeasible at resolution " + std::to_string(n) + ": achievable " + io::num(got));
  return g;
}

// PGM gray levels 0 / 128 / 255 encode phases 0 / 1 / 2.
inline io::GrayImage to_pgm(const CellGrid& g) {
  if (g.kappa.size() > 3) throw InputError("PGM export supports at most three phases");
  static constexpr std::uint8_t level[3] = {0, 128, 255};
  io::GrayImage img{g.nx, g.ny, {}};
  img.pixels.resize(g.cell.size());
  for (std::size_t i = 0; i < g.cell.size(); ++i) img.pixels[i] = level[g.cell[i]];
  return img;
}

inline CellGrid from_pgm(const io::GrayImage& img, const std::vector<double>& kappa) {
  CellGrid g(img.width, img.height, kappa);
  for (std::size_t i = 0; i < img.pixels.size(); ++i) {
    const auto v = img.pixels[i];
    const int p = v == 0 ? 0 : v == 128 ? 1 : v == 255 ? 2 : -1;
    if (p < 0 || std::size_t(p) >= kappa.size())
      throw InputError("pixel " + std::to_string(i) + " has gray level " + std::to_string(v) + " with no phase");
    g.cell[i] = std::uint8_t(p);
  }
  return g;
}

inline void save_cell(const CellGrid& g, const std::string& path) { io::save_pgm(to_pgm(g), path); }
inline CellGrid load_cell(const std::string& path, const std::vector<double>& kappa) {
  return from_pgm(io::load_pgm(path), kappa);
}

struct HomogenizeOptions {
  double void_factor = 1e6;  // void compliance = factor * largest finite compliance
  double tol = 1e-9;
  unsigned threads = 1;
};

struct HomogenizeResult {
  ComplianceMap map;
  std::array<int, 3> iterations{};
};

inline HomogenizeResult homogenize_detailed(const CellGrid& g, const HomogenizeOptions& o = {}) {
  double kmax = 0.0;
  for (double k : g.kappa)
    if (std::isfinite(k)) kmax = std::max(kmax, k);
  if (kmax == 0.0) throw InputError("cell has no finite phase");
  std::vector<double> stiff(g.kappa.size());
  for (std::size_t p = 0; p < g.kappa.size(); ++p)
    stiff[p] = 1.0 / (std::isfinite(g.kappa[p]) ? g.kappa[p] : o.void_factor * kmax);
  bool any_solid = false;
  for (auto c : g.cell) any_solid |= std::isfinite(g.kappa[c]);
  if (!any_solid) throw InputError("all-void cell cannot be homogenized");

  const int nx = g.nx, ny = g.ny;
  // Square pixels of side 1/nx; the cell is 1 x ny/nx.
  const double h = 1.0 / nx, area = h * h * nx * ny;
  const fe::Q4 el(h, h);
  Mat3 d0 = Mat3::Zero();
  d0(0, 0) = d0(1, 1) = 1.0;
  d0(2, 2) = 0.5;  // unit-compliance law in engineering shear
  const fe::Mat8 k0 = el.stiffness(d0);
  const int nn = nx * ny;
  auto node = [&](int i, int j) { return ((j + ny) % ny) * nx + (i + nx) % nx; };
  auto dofs = [&](int i, int j) {
    const int ns[4] = {node(i, j), node(i + 1, j), node(i + 1, j + 1), node(i, j + 1)};
    std::array<int, 8> d{};
    for (int a = 0; a < 4; ++a) {
      d[2 * a] = 2 * ns[a];
      d[2 * a + 1] = 2 * ns[a] + 1;
    }
    return d;
  };
  // Node 0 is pinned to remove rigid translations; reduced index = dof - 2.
  const int ndof = 2 * nn - 2;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(std::size_t(nn) * 64);
  std::array<Eigen::VectorXd, 3> rhs;
  for (auto& r : rhs) r = Eigen::VectorXd::Zero(ndof);
  const fe::Mat38& bc = el.center_b;
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double s = stiff[g.at(i, j)];
      const auto d = dofs(i, j);
      for (int a = 0; a < 8; ++a) {
        if (d[a] < 2) continue;
        for (int b = 0; b < 8; ++b)
          if (d[b] >= 2) trip.emplace_back(d[a] - 2, d[b] - 2, s * k0(a, b));
        for (int c = 0; c < 3; ++c) rhs[c](d[a] - 2) -= s * el.area() * (bc.col(a).transpose() * d0.col(c))(0);
      }
    }
  Eigen::SparseMatrix<double> k(ndof, ndof);
  k.setFromTriplets(trip.begin(), trip.end());

  HomogenizeResult res;
  std::array<Eigen::VectorXd, 3> u;
  std::array<bool, 3> ok{};
  parallel_for(3, o.threads, [&](std::size_t c) {
    Eigen::ConjugateGradient<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper, Eigen::IncompleteCholesky<double>> cg;
    cg.setTolerance(o.tol);
    cg.setMaxIterations(20 * nn);
    cg.compute(k);
    u[c] = cg.solve(rhs[c]);
    res.iterations[c] = int(cg.iterations());
    ok[c] = cg.info() == Eigen::Success;
  });
  for (bool b : ok)
    if (!b) throw NumericalError("conjugate gradient did not converge in the cell problem");

  // C_ab = <E_a . D (E_b + B u_b)>; the cross terms cancel by equilibrium.
  Mat3 cv = Mat3::Zero();
  for (int j = 0; j < ny; ++j)
    for (int i = 0; i < nx; ++i) {
      const double s = stiff[g.at(i, j)];
      const auto d = dofs(i, j);
      for (int b = 0; b < 3; ++b) {
        fe::Vec8 ue;
        for (int a = 0; a < 8; ++a) ue(a) = d[a] < 2 ? 0.0 : u[b](d[a] - 2);
        Vec3 strain = bc * ue;
        strain(b) += 1.0;
        cv.col(b) += s * el.area() * (d0 * strain);
      }
    }
  cv = (0.5 / area) * (cv + cv.transpose()).eval();
  res.map = ComplianceMap::from_stiffness(fe::voigt_to_mandel(cv));
  return res;
}

inline ComplianceMap homogenize(const CellGrid& g, const HomogenizeOptions& o = {}) {
  return homogenize_detailed(g, o).map;
}

}  // namespace tricomp
