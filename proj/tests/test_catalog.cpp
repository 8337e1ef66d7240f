#include "frozen.hpp"
#include "tricomp/attain.hpp"
#include "tricomp/bounds.hpp"
#include "tricomp/catalog.hpp"
#include "tricomp/envelope.hpp"
#include "tricomp/laminate.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace tricomp;

namespace {
const CatalogPhases kCanon{1, 2, 1, 0.6, 0};
StressTensor iso_scalar(double s) { return StressTensor::identity(s / std::numbers::sqrt2); }
}  // namespace

TEST(Laminate, LayeredClosedForm) {
  const auto& ref = frozen().at("layered_13");
  const auto m = laminate_pair(ComplianceMap::isotropic(1), ComplianceMap::isotropic(3), 0.5, 0.0).compliance();
  EXPECT_NEAR(m(0, 0), ref.at("nn").get<double>(), 1e-12);
  EXPECT_NEAR(m(2, 2), ref.at("nt").get<double>(), 1e-12);
  EXPECT_NEAR(m(1, 1), ref.at("tt").get<double>(), 1e-12);
  EXPECT_NEAR(m(0, 1), 0.0, 1e-12);
}

TEST(Laminate, RotatedLayers) {
  const auto a = laminate_pair(ComplianceMap::isotropic(1), ComplianceMap::isotropic(3), 0.3, 0.0);
  const auto b = laminate_pair(ComplianceMap::isotropic(1), ComplianceMap::isotropic(3), 0.3, 0.4);
  const StressTensor s{0.7, -0.2, 0.5};
  EXPECT_NEAR(b.energy(rotate(s, 0.4)), a.energy(s), 1e-12);
}

TEST(Laminate, VoidLayerCarriesNoNormalStress) {
  const auto m = laminate_pair(ComplianceMap::isotropic(1), ComplianceMap::isotropic(kInf), 0.5, 0.0);
  EXPECT_EQ(m.energy(StressTensor::diag(1, 0)), kInf);
  EXPECT_NEAR(m.energy(StressTensor::diag(0, 1)), 0.5 * 2.0, 1e-12);  // tangential: 1/f stiff phase
}

TEST(Laminate, SecondRankAttainsHs) {
  const auto r = structure_at_fractions(catalog_index("L(12,1)"), kCanon, StressTensor::identity(), {0.5, 0.5, 0});
  ASSERT_TRUE(r.has_value());
  EXPECT_NEAR(r->energy, hs_bound(PhaseSet::of({1, 2}, {0.5, 0.5})), 1e-9);
  const auto node = r->node();
  const auto se = evaluate_structure(*node, kCanon.phases(), StressTensor::identity());
  EXPECT_NEAR(se.energy, r->energy, 1e-9);
  EXPECT_NEAR(se.fractions[0], 0.5, 1e-9);
}

TEST(Catalog, IsotropicRegimes) {
  const auto t = thresholds(1, 2, 0.6);
  {
    const double s = 0.5 * (t.rho1 + t.rho2);
    const auto r = best_in_catalog(kCanon, iso_scalar(s));
    EXPECT_EQ(r.label, "kappa2");
    EXPECT_NEAR(r.value, envelope_eval(s, 1, 2, 0.6).value, 1e-6);
  }
  for (double s : {0.1, 0.3, 0.5}) {
    const auto r = best_in_catalog(kCanon, iso_scalar(s));
    EXPECT_EQ(r.label, "L(13,2,13)") << s;
    EXPECT_NEAR(r.value, envelope_eval(s, 1, 2, 0.6).value, 1e-4) << s;
  }
  {
    const auto r = best_in_catalog(kCanon, iso_scalar(0.9));
    EXPECT_EQ(r.label, "L(12,1)");
    EXPECT_NEAR(r.value, envelope_eval(0.9, 1, 2, 0.6).value, 1e-6);
  }
  EXPECT_EQ(best_in_catalog(kCanon, iso_scalar(1.5)).label, "kappa1");
}

TEST(Catalog, ZeroLoadIsVoid) {
  const auto r = best_in_catalog(kCanon, StressTensor{});
  EXPECT_EQ(r.label, "void");
  EXPECT_EQ(r.value, 0.0);
}

TEST(Catalog, AnisotropicLargeLoad) {
  const StressTensor s = StressTensor::diag(1.0, 0.05);
  const auto r = best_in_catalog(kCanon, s);
  EXPECT_TRUE(r.label == "L(13,2,1)" || r.label == "L(12,1)") << r.label;
  for (std::size_t i = 0; i < catalog().size(); ++i)
    EXPECT_LE(r.value, optimize_structure(int(i), kCanon, s).value + 1e-12) << catalog()[i].label;
}

TEST(Catalog, NegativeDetRequiresOptIn) {
  EXPECT_THROW(best_in_catalog(kCanon, StressTensor::diag(1, -1)), InputError);
  CatalogOptions o;
  o.allow_negative_det = true;
  EXPECT_TRUE(std::isfinite(best_in_catalog(kCanon, StressTensor::diag(1, -1), o).value));
}

TEST(Catalog, RotationInvariance) {
  const StressTensor s{0.6, 0.2, 0.1};
  const auto a = best_in_catalog(kCanon, s);
  for (double th : {0.3, 1.1, -0.7}) {
    const auto b = best_in_catalog(kCanon, rotate(s, th));
    EXPECT_NEAR(b.value, a.value, 1e-9);
    EXPECT_NEAR(b.map().energy(rotate(s, th)), a.map().energy(s), 1e-7);
  }
}

TEST(Catalog, SignSymmetry) {
  const StressTensor s{0.6, 0.2, 0.1};
  const auto a = best_in_catalog(kCanon, s), b = best_in_catalog(kCanon, -1.0 * s);
  EXPECT_EQ(a.label, b.label);
  EXPECT_EQ(a.value, b.value);
  EXPECT_EQ(a.m, b.m);
}

TEST(Catalog, ContinuousAlongRay) {
  const StressTensor dir = StressTensor::diag(1.0, 0.4);
  double prev = best_in_catalog(kCanon, 0.02 * dir).value;
  for (int i = 2; i <= 80; ++i) {
    const double v = best_in_catalog(kCanon, (0.02 * i) * dir).value;
    EXPECT_LT(std::abs(v - prev), 0.05) << i;  // slope of the energy is bounded by 2 sqrt(kappa1)|dir|
    prev = v;
  }
}

TEST(Catalog, UpperBoundsTheLowerBound) {
  for (const auto& p : frozen().at("b2_points")) {
    const Fractions m{p.at("m1").get<double>(), p.at("m2").get<double>(), 0};
    const Fractions mm{m[0], m[1], 1.0 - m[0] - m[1]};
    const double bound = p.at("value");
    double best = kInf;
    for (std::size_t i = 0; i < catalog().size(); ++i) {
      const auto r = structure_at_fractions(int(i), kCanon, StressTensor::identity(), mm);
      if (!r) continue;
      EXPECT_GE(r->energy, bound * (1 - 1e-9)) << catalog()[i].label;
      best = std::min(best, r->energy);
    }
    EXPECT_LT(best, kInf);
    const int branch = p.at("branch");
    if (branch >= 2) EXPECT_NEAR(best / bound, 1.0, 1e-4) << m[0] << "," << m[1];
  }
}

TEST(RegimeMap, DiagonalFollowsEnvelope) {
  std::vector<double> axis;
  for (int i = 1; i <= 30; ++i) axis.push_back(0.04 * i);
  const auto map = regime_map(kCanon, axis, axis);
  for (std::size_t i = 0; i < axis.size(); ++i) {
    const auto want = regime_structure(envelope_eval(axis[i] * std::numbers::sqrt2, 1, 2, 0.6).regime);
    EXPECT_EQ(map.at(i, i).best.label, want) << axis[i];
  }
}

TEST(RegimeMap, ZeroLoadCell) {
  const auto map = regime_map(kCanon, {0.0}, {0.0});
  EXPECT_EQ(map.cells[0].best.label, "void");
  EXPECT_EQ(map.cells[0].best.value, 0.0);
  EXPECT_THROW(regime_map(kCanon, {-1.0}, {1.0}), InputError);
}

TEST(RegimeMap, AnisotropicSequence) {
  std::vector<std::string> seen;
  for (int i = 1; i <= 20; ++i) {
    const auto r = best_in_catalog(kCanon, StressTensor::diag(0.1 * i, 0.05));
    if (seen.empty() || seen.back() != r.label) seen.push_back(r.label);
  }
  const std::vector<std::string> want{"L(13,2,13)", "L(13,2)", "L(13,2,1)", "kappa1"};
  EXPECT_EQ(seen, want);
}

TEST(RegimeMap, ImageUsesPalette) {
  const auto map = regime_map(kCanon, {0.0, 1.5}, {0.0, 1.5});
  const auto img = regime_image(map);
  ASSERT_EQ(img.width, 2);
  EXPECT_EQ(img.pixels[2], (io::Rgb{255, 255, 255}));  // bottom-left: zero load
  EXPECT_EQ(img.pixels[1], (io::Rgb{0, 0, 0}));        // top-right: large isotropic load
}
