#include "tricomp/bounds.hpp"
#include "tricomp/tensor.hpp"
#include "tricomp/translation_bound.hpp"

#include <gtest/gtest.h>

#include <numbers>
#include <random>

using namespace tricomp;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST(Tensor, Invariants) {
  auto a = invariants(StressTensor::identity());
  EXPECT_DOUBLE_EQ(a.trace, 2.0);
  EXPECT_DOUBLE_EQ(a.det, 1.0);
  EXPECT_DOUBLE_EQ(a.frob2, 2.0);
  auto b = invariants(StressTensor::diag(2.0, 0.5));
  EXPECT_DOUBLE_EQ(b.trace, 2.5);
  EXPECT_DOUBLE_EQ(b.det, 1.0);
  EXPECT_DOUBLE_EQ(b.frob2, 4.25);
  auto c = invariants(StressTensor{1, 1, 1});
  EXPECT_DOUBLE_EQ(c.trace, 2.0);
  EXPECT_DOUBLE_EQ(c.det, 0.0);
  EXPECT_DOUBLE_EQ(c.frob2, 4.0);
}

TEST(Tensor, EigenExamples) {
  auto a = eigen(StressTensor::diag(3, 1));
  EXPECT_DOUBLE_EQ(a.lambda1, 1.0);
  EXPECT_DOUBLE_EQ(a.lambda2, 3.0);
  EXPECT_DOUBLE_EQ(a.angle, 0.0);
  auto b = eigen(StressTensor::identity(2.5));
  EXPECT_DOUBLE_EQ(b.lambda1, 2.5);
  EXPECT_DOUBLE_EQ(b.lambda2, 2.5);
  EXPECT_EQ(b.angle, 0.0);
  auto c = eigen(StressTensor{0, 0, 1});
  EXPECT_NEAR(c.lambda1, -1.0, 1e-15);
  EXPECT_NEAR(c.lambda2, 1.0, 1e-15);
  EXPECT_NEAR(c.angle, kPi / 4, 1e-15);
}

TEST(Tensor, EigenRoundTripAndRotationInvariance) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(-3, 3), th(-kPi, kPi);
  for (int k = 0; k < 1000; ++k) {
    const StressTensor s{u(rng), u(rng), u(rng)};
    const auto e = eigen(s);
    EXPECT_LE(e.lambda1, e.lambda2);
    EXPECT_GT(e.angle, -kPi / 2);
    EXPECT_LE(e.angle, kPi / 2);
    const auto r = from_eigen(e.lambda1, e.lambda2, e.angle);
    EXPECT_NEAR(r.sxx, s.sxx, 1e-12 * (1 + std::abs(s.sxx)));
    EXPECT_NEAR(r.syy, s.syy, 1e-12 * (1 + std::abs(s.syy)));
    EXPECT_NEAR(r.sxy, s.sxy, 1e-12 * (1 + std::abs(s.sxy)));
    EXPECT_NEAR(e.lambda1 * e.lambda2, s.det(), 1e-12 * (1 + s.frob2()));
    EXPECT_NEAR(e.lambda1 + e.lambda2, s.trace(), 1e-12 * (1 + std::abs(s.trace())));
    const auto rs = rotate(s, th(rng));
    EXPECT_NEAR(rs.trace(), s.trace(), 1e-12);
    EXPECT_NEAR(rs.det(), s.det(), 1e-11);
  }
}

TEST(Tensor, MandelRoundTrip) {
  const StressTensor s{0.3, -1.2, 0.7};
  EXPECT_EQ(from_mandel(to_mandel(s)), s);
  EXPECT_NEAR(to_mandel(s).squaredNorm(), s.frob2(), 1e-15);
}

TEST(Tensor, RankOneGap) {
  EXPECT_EQ(rank_one_gap(StressTensor{1, 2, 3}, StressTensor{1, 2, 3}), 0.0);
  EXPECT_EQ(rank_one_gap(StressTensor::diag(1, 1), StressTensor::diag(0, 1)), 0.0);
  EXPECT_EQ(rank_one_gap(StressTensor::diag(2, 1), StressTensor::diag(1, 2)), -1.0);
}

TEST(Phases, Validation) {
  EXPECT_THROW(PhaseSet::of({1, 2}, {0.5, 0.4}), InputError);
  EXPECT_THROW(PhaseSet::of({2, 1}, {0.5, 0.5}), InputError);
  EXPECT_THROW(PhaseSet::of({1, kInf, kInf}, {0.5, 0.25, 0.25}), InputError);
  EXPECT_NO_THROW(PhaseSet::of({1, 2, kInf}, {0.2, 0.3, 0.5}));
}

TEST(Bounds, WellEnergy) {
  EXPECT_DOUBLE_EQ(well_energy({1, 0}, StressTensor::identity()), 1.0);
  EXPECT_DOUBLE_EQ(well_energy({2, 0}, StressTensor::diag(1, 0)), 1.0);
  EXPECT_EQ(well_energy({kInf, 0}, StressTensor{}), 0.0);
  try {
    well_energy({kInf, 0}, StressTensor::identity());
    FAIL();
  } catch (const InputError& e) {
    EXPECT_STREQ(e.what(), "void cannot carry stress");
  }
}

TEST(Bounds, MultiwellLagrangian) {
  PhaseSet ps{{{1, 1}, {2, 0.6}, {kInf, 0}}, {0.2, 0.3, 0.5}};
  auto a = multiwell_lagrangian(ps, StressTensor{});
  EXPECT_EQ(a.value, 0.0);
  EXPECT_EQ(a.well, 2u);
  auto b = multiwell_lagrangian(ps, StressTensor::identity(0.3));
  EXPECT_NEAR(b.value, 0.78, 1e-15);
  EXPECT_EQ(b.well, 1u);
  auto c = multiwell_lagrangian(ps, StressTensor::identity(3.0));
  EXPECT_NEAR(c.value, 10.0, 1e-14);
  EXPECT_EQ(c.well, 0u);
}

TEST(Bounds, WienerAndHs) {
  EXPECT_DOUBLE_EQ(wiener_bound(PhaseSet::of({2}, {1})), 2.0);
  EXPECT_NEAR(wiener_bound(PhaseSet::of({1, 2}, {0.5, 0.5})), 4.0 / 3.0, 1e-15);
  EXPECT_NEAR(wiener_bound(PhaseSet::of({1, kInf}, {0.5, 0.5})), 2.0, 1e-15);
  EXPECT_THROW(wiener_bound(PhaseSet::of({1, kInf}, {0.0, 1.0})), InputError);
  EXPECT_NEAR(hs_bound(PhaseSet::of({1, 2, kInf}, {1, 0, 0})), 1.0, 1e-15);
  EXPECT_NEAR(hs_bound(PhaseSet::of({1, 2, kInf}, {0.2, 0.3, 0.5})), 4.0, 1e-14);
}

TEST(Bounds, HsDependsOnStiffPhaseAtZeroFraction) {
  const double a = hs_bound(PhaseSet::of({1, 2, kInf}, {0, 0.5, 0.5}));
  const double b = hs_bound(PhaseSet::of({0.5, 2, kInf}, {0, 0.5, 0.5}));
  EXPECT_NEAR(a, 5.0, 1e-14);
  EXPECT_NEAR(b, 4.5, 1e-14);
}

TEST(Bounds, Thresholds) {
  auto t = three_material_thresholds(1, 2, 0.25);
  EXPECT_NEAR(t.m11, 1.0 / 6.0, 1e-15);
  EXPECT_NEAR(t.m12, 1.0 / 8.0, 1e-15);
  auto z = three_material_thresholds(1, 2, 0.0);
  EXPECT_EQ(z.m11, 0.0);
  EXPECT_EQ(z.m12, 0.0);
  auto o = three_material_thresholds(1, 2, 1.0);
  EXPECT_EQ(o.m11, 0.0);
  EXPECT_EQ(o.m12, 0.0);
}

TEST(Bounds, ThreeMaterialBranches) {
  auto a = three_material_bound(1, 2, 1.0 / 6.0, 0.25);
  EXPECT_NEAR(a.value, 5.0, 1e-13);
  EXPECT_NEAR(2.0 + 2.0 * 6.0 * 0.25, 5.0, 1e-13);  // branch 2 at the same point
  auto b = three_material_bound(1, 2, 1.0 / 8.0, 0.25);
  EXPECT_EQ(b.branch, 2);
  EXPECT_NEAR(b.value, 6.0, 1e-13);
  EXPECT_NEAR(-2.0 + 1.0 / (1.0 / 16.0 + 0.25 / 4.0), 6.0, 1e-13);
  auto c = three_material_bound(1, 2, 0.05, 0.3);
  EXPECT_EQ(c.branch, 3);
  EXPECT_NEAR(c.value, 8.0, 1e-12);
  EXPECT_THROW(three_material_bound(1, 2, 0.7, 0.5), InputError);
  EXPECT_EQ(three_material_bound(1, 2, 0.0, 0.5).branch, 3);
}

TEST(Bounds, ThreeMaterialWithoutIntermediateIsHsVoid) {
  for (double m1 : {0.1, 0.4, 0.9}) EXPECT_NEAR(three_material_bound(1, 2, m1, 0).value, (2 - m1) / m1, 1e-12);
}

TEST(Bounds, MonotoneInStiffFraction) {
  for (double m2 : {0.1, 0.3, 0.6}) {
    double prev = kInf;
    for (int i = 1; i <= 200; ++i) {
      const double m1 = (1.0 - m2) * i / 200.0;
      const double v = three_material_bound(1, 2, m1, m2).value;
      EXPECT_LE(v, prev + 1e-12);
      prev = v;
    }
  }
}

TEST(Bounds, TranslatedWell) {
  EXPECT_DOUBLE_EQ(translated_well({1, 0}, StressTensor::identity(), 0.5), 1.5);
  EXPECT_EQ(translated_well({1, 0}, StressTensor::diag(1, -1), 0.5), kInf);
  EXPECT_DOUBLE_EQ(translated_well({1, 0}, StressTensor::diag(2, 0), 0.0), 2.0);
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int k = 0; k < 200; ++k) {
    StressTensor s{u(rng), u(rng), u(rng)};
    if (s.det() < 0) continue;
    EXPECT_GE(translated_well({1, 0}, s, 3.0 * std::abs(u(rng))), 0.0);
  }
}

TEST(Bounds, CompatibilityCheck) {
  EXPECT_TRUE(compatibility_check(StressTensor{}, {{StressTensor::diag(1, 0)}, {1.0}, 0}));
  EXPECT_FALSE(compatibility_check(StressTensor{}, {{StressTensor::diag(2, 1), StressTensor::diag(1, 2)}, {0.5, 0.5}, 0}));
  const SupportSet iso{{StressTensor::identity(2.0), StressTensor::identity(0.5)}, {0.5, 0.5}, 0};
  EXPECT_TRUE(compatibility_check(StressTensor::identity(1.0), iso));
  EXPECT_FALSE(compatibility_check(StressTensor::identity(3.0), iso));
}

TEST(Bounds, MeanField) {
  EXPECT_TRUE(mean_field_check(StressTensor::identity(), StressTensor::identity()));
  EXPECT_TRUE(mean_field_check(StressTensor::diag(2, 0.5), StressTensor::identity()));
  EXPECT_FALSE(mean_field_check(StressTensor::identity(2.0), StressTensor::identity()));
}

TEST(TranslationBound, SinglePhase) {
  const auto r = modified_translation_bound(PhaseSet::of({1.5}, {1.0}), StressTensor::identity());
  EXPECT_NEAR(r.value, 1.5, 1e-6);
}

TEST(TranslationBound, TwoPhaseMatchesHs) {
  const auto r = modified_translation_bound(PhaseSet::of({1, 2}, {0.5, 0.5}), StressTensor::identity());
  EXPECT_NEAR(r.value, 1.4, 1.4e-4);
}

TEST(TranslationBound, BranchThreeMatchesClosedForm) {
  const auto r = modified_translation_bound(PhaseSet::of({1, 2, kInf}, {0.05, 0.3, 0.65}), StressTensor::identity());
  EXPECT_NEAR(r.value / 8.0, 1.0, 1e-2);
  EXPECT_GT(r.t_opt, 1.0);
}

TEST(TranslationBound, ClassicalWhenConstraintsOff) {
  TranslationBoundOptions o;
  o.det_constraint = false;
  o.mean_field = false;
  o.t_cap = 1.0;
  const auto ps = PhaseSet::of({1, 2, kInf}, {0.3, 0.3, 0.4});
  const auto r = modified_translation_bound(ps, StressTensor::identity(), o);
  EXPECT_NEAR(r.value, hs_bound(ps), 1e-4 * hs_bound(ps));
}

TEST(TranslationBound, Errors) {
  EXPECT_THROW(modified_translation_bound(PhaseSet::of({1, 2}, {0.5, 0.5}), StressTensor::diag(1, -1)), InputError);
  EXPECT_THROW(modified_translation_bound(PhaseSet::of({1, 2, kInf}, {0, 0, 1}), StressTensor::identity()), InputError);
}
