#include "frozen.hpp"
#include "tricomp/envelope.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace tricomp;

TEST(Envelope, GammaInterval) {
  const auto g = gamma_interval(1, 2);
  EXPECT_DOUBLE_EQ(g.a, 0.5);
  EXPECT_DOUBLE_EQ(g.b, 2.0 / 3.0);
  EXPECT_THROW(gamma_interval(2, 1), InputError);
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> r(1.01, 50);
  for (int i = 0; i < 100; ++i) {
    const auto gi = gamma_interval(1, r(rng));
    EXPECT_LT(gi.a, gi.b);
  }
}

TEST(Envelope, Thresholds) {
  const auto t = thresholds(1, 2, 0.6);
  EXPECT_NEAR(t.rho1, 0.6, 1e-15);
  EXPECT_NEAR(t.rho2, 0.7302967433402214, 1e-15);
  EXPECT_NEAR(t.rho3, 1.0954451150103321, 1e-15);
  const auto tb = thresholds(1, 2, 2.0 / 3.0);
  EXPECT_NEAR(tb.rho1, tb.rho2, 1e-15);
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.001, 0.999), r(1.1, 20);
  for (int i = 0; i < 100; ++i) {
    const double k2 = r(rng);
    const auto gi = gamma_interval(1, k2);
    const double g = gi.a + u(rng) * (gi.b - gi.a);
    const auto th = thresholds(1, k2, g);
    EXPECT_LT(th.rho1, th.rho2);
    EXPECT_LT(th.rho2, th.rho3);
  }
}

TEST(Envelope, CanonicalRegimes) {
  EXPECT_EQ(envelope_eval(0.3, 1, 2, 0.6).regime, Regime::U1);
  EXPECT_EQ(envelope_eval(0.65, 1, 2, 0.6).regime, Regime::U2);
  EXPECT_EQ(envelope_eval(0.9, 1, 2, 0.6).regime, Regime::U3);
  EXPECT_EQ(envelope_eval(1.5, 1, 2, 0.6).regime, Regime::U4);
  const auto z = envelope_eval(0.0, 1, 2, 0.6);
  EXPECT_EQ(z.value, 0.0);
  EXPECT_NEAR(z.m[2], 1.0, 1e-15);
  EXPECT_THROW(envelope_eval(-1.0, 1, 2, 0.6), InputError);
}

TEST(Envelope, ValueMatchesBoundEnergyPlusCost) {
  for (double s : {0.2, 0.5, 0.62, 0.7, 0.8, 1.0, 1.2, 2.0}) {
    const auto p = envelope_eval(s, 1, 2, 0.6);
    double sum = 0.0;
    for (double m : p.m) {
      EXPECT_GE(m, -1e-14);
      sum += m;
    }
    EXPECT_NEAR(sum, 1.0, 1e-12);
    EXPECT_NEAR(p.value, 0.5 * p.kappa_eff * s * s + p.m[0] + 0.6 * p.m[1], 1e-12);
  }
}

TEST(Envelope, BoundaryIdentities) {
  const auto t = thresholds(1, 2, 0.6);
  EXPECT_NEAR(envelope_eval(t.rho1, 1, 2, 0.6).m[1], 1.0, 1e-12);
  EXPECT_NEAR(envelope_eval(std::nextafter(t.rho2, 10.0), 1, 2, 0.6).m[0], 0.0, 1e-12);
  EXPECT_NEAR(envelope_eval(t.rho3, 1, 2, 0.6).m[0], 1.0, 1e-12);
}

TEST(Envelope, StrainFacts) {
  const auto t = thresholds(1, 2, 0.6);
  EXPECT_NEAR(envelope_eval(0.0, 1, 2, 0.6).strain, 2.0, 1e-9);
  auto slope = [&](double s) {
    const double h = 1e-6;
    return (envelope_eval(s + h, 1, 2, 0.6).strain - envelope_eval(s - h, 1, 2, 0.6).strain) / (2 * h);
  };
  EXPECT_LT(slope(0.5 * t.rho1), 0.0);
  EXPECT_GT(slope(0.5 * (t.rho1 + t.rho2)), 0.0);
  EXPECT_LT(slope(0.5 * (t.rho2 + t.rho3)), 0.0);
  EXPECT_GT(slope(2.0 * t.rho3), 0.0);
  const auto curve = strain_curve({0.1, 0.2, 0.3}, 1, 2, 0.6);
  ASSERT_EQ(curve.size(), 3u);
  EXPECT_THROW(strain_curve({0.3, 0.1}, 1, 2, 0.6), InputError);
}

TEST(Envelope, MatchesFrozenBruteForce) {
  for (const auto& e : frozen().at("envelope")) {
    const double k1 = e.at("k1"), k2 = e.at("k2"), g = e.at("gamma"), s = e.at("s");
    const auto p = envelope_eval(s, k1, k2, g);
    EXPECT_NEAR(p.value, e.at("value").get<double>(), 1e-9) << "k " << k1 << "," << k2 << " g " << g << " s " << s;
  }
}

TEST(Envelope, OracleAgreesWithClosedForm) {
  for (double s : {0.1, 0.4, 0.66, 0.8, 1.0, 1.4}) {
    const auto o = envelope_oracle(s, 1, 2, 0.6);
    EXPECT_NEAR(o.value, envelope_eval(s, 1, 2, 0.6).value, 1e-6) << s;
  }
}

TEST(Envelope, DegenerateGammaFallsBackToOracle) {
  const auto p = envelope_eval(0.3, 1, 2, 0.9);
  EXPECT_TRUE(p.degenerate);
  EXPECT_NEAR(p.m[1], 0.0, 1e-6);  // the intermediate phase is too expensive
  const auto q = envelope_eval(0.3, 1, 2, 0.3);
  EXPECT_TRUE(q.degenerate);
  EXPECT_NEAR(q.m[0], 0.0, 1e-6);  // only kappa2 and void at low stress
}

TEST(Envelope, ContinuityAtThresholds) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.001, 0.999), r(1.1, 20);
  for (int i = 0; i < 100; ++i) {
    const double k1 = 0.5 + u(rng), k2 = k1 * r(rng);
    const auto gi = gamma_interval(k1, k2);
    const double g = gi.a + u(rng) * (gi.b - gi.a);
    const auto t = thresholds(k1, k2, g);
    for (double rho : {t.rho1, t.rho2, t.rho3}) {
      const double lo = envelope_eval(rho, k1, k2, g).value;
      const double hi = envelope_eval(std::nextafter(rho, 1e9), k1, k2, g).value;
      EXPECT_LT(std::abs(hi - lo), 1e-12);
    }
  }
}
