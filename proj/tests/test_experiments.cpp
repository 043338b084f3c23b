#include "amcf/errors.hpp"
#include "amcf/experiments.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace amcf;

namespace {

void expect_all_pass(const ExperimentReport& r) {
  for (const auto& m : r.metrics()) {
    EXPECT_TRUE(m.pass) << r.id() << ": " << m.name << " = " << m.value << " " << m.relation
                        << " " << m.threshold;
  }
}

}  // namespace

// w(0) of the even expander for slope alpha, frozen from an independent
// collocation boundary-value solve on a long interval.
TEST(ExpanderOde, MatchesCollocationValues) {
  EXPECT_NEAR(oracle_expander_ode(0.5), 0.38980123274443457, 1e-8);
  EXPECT_NEAR(oracle_expander_ode(1.0), 0.7385645418737248, 1e-8);
  EXPECT_NEAR(oracle_expander_ode(2.0), 1.3025450588505973, 1e-8);
}

TEST(ExpanderOde, MonotoneInSlope) {
  double last = 0.0;
  for (double a = 0.25; a <= 3.0; a += 0.25) {
    const double w = oracle_expander_ode(a);
    EXPECT_GT(w, last) << a;
    EXPECT_GT(w, 0.0);
    EXPECT_LT(w, a);
    last = w;
  }
}

TEST(ExpanderOde, DegenerateAndInvalidSlopes) {
  EXPECT_EQ(oracle_expander_ode(0.0), 0.0);
  try {
    (void)oracle_expander_ode(-1.0);
    ADD_FAILURE() << "expected a domain error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Domain);
  }
}

TEST(GrimReaper, ExactTranslatingSolution) {
  GrimReaperSetup s;
  s.h = 0.02;
  s.end_time = 0.5;
  const auto r = oracle_grim_reaper(s);
  expect_all_pass(r);
  EXPECT_LT(r.value("error"), r.value("error_coarse"));
}

TEST(RescaledConvergence, ZeroPerturbationGivesZeroGap) {
  RescaledConvergenceSetup s;
  s.h = 0.05;
  s.half_width = 4.0;
  s.tau_end = 2.0;
  const auto r = exp_rescaled_convergence(ConeSpec::abs(1.0, 1),
                                          perturbation::SublinearBump{0.0, 0.5, 4.0}, s);
  EXPECT_EQ(r.value("D_initial"), 0.0);
  EXPECT_EQ(r.value("D_final"), 0.0);
  EXPECT_EQ(r.value("D_max_rise_last_half"), 0.0);
}

TEST(RescaledConvergence, OffsetDecaysAtUnitRate) {
  RescaledConvergenceSetup s;
  s.h = 0.05;
  s.half_width = 4.0;
  s.tau_end = 12.0;
  const auto r = exp_rescaled_convergence(ConeSpec::abs(1.0, 1), perturbation::BoundedOffset{0.1}, s);
  expect_all_pass(r);
  EXPECT_NEAR(r.value("D_initial"), 0.1, 1e-12);
  EXPECT_NEAR(r.value("decay_rate"), 1.0, 0.1);
}

TEST(RescaledConvergence, RejectsDimensionMismatch) {
  try {
    (void)exp_rescaled_convergence(ConeSpec::abs(1.0, 2), perturbation::BoundedOffset{0.1}, {});
    ADD_FAILURE() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(Hyperplane, SmallBumpFlattens) {
  HyperplaneSetup s;
  s.h = 0.05;
  s.end_time = 8.0;
  const auto r = exp_hyperplane_stability({1.0, 2.0}, s);
  expect_all_pass(r);
  EXPECT_LT(r.value("M_final"), 0.1 * r.value("M_initial"));
}

TEST(MeanConvex, CoarseConeAndBump) {
  MeanConvexSetup s;
  s.h = 0.1;
  s.count = 96;
  s.end_time = 1.5;
  s.apex_from = 0.5;
  s.threshold = 5e-2;
  const auto r = exp_meanconvex_stability(ConeSpec::abs(1.0, 2), {0.5, 2.0}, s);
  expect_all_pass(r);
}

TEST(MeanConvex, RequiresPlanarAbsCone) {
  try {
    (void)exp_meanconvex_stability(ConeSpec::abs(1.0, 1), {0.5, 2.0}, {});
    ADD_FAILURE() << "expected a config error";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(RandomComparison, SeededPairsStayOrdered) {
  ComparisonSetup s;
  s.count = 32;
  s.pairs = 12;
  s.end_time = 0.25;
  const auto a = exp_random_comparison(s);
  expect_all_pass(a);
  EXPECT_EQ(a.value("violating_pairs"), 0.0);
  // Same seed, same worst pair and violation.
  const auto b = exp_random_comparison(s);
  EXPECT_EQ(a.value("max_violation"), b.value("max_violation"));
  EXPECT_EQ(a.value("worst_pair"), b.value("worst_pair"));
}

TEST(RandomComparison, AnisotropicPlanarPairs) {
  ComparisonSetup s;
  s.phi = AnisotropyModel::power(4.0, 3);
  s.psi = MobilityModel::euclidean(3);
  s.dim = 2;
  s.count = 16;
  s.pairs = 4;
  s.end_time = 0.1;
  s.seed = 5;
  expect_all_pass(exp_random_comparison(s));
}
