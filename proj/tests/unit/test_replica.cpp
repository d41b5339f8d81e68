#include <gtest/gtest.h>

#include <cmath>

#include "ampgdf/errors.hpp"
#include "ampgdf/replica.hpp"

using namespace ampgdf;

namespace {

ReplicaFixedPoint solve(const PenaltySpec& spec, double alpha = 0.5, double sigma_y2 = 1.0, double m_y = 0.0) {
  return replica_solve({spec, alpha, sigma_y2, m_y});
}

void expect_identities(const ReplicaFixedPoint& fp, const PenaltySpec& spec, double sigma_y2, double m_y) {
  EXPECT_NEAR(fp.Q_hat, 1.0 / (1.0 + fp.chi), 1e-8);
  EXPECT_NEAR(fp.chi_hat, (fp.Q + sigma_y2 + m_y * m_y) * fp.Q_hat * fp.Q_hat, 1e-8);
  EXPECT_NEAR(fp.df, fp.chi / (1.0 + fp.chi), 1e-12);
  EXPECT_NEAR(replica_gdf_decomposed(fp, spec), fp.df, 1e-8);
}

}  // namespace

TEST(ReplicaGdf, DirectFormula) {
  ReplicaFixedPoint fp;
  fp.chi = 0.0;
  EXPECT_EQ(replica_gdf(fp), 0.0);
  fp.chi = 1.0;
  EXPECT_DOUBLE_EQ(replica_gdf(fp), 0.5);
}

TEST(ReplicaSolve, RejectsBadInputs) {
  EXPECT_THROW(replica_solve({PenaltySpec::l1(1.0), 0.0, 1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(replica_solve({PenaltySpec::l1(1.0), 0.5, -1.0, 0.0}), InvalidArgument);
  EXPECT_THROW(replica_solve({PenaltySpec::l1(1.0), 0.5, 1.0, 0.0}, {.tol = 0.0}), InvalidArgument);
  EXPECT_THROW(replica_solve({PenaltySpec::l1(1.0), 0.5, 1.0, 0.0}, {.damping = 1.0}), InvalidArgument);
}

TEST(ReplicaSolve, EmptyModelLimit) {
  const ReplicaFixedPoint fp = solve(PenaltySpec::l1(8.0));
  ASSERT_TRUE(fp.converged);
  EXPECT_LT(fp.chi, 1e-12);
  EXPECT_LT(fp.df, 1e-12);
  EXPECT_LT(fp.Q, 1e-12);
}

TEST(ReplicaSolve, L1DfIsNonzeroFraction) {
  for (double lambda : {0.5, 1.0, 1.5, 2.0}) {
    const auto spec = PenaltySpec::l1(lambda);
    const ReplicaFixedPoint fp = solve(spec);
    ASSERT_TRUE(fp.converged) << lambda;
    EXPECT_NEAR(fp.df, fp.rho_hat / fp.alpha, 1e-9);
    EXPECT_EQ(fp.gamma, 0.0);
    EXPECT_EQ(aic_gap(fp, spec, 1.0), 0.0);
    expect_identities(fp, spec, 1.0, 0.0);
  }
}

// Reference values from tests/oracles/replica_oracle.py, which minimises the
// scalar problem numerically and uses Stein's identity for chi.
TEST(ReplicaSolve, MatchesBruteForceOracle) {
  const ReplicaFixedPoint l1 = solve(PenaltySpec::l1(1.0));
  EXPECT_NEAR(l1.chi, 0.4853716534, 2e-5);
  EXPECT_NEAR(l1.Q, 0.1357467860, 2e-5);

  const ReplicaFixedPoint scad = solve(PenaltySpec::scad(1.5, 3.7));
  EXPECT_NEAR(scad.Q, 0.0524359361, 2e-5);
  EXPECT_NEAR(scad.chi, 0.1950915842, 2e-5);
  EXPECT_NEAR(scad.df, 0.1632440449, 2e-5);

  const ReplicaFixedPoint scad2 = solve(PenaltySpec::scad(2.0, 3.7));
  EXPECT_NEAR(scad2.Q, 0.0161156690, 2e-5);
  EXPECT_NEAR(scad2.df, 0.0669753321, 2e-5);
  EXPECT_NEAR(scad2.rho_hat / scad2.alpha, 0.0669316164, 2e-5);

  const ReplicaFixedPoint mcp = solve(PenaltySpec::mcp(1.5, 3.7));
  EXPECT_NEAR(mcp.Q, 0.1001730454, 2e-5);
  EXPECT_NEAR(mcp.chi, 0.2688004081, 2e-5);
  EXPECT_NEAR(mcp.df, 0.2118539735, 2e-5);
  EXPECT_NEAR(mcp.rho_hat / mcp.alpha, 0.1392169476, 2e-5);

  const ReplicaFixedPoint mcp2 = solve(PenaltySpec::mcp(2.0, 3.7));
  EXPECT_NEAR(mcp2.Q, 0.0296575633, 2e-5);
  EXPECT_NEAR(mcp2.df, 0.0874654529, 2e-5);
}

TEST(ReplicaSolve, NonconvexDfExceedsNonzeroFraction) {
  for (const Family fam : {Family::kScad, Family::kMcp}) {
    for (double lambda = 1.0; lambda <= 2.51; lambda += 0.25) {
      const auto spec = PenaltySpec::make(fam, lambda, 3.7);
      const ReplicaFixedPoint fp = solve(spec);
      ASSERT_TRUE(fp.converged) << to_string(fam) << lambda;
      expect_identities(fp, spec, 1.0, 0.0);
      ASSERT_GT(fp.gamma, 0.0);
      EXPECT_GT(fp.df, fp.rho_hat / fp.alpha);
      EXPECT_NEAR(2.0 * aic_gap(fp, spec, 1.0), 2.0 * (fp.df - fp.rho_hat / fp.alpha), 1e-8);
    }
  }
}

TEST(ReplicaSolve, DfDecreasesWithLambda) {
  double prev = 1.0;
  for (double lambda = 1.0; lambda <= 3.01; lambda += 0.2) {
    const ReplicaFixedPoint fp = solve(PenaltySpec::mcp(lambda, 3.7));
    EXPECT_LT(fp.df, prev);
    prev = fp.df;
  }
}

TEST(ReplicaSolve, NonzeroMeanAndVariance) {
  const auto spec = PenaltySpec::scad(1.8, 3.7);
  const ReplicaFixedPoint fp = solve(spec, 0.7, 1.6, 0.4);
  ASSERT_TRUE(fp.converged);
  expect_identities(fp, spec, 1.6, 0.4);
}

TEST(ReplicaSolve, UnstableBelowStabilityLine) {
  bool flagged = false;
  try {
    const ReplicaFixedPoint fp = solve(PenaltySpec::scad(0.4, 3.7));
    flagged = !fp.converged;
  } catch (const UnstableRegion&) {
    flagged = true;
  }
  EXPECT_TRUE(flagged);
}

TEST(AicGap, ZeroWithoutTransientMass) {
  ReplicaFixedPoint fp;
  fp.gamma = 0.0;
  fp.Q_hat = 0.8;
  EXPECT_EQ(aic_gap(fp, PenaltySpec::scad(1.0, 3.7), 1.0), 0.0);
  EXPECT_EQ(aic_gap(fp, PenaltySpec::mcp(1.0, 3.7), 1.0), 0.0);
}

TEST(EffectiveSecondMoment, L1ClosedForm) {
  // x* = soft(h, lambda) / Q_hat with h ~ N(0, chi_hat).
  const double lambda = 0.9;
  for (double q_hat : {0.5, 0.8, 1.0}) {
    for (double chi_hat : {0.2, 1.0, 3.0}) {
      const double s = std::sqrt(chi_hat);
      const double t = lambda / s;
      const double tail = 0.5 * std::erfc(t / std::sqrt(2.0));
      const double pdf = std::exp(-0.5 * t * t) / std::sqrt(2.0 * M_PI);
      const double expected = 2.0 * ((chi_hat + lambda * lambda) * tail - lambda * s * pdf) / (q_hat * q_hat);
      EXPECT_NEAR(effective_second_moment(PenaltySpec::l1(lambda), q_hat, chi_hat), expected, 1e-10);
    }
  }
  EXPECT_EQ(effective_second_moment(PenaltySpec::l1(1.0), 1.0, 0.0), 0.0);
  EXPECT_THROW(effective_second_moment(PenaltySpec::l1(1.0), 0.0, 1.0), InvalidArgument);
}

TEST(EffectiveSecondMoment, LinearBranchLimit) {
  // With lambda -> 0 every penalty reduces to x* = h / Q_hat.
  for (const auto& spec : {PenaltySpec::scad(1e-9, 3.7), PenaltySpec::mcp(1e-9, 3.7)}) {
    EXPECT_NEAR(effective_second_moment(spec, 0.8, 1.5), 1.5 / 0.64, 1e-7);
  }
}
