#include <gtest/gtest.h>

#include <random>

#include "ampgdf/amp.hpp"
#include "ampgdf/data.hpp"
#include "ampgdf/errors.hpp"
#include "ampgdf/estimators.hpp"

using namespace ampgdf;

TEST(TrainingError, DirectFormula) {
  EXPECT_EQ(training_error(VectorXd::Ones(4), VectorXd::Ones(4)), 0.0);
  EXPECT_DOUBLE_EQ(training_error((VectorXd(2) << 1, 1).finished(), VectorXd::Zero(2)), 1.0);
  EXPECT_DOUBLE_EQ(training_error((VectorXd(3) << 2, 0, 0).finished(), VectorXd::Zero(3)), 4.0 / 3.0);
  EXPECT_THROW(training_error(VectorXd::Zero(3), VectorXd::Zero(2)), DimensionMismatch);
}

TEST(GdfAmp, DirectFormula) {
  EXPECT_EQ(gdf_amp(VectorXd::Zero(5)), 0.0);
  EXPECT_DOUBLE_EQ(gdf_amp(VectorXd::Ones(10)), 0.5);
  EXPECT_DOUBLE_EQ(gdf_amp((VectorXd(2) << 1, 3).finished()), 0.625);
  EXPECT_THROW(gdf_amp((VectorXd(2) << 1, -1).finished()), NegativeVariance);
  EXPECT_THROW(gdf_amp(VectorXd()), DimensionMismatch);
}

TEST(GdfAmpHomogeneous, DirectFormula) {
  EXPECT_DOUBLE_EQ(gdf_amp_homogeneous(VectorXd::Ones(7)), 0.5);
  EXPECT_EQ(gdf_amp_homogeneous(VectorXd::Zero(3)), 0.0);
  EXPECT_DOUBLE_EQ(gdf_amp_homogeneous((VectorXd(2) << 1, 3).finished()), 2.0 / 3.0);
}

TEST(GdfAmp, HomogeneousIsAnUpperBound) {
  // x / (1 + x) is concave, so the homogeneous form dominates (Jensen).
  std::mt19937_64 rng(3);
  std::exponential_distribution<double> e(1.0);
  for (int t = 0; t < 50; ++t) {
    VectorXd V(20);
    for (Index i = 0; i < V.size(); ++i) V[i] = e(rng);
    EXPECT_GE(gdf_amp_homogeneous(V), gdf_amp(V) - 1e-15);
    EXPECT_LT(gdf_amp(V), 1.0);
  }
}

TEST(Aic, DirectFormula) {
  EXPECT_DOUBLE_EQ(aic(0.5, 1.0, 10, 100), 0.7);
  EXPECT_DOUBLE_EQ(aic(0.3, 2.0, 0, 40), 0.3);
  EXPECT_DOUBLE_EQ(aic(0.0, 2.0, 5, 10), 2.0);
}

TEST(PredictionErrorEstimate, DirectFormula) {
  EXPECT_DOUBLE_EQ(prediction_error_estimate(0.5, 1.0, 0.0), 0.5);
  EXPECT_DOUBLE_EQ(prediction_error_estimate(0.5, 1.0, 0.25), 1.0);
  EXPECT_DOUBLE_EQ(prediction_error_estimate(1.2, 0.5, 0.4), 1.6);
}

TEST(CountSupport, UsesTolerance) {
  EXPECT_EQ(count_support((VectorXd(4) << 0.5, 0, -2, 1e-12).finished(), 1e-8), 2);
  EXPECT_EQ(count_support(VectorXd::Zero(3), 1e-8), 0);
}

TEST(EvaluateFixedPoint, ReportInvariants) {
  const RegressionInstance inst = gen_gaussian_ensemble({.N = 200, .M = 100, .sigma_y2 = 1.3, .seed = 21});
  for (const auto& spec : {PenaltySpec::l1(1.0), PenaltySpec::scad(1.6, 3.7), PenaltySpec::mcp(1.8, 3.7)}) {
    const FixedPointReport fp = amp_solve(inst, spec);
    ASSERT_TRUE(fp.converged);
    const GdfReport r = evaluate_fixed_point(inst, fp, spec);
    EXPECT_DOUBLE_EQ(r.epsilon_pre_1, r.epsilon_train + 2.0 * inst.sigma_y2 * r.df1);
    EXPECT_DOUBLE_EQ(r.aic, r.epsilon_train + 2.0 / 100.0 * inst.sigma_y2 * static_cast<double>(r.l0));
    ASSERT_TRUE(r.df2.has_value()) << r.df2_status;
    EXPECT_DOUBLE_EQ(*r.epsilon_pre_2, r.epsilon_train + 2.0 * inst.sigma_y2 * *r.df2);
    EXPECT_GE(r.df1, 0.0);
    EXPECT_LT(r.df1, 1.0);
    EXPECT_GE(r.df1_homogeneous, r.df1);
    EXPECT_EQ(r.lambda, spec.lambda());
    EXPECT_EQ(r.a.has_value(), spec.family() != Family::kL1);
  }
}

TEST(EvaluateFixedPoint, L1DfEqualsSparsity) {
  // For the LASSO the AMP divergence estimate is the active-set fraction.
  const RegressionInstance inst = gen_gaussian_ensemble({.N = 200, .M = 100, .sigma_y2 = 1.0, .seed = 22});
  const auto spec = PenaltySpec::l1(1.0);
  const FixedPointReport fp = amp_solve(inst, spec, {.tol = 1e-12, .max_sweeps = 20000});
  ASSERT_TRUE(fp.converged);
  const GdfReport r = evaluate_fixed_point(inst, fp, spec);
  EXPECT_NEAR(r.df1, static_cast<double>(r.l0) / 100.0, 1e-6);
}

TEST(EvaluateFixedPoint, EmptyModel) {
  const RegressionInstance inst = gen_gaussian_ensemble({.N = 50, .M = 30, .sigma_y2 = 1.0, .seed = 23});
  const auto spec = PenaltySpec::scad(50.0, 3.7);
  const FixedPointReport fp = amp_solve(inst, spec);
  ASSERT_TRUE(fp.converged);
  const GdfReport r = evaluate_fixed_point(inst, fp, spec);
  EXPECT_EQ(r.l0, 0);
  EXPECT_EQ(r.df1, 0.0);
  ASSERT_TRUE(r.df2.has_value());
  EXPECT_EQ(*r.df2, 0.0);
  EXPECT_DOUBLE_EQ(r.epsilon_pre_1, r.epsilon_train);
  EXPECT_NEAR(r.epsilon_train, inst.y.squaredNorm() / 30.0, 1e-14);
}

TEST(EvaluateFixedPoint, CorrectionCanBeSwitchedOff) {
  const RegressionInstance inst = gen_gaussian_ensemble({.N = 60, .M = 40, .sigma_y2 = 1.0, .seed = 24});
  const auto spec = PenaltySpec::l1(0.8);
  const FixedPointReport fp = amp_solve(inst, spec);
  const GdfReport r = evaluate_fixed_point(inst, fp, spec, {.with_correction = false});
  EXPECT_FALSE(r.df2.has_value());
  EXPECT_FALSE(r.epsilon_pre_2.has_value());
}
