#include "modred/linear_sde.hpp"

#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "modred/models.hpp"
#include "oracles.hpp"

namespace modred {
namespace {

Mat2 mat(double a, double b, double c, double d) {
  Mat2 m;
  m << a, b, c, d;
  return m;
}

void expect_near(const Mat2& actual, const Mat2& expected, double tol) {
  for (int i = 0; i < 2; ++i) {
    for (int j = 0; j < 2; ++j) {
      EXPECT_NEAR(actual(i, j), expected(i, j), tol) << "entry (" << i << "," << j << ")";
    }
  }
}

TEST(PropagateScalar, OrnsteinUhlenbeckClosedForm) {
  const auto model = LinearModel::scalar(-1.0, 1.0);
  const auto law = propagate_law(model, Gaussian::univariate(1.0, 0.0), 1.0);
  EXPECT_NEAR(law.mean()(0), std::exp(-1.0), 1e-15);
  EXPECT_NEAR(law.variance(), 1.0 - std::exp(-2.0), 1e-15);
}

TEST(PropagateScalar, TimeZeroReturnsInitialLaw) {
  const auto init = Gaussian::univariate(2.0, 0.5);
  const auto law = propagate_law(LinearModel::scalar(-3.0, 2.0), init, 0.0);
  EXPECT_EQ(law.mean()(0), 2.0);
  EXPECT_EQ(law.variance(), 0.5);
}

TEST(PropagateScalar, ZeroDriftIsBrownianMotion) {
  const auto law = propagate_law(LinearModel::scalar(0.0, 0.5), Gaussian::univariate(1.0, 0.0), 3.0);
  EXPECT_DOUBLE_EQ(law.mean()(0), 1.0);
  EXPECT_DOUBLE_EQ(law.variance(), 3.0);
}

TEST(PropagateScalar, SmallTimeVarianceIsAccurate) {
  const auto law = propagate_law(LinearModel::scalar(-1.0, 1.0), Gaussian::univariate(0.0, 0.0), 1e-10);
  EXPECT_NEAR(law.variance(), -std::expm1(-2e-10), 1e-24);
}

TEST(PropagatePlanar, SemigroupProperty) {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> ut(0.05, 2.0), um(-2, 2);
  int done = 0;
  while (done < 100) {
    const Mat2 c = oracle::random_matrix(rng, -3, 3);
    if (eig2(c).max_real_part() > -0.1) continue;
    const auto model = LinearModel::planar(c, oracle::random_spd(rng));
    const auto init = Gaussian::bivariate(Vec2(um(rng), um(rng)), oracle::random_spd(rng));
    const double t = ut(rng), s = ut(rng);
    const auto direct = propagate_law(model, init, t + s);
    const auto composed = propagate_law(model, propagate_law(model, init, t), s);
    const double scale = 1.0 + max_abs(direct.cov2());
    EXPECT_LE((direct.mean2() - composed.mean2()).cwiseAbs().maxCoeff(), 1e-11 * (1 + direct.mean2().norm()));
    EXPECT_LE(max_abs(Mat2(direct.cov2() - composed.cov2())), 1e-10 * scale);
    ++done;
  }
}

TEST(PropagatePlanar, ConvergesToStationaryLaw) {
  std::mt19937_64 rng(103);
  int done = 0;
  while (done < 50) {
    const Mat2 c = oracle::random_matrix(rng, -3, 3);
    const double abscissa = eig2(c).max_real_part();
    if (abscissa > -0.3) continue;
    const auto model = LinearModel::planar(c, oracle::random_spd(rng));
    const auto init = Gaussian::bivariate(Vec2(1.0, -1.0), Mat2::Zero());
    const double t = 60.0 / -abscissa;
    const auto late = propagate_law(model, init, t);
    const auto stat = stationary_law(model);
    EXPECT_LE(late.mean2().norm(), 1e-12);
    EXPECT_LE(max_abs(Mat2(late.cov2() - stat.cov2())), 1e-9 * (1 + max_abs(stat.cov2())));
    ++done;
  }
}

TEST(StationaryLaw, ScalarAndPlanarExamples) {
  EXPECT_DOUBLE_EQ(stationary_law(LinearModel::scalar(-2.0, 3.0)).variance(), 1.5);
  const auto stat = stationary_law(LinearModel::planar(Mat2(-Mat2::Identity()), Mat2(Mat2::Identity())));
  expect_near(stat.cov2(), Mat2::Identity(), 1e-15);
  EXPECT_THROW(stationary_law(LinearModel::scalar(0.0, 1.0)), Error);
  EXPECT_THROW(stationary_law(LinearModel::planar(mat(0, 1, 0, -1), Mat2(Mat2::Identity()))), Error);
}

TEST(NoiseCovariance, FastPathMatchesQuadratureAndSimpson) {
  const auto model = LinearModel::planar(mat(-2, 1, 1, -2), Mat2(Mat2::Identity()));
  ASSERT_TRUE(has_commuting_fast_path(model));
  for (double t : {0.01, 0.3, 1.0, 4.0}) {
    const Mat2 fast = noise_covariance(model, t);
    expect_near(fast, noise_covariance_quadrature(model, t), 1e-12);
    expect_near(fast, oracle::noise_cov_simpson(model.drift2(), model.diffusion2(), t), 1e-10);
  }
}

TEST(NoiseCovariance, QuadratureMatchesSimpsonForNonNormalDrift) {
  std::mt19937_64 rng(107);
  int done = 0;
  while (done < 20) {
    const Mat2 c = oracle::random_matrix(rng, -3, 3);
    if (eig2(c).max_real_part() > -0.1) continue;
    const auto model = LinearModel::planar(c, oracle::random_spd(rng));
    if (has_commuting_fast_path(model)) continue;
    const Mat2 quad = noise_covariance(model, 1.5);
    const Mat2 ref = oracle::noise_cov_simpson(model.drift2(), model.diffusion2(), 1.5);
    EXPECT_LE(max_abs(Mat2(quad - ref)), 1e-9 * (1 + max_abs(ref)));
    ++done;
  }
}

TEST(NoiseCovariance, OscillatorNoiseDoesNotCommute) {
  const OscillatorParams p;
  EXPECT_FALSE(has_commuting_fast_path(p.model()));
}

TEST(NoiseCovariance, CovarianceGrowsInLoewnerOrder) {
  const OscillatorParams p;
  const auto model = p.model();
  Mat2 prev = Mat2::Zero();
  for (int i = 1; i <= 30; ++i) {
    const Mat2 cur = noise_covariance(model, 0.2 * i);
    const auto ev = eig2(Mat2(cur - prev));
    EXPECT_GE(ev.second.real(), -1e-12) << "t = " << 0.2 * i;
    prev = cur;
  }
}

TEST(NoiseCovariance, PanelBudgetExhaustionRaises) {
  const auto model = LinearModel::planar(mat(-40, 30, -25, -1), mat(1, 0, 0, 2));
  QuadratureOptions opts;
  opts.max_panels = 1;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 0.0;
  try {
    noise_covariance_quadrature(model, 10.0, opts);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::QuadratureFailure);
  }
}

TEST(PropagatePlanar, CoupledClosedFormAgreement) {
  const CoupledParams p{-1.0, -1.0, 1.0, 1.0, 1.0, 1.0, 0.0};
  const auto model = p.model();
  const auto init = Gaussian::bivariate(p.initial_state(), Mat2::Zero());
  for (double t : {0.0, 0.1, 0.5, 1.0, 3.0, 10.0}) {
    const auto generic = propagate_law(model, init, t);
    const auto closed = coupled_full_law(p, t);
    EXPECT_LE((generic.mean2() - closed.mean2()).cwiseAbs().maxCoeff(), 1e-14);
    expect_near(generic.cov2(), closed.cov2(), 1e-14);
  }
}

TEST(PropagatePlanar, ResultIsSymmetricPsd) {
  std::mt19937_64 rng(109);
  for (int i = 0; i < 200; ++i) {
    const Mat2 c = oracle::random_matrix(rng, -3, 3);
    const auto model = LinearModel::planar(c, oracle::random_spd(rng, 0.1));
    const auto law = propagate_law(model, Gaussian::bivariate(Vec2(1, 1), Mat2::Zero()), 0.5);
    EXPECT_EQ(law.cov2()(0, 1), law.cov2()(1, 0));
    EXPECT_GE(eig2(law.cov2()).second.real(), 0.0);
  }
}

TEST(LinearModelType, RejectsInvalidInputs) {
  EXPECT_THROW(LinearModel::scalar(-1.0, -1.0), Error);
  EXPECT_THROW(LinearModel::scalar(NAN, 1.0), Error);
  EXPECT_THROW(LinearModel::planar(Mat2(-Mat2::Identity()), mat(1, 0, 0, -1)), Error);
  const auto model = LinearModel::scalar(-1.0, 1.0);
  EXPECT_THROW(propagate_law(model, Gaussian::univariate(0, 1), -1.0), Error);
  EXPECT_THROW(propagate_law(model, Gaussian::bivariate(Vec2::Zero(), Mat2::Identity()), 1.0), Error);
}

}  // namespace
}  // namespace modred
