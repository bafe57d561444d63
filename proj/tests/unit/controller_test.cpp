#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "esc/controller.hpp"
#include "esc/costs.hpp"
#include "support.hpp"

namespace esc {
namespace {

VectorXd v1(double a) { return VectorXd::Constant(1, a); }

GradientEstimate scalar_estimate(double theta, double cov) {
  return GradientEstimate::from_covariance(v1(theta), SymMatrix::scalar(1, cov));
}

// Boundary of the error set for `rule`: Lambda^1/2 z (sqrt) or Lambda z
// (full) with |z| = 1.
MatrixXd boundary_map(const GradientEstimate& g, StepSizeRule rule) {
  return rule == StepSizeRule::kSqrtForm ? g.covariance_sqrt().matrix() : g.covariance().matrix();
}

// 1 - max over a fine angular grid of err' K theta / |theta|_K^2, clipped.
double grid_step_size(const GradientEstimate& g, const SymMatrix& k, StepSizeRule rule,
                      int points) {
  const MatrixXd m = boundary_map(g, rule);
  const VectorXd k_theta = k.matrix() * g.theta_hat();
  const double descent = g.theta_hat().dot(k_theta);
  double best = -1e300;
  for (int i = 0; i < points; ++i) {
    const double phi = 2.0 * std::numbers::pi * i / points;
    VectorXd z(2);
    z << std::cos(phi), std::sin(phi);
    best = std::max(best, (m * z).dot(k_theta));
  }
  return std::clamp(1.0 - best / descent, 0.0, 1.0);
}

TEST(StepSizeRule, ParsesBothSpellings) {
  EXPECT_EQ(parse_step_size_rule("sqrt"), StepSizeRule::kSqrtForm);
  EXPECT_EQ(parse_step_size_rule("sqrt_form"), StepSizeRule::kSqrtForm);
  EXPECT_EQ(parse_step_size_rule("full"), StepSizeRule::kFullForm);
  EXPECT_EQ(parse_step_size_rule("full_form"), StepSizeRule::kFullForm);
  EXPECT_THROW(parse_step_size_rule("half"), std::invalid_argument);
  EXPECT_EQ(to_string(StepSizeRule::kFullForm), "full_form");
}

TEST(ControllerConfig, Validation) {
  ControllerConfig c;
  EXPECT_NO_THROW(c.validate());
  EXPECT_EQ(c.rule, StepSizeRule::kSqrtForm);
  c.alpha_min = 1.0;
  EXPECT_THROW(c.validate(), std::invalid_argument);
  c.alpha_min = 0.01;
  c.gain = SymMatrix::scalar(1, -1.0);
  EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(StepSize, ZeroGradientGivesZero) {
  EXPECT_EQ(compute_step_size(scalar_estimate(0.0, 1.0), SymMatrix::identity(1)), 0.0);
  EXPECT_EQ(compute_step_size(scalar_estimate(1e-9, 1e-20), SymMatrix::identity(1)), 0.0);
}

TEST(StepSize, InvalidEstimateGivesZero) {
  EXPECT_EQ(compute_step_size(GradientEstimate::invalid(SymMatrix::zero(1)),
                              SymMatrix::identity(1)),
            0.0);
}

TEST(StepSize, PerfectInformationGivesOne) {
  for (auto rule : {StepSizeRule::kSqrtForm, StepSizeRule::kFullForm}) {
    EXPECT_NEAR(compute_step_size(scalar_estimate(1.0, 1e-30), SymMatrix::identity(1), rule), 1.0,
                1e-12);
  }
}

TEST(StepSize, ScalarHandValues) {
  const auto g = scalar_estimate(1.0, 0.25);
  EXPECT_NEAR(compute_step_size(g, SymMatrix::identity(1), StepSizeRule::kSqrtForm), 0.5, 1e-15);
  EXPECT_NEAR(compute_step_size(g, SymMatrix::identity(1), StepSizeRule::kFullForm), 0.75, 1e-15);
  EXPECT_EQ(compute_step_size(scalar_estimate(0.1, 1.0), SymMatrix::identity(1)), 0.0);
}

TEST(StepSize, MatchesGameMaximumOnGrid) {
  std::mt19937_64 rng(101);
  for (auto rule : {StepSizeRule::kSqrtForm, StepSizeRule::kFullForm}) {
    for (int trial = 0; trial < 1000; ++trial) {
      const SymMatrix cov = test::random_spd(rng, 2, 1e-3, 1.0);
      const SymMatrix k = test::random_spd(rng, 2, 0.1, 2.0);
      const VectorXd theta = test::random_vector(rng, 2) * 3.0;
      const GradientEstimate g = GradientEstimate::from_covariance(theta, cov);
      const double alpha = compute_step_size(g, k, rule);
      ASSERT_GE(alpha, 0.0);
      ASSERT_LE(alpha, 1.0);
      ASSERT_NEAR(alpha, grid_step_size(g, k, rule, 100000), 1e-6)
          << to_string(rule) << " trial " << trial;
    }
  }
}

TEST(WorstCase, UnitBallAligned) {
  VectorXd theta(2);
  theta << 3.0, -4.0;
  const auto g = GradientEstimate::from_covariance(theta, SymMatrix::identity(2));
  for (auto rule : {StepSizeRule::kSqrtForm, StepSizeRule::kFullForm}) {
    EXPECT_LT((worst_case_error(g, SymMatrix::identity(2), rule) - theta / 5.0).norm(), 1e-15);
  }
}

TEST(WorstCase, ScalarHandValues) {
  const auto g = scalar_estimate(3.0, 4.0);
  EXPECT_NEAR(worst_case_error(g, SymMatrix::identity(1), StepSizeRule::kSqrtForm)(0), 2.0, 1e-15);
  EXPECT_NEAR(worst_case_error(g, SymMatrix::identity(1), StepSizeRule::kFullForm)(0), 4.0, 1e-15);
}

TEST(WorstCase, DegenerateThrows) {
  EXPECT_THROW(worst_case_error(scalar_estimate(0.0, 1.0), SymMatrix::identity(1)),
               std::invalid_argument);
  EXPECT_THROW(worst_case_error(GradientEstimate::invalid(SymMatrix::zero(1)),
                                SymMatrix::identity(1)),
               std::invalid_argument);
}

TEST(WorstCase, DominatesSampledFeasibleErrors) {
  std::mt19937_64 rng(55);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (auto rule : {StepSizeRule::kSqrtForm, StepSizeRule::kFullForm}) {
    for (int trial = 0; trial < 20; ++trial) {
      const int n = 1 + trial % 4;
      const SymMatrix cov = test::random_spd(rng, n, 1e-2, 2.0);
      const SymMatrix k = test::random_spd(rng, n);
      const auto g = GradientEstimate::from_covariance(test::random_vector(rng, n), cov);
      const VectorXd k_theta = k.matrix() * g.theta_hat();
      const VectorXd star = worst_case_error(g, k, rule);
      const double top = star.dot(k_theta);
      ASSERT_GE(top, 0.0);
      const MatrixXd m = boundary_map(g, rule);
      ASSERT_NEAR((sym_inverse(SymMatrix(m)).matrix() * star).norm(), 1.0, 1e-9);
      for (int s = 0; s < 10000; ++s) {
        VectorXd z = test::random_vector(rng, n);
        z *= std::pow(u(rng), 1.0 / n) / z.norm();
        ASSERT_LE((m * z).dot(k_theta), top + 1e-12 * (1.0 + std::abs(top)));
      }
    }
  }
}

TEST(ControllerStep, HandArithmetic) {
  ControllerConfig c;
  c.gain = SymMatrix::identity(1);
  c.alpha_min = 0.01;
  const ControllerState s{v1(0.0), Mode::kExploration, 0.0};
  const ControllerState next = controller_step(s, scalar_estimate(2.0, 1.0), c);
  EXPECT_DOUBLE_EQ(next.last_alpha, 0.5);
  EXPECT_DOUBLE_EQ(next.reference(0), -1.0);
  EXPECT_EQ(next.mode, Mode::kExploitation);
}

TEST(ControllerStep, BelowThresholdHolds) {
  ControllerConfig c;
  const ControllerState s{v1(3.0), Mode::kExploitation, 0.7};
  const ControllerState next = controller_step(s, scalar_estimate(1.0, 0.995 * 0.995), c);
  EXPECT_NEAR(next.last_alpha, 0.005, 1e-12);
  EXPECT_EQ(next.reference(0), 3.0);
  EXPECT_EQ(next.mode, Mode::kExploration);
}

TEST(ControllerStep, InvalidEstimateHolds) {
  ControllerConfig c;
  const ControllerState s{v1(3.0), Mode::kExploitation, 0.7};
  const ControllerState next =
      controller_step(s, GradientEstimate::invalid(SymMatrix::zero(1)), c);
  EXPECT_EQ(next.reference(0), 3.0);
  EXPECT_EQ(next.mode, Mode::kExploration);
  EXPECT_EQ(next.last_alpha, 0.0);
}

TEST(ControllerStep, ThresholdIsInclusive) {
  ControllerConfig c;
  c.alpha_min = 0.5;
  const ControllerState s{v1(0.0), Mode::kExploration, 0.0};
  const ControllerState next = controller_step(s, scalar_estimate(2.0, 1.0), c);
  EXPECT_EQ(next.last_alpha, 0.5);
  EXPECT_EQ(next.mode, Mode::kExploitation);
}

TEST(VerifyGain, ScalarBound) {
  std::mt19937_64 rng(6);
  const SymMatrix h = test::random_spd(rng, 3, 0.5, 4.0);
  const double gamma = 0.7;
  const double top = max_eigenvalue(h) + gamma;
  EXPECT_TRUE(verify_gain(SymMatrix::scalar(3, 0.5 / top), h, gamma, 1e-12));
  EXPECT_FALSE(verify_gain(SymMatrix::scalar(3, 2.0 / top), h, gamma, 1e-12));
  EXPECT_TRUE(verify_gain(test::random_spd(rng, 3), SymMatrix::zero(3), 0.0, 0.0));
}

TEST(VerifyGain, BoundaryHoldsAtTolerance) {
  EXPECT_TRUE(verify_gain(SymMatrix::scalar(1, 0.5), SymMatrix::scalar(1, 2.0), 0.0, 1e-9));
  EXPECT_FALSE(verify_gain(SymMatrix::scalar(1, 0.5), SymMatrix::scalar(1, 2.0), 0.1, 1e-9));
}

TEST(Synthesis, MemorylessPlant) {
  GainSynthesisProblem p{MatrixXd::Zero(2, 2), MatrixXd::Identity(2, 2), SymMatrix::identity(2),
                         SymMatrix::zero(2)};
  EXPECT_LT(test::rel_diff(linear_gain_bound(p).matrix(), 2.0 * MatrixXd::Identity(2, 2)), 1e-14);
  EXPECT_LT(test::rel_diff(synthesize_linear_gain(p).matrix(), 0.5 * MatrixXd::Identity(2, 2)),
            1e-14);
}

TEST(Synthesis, ScalarHandValue) {
  GainSynthesisProblem p{MatrixXd::Constant(1, 1, 0.5), MatrixXd::Constant(1, 1, 1.0),
                         SymMatrix::identity(1), SymMatrix::identity(1)};
  EXPECT_NEAR(linear_gain_bound(p)(0, 0), 1.0 + 112.0 / 9.0, 1e-12);
  EXPECT_NEAR(synthesize_linear_gain(p)(0, 0), 9.0 / 121.0, 1e-14);
}

TEST(Synthesis, RejectsUnstablePlant) {
  GainSynthesisProblem p{MatrixXd::Constant(1, 1, 1.2), MatrixXd::Constant(1, 1, 1.0),
                         SymMatrix::identity(1), SymMatrix::identity(1)};
  EXPECT_THROW(synthesize_linear_gain(p), std::domain_error);
}

TEST(Synthesis, RejectsIndefiniteBound) {
  GainSynthesisProblem p{MatrixXd::Zero(1, 1), MatrixXd::Constant(1, 1, 1.0),
                         SymMatrix::identity(1), SymMatrix::scalar(1, -5.0)};
  EXPECT_THROW(synthesize_linear_gain(p), std::domain_error);
}

TEST(Synthesis, SelfConsistentOnRandomProblems) {
  std::mt19937_64 rng(77);
  for (int trial = 0; trial < 200; ++trial) {
    const int nx = 1 + trial % 4;
    const int nu = 1 + trial % 3;
    MatrixXd a = test::random_matrix(rng, nx, nx);
    a *= 0.95 / std::max(1e-6, spectral_radius(a));
    GainSynthesisProblem p{a, test::random_matrix(rng, nx, nu), test::random_spd(rng, nx),
                           test::random_spd(rng, nu, 0.0, 3.0)};
    const SymMatrix k = synthesize_linear_gain(p);
    ASSERT_TRUE(verify_gain(k, linear_gain_bound(p), 0.0, 1e-9)) << "trial " << trial;
    ASSERT_TRUE(verify_gain(k, p.h_upper, 0.0, 1e-9)) << "trial " << trial;
  }
}

// Static plant y = r, exactly known quadratic, K passing the gain test:
// the reference cost never increases along exploitation steps.
TEST(ControllerStep, MonotoneDescentWithExactEstimates) {
  std::mt19937_64 rng(91);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + trial % 3;
    const SymMatrix h = test::random_spd(rng, n, 0.2, 5.0);
    const VectorXd y_star = test::random_vector(rng, n);
    const auto cost = quadratic_cost(h, y_star, CurvatureBounds::exact(h));
    ControllerConfig c;
    c.gain = SymMatrix::scalar(n, 1.0 / max_eigenvalue(h));
    c.horizon = n + 2;
    ASSERT_TRUE(verify_gain(c.gain, h, 0.0, 1e-12));
    ControllerState s{test::random_vector(rng, n) * 5.0, Mode::kExploration, 0.0};
    SampleBatch batch(c.horizon, n);
    int exploit = 0;
    for (int k = 0; k < 200; ++k) {
      VectorXd d(n);
      for (int i = 0; i < n; ++i) d(i) = 1e-3 * std::sin((i + 1) * 0.7 * k);
      const VectorXd y = s.reference + d;
      batch.push(y, cost->evaluate(y));
      batch.set_reference(s.reference);
      if (!batch.full()) continue;
      const double before = cost->evaluate(s.reference);
      s = controller_step(s, estimate_gradient(batch, cost->bounds()), c);
      if (s.mode == Mode::kExploitation) {
        ++exploit;
        ASSERT_LE(cost->evaluate(s.reference), before + 1e-9) << "trial " << trial << " k " << k;
      }
    }
    EXPECT_GT(exploit, 0);
  }
}

}  // namespace
}  // namespace esc
