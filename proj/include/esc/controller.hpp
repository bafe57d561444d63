#pragma once

#include <string_view>

#include "esc/estimator.hpp"

namespace esc {

/// Which power of Lambda scales the worst-case estimation error.
///  - kSqrtForm: alpha = 1 - |Lambda^1/2 K theta| / |theta|_K^2, optimal for
///    the error set theta' Lambda^-1 theta <= 1.
///  - kFullForm: alpha = 1 - |Lambda K theta| / |theta|_K^2, optimal for the
///    error set |Lambda^-1 theta| <= 1.
enum class StepSizeRule { kSqrtForm, kFullForm };

std::string_view to_string(StepSizeRule rule);
/// Accepts "sqrt" / "sqrt_form" / "full" / "full_form".
StepSizeRule parse_step_size_rule(std::string_view text);

enum class Mode { kExploration = 0, kExploitation = 1 };

struct ControllerConfig {
  SymMatrix gain = SymMatrix::identity(1);
  double alpha_min = 0.01;
  int horizon = 5;
  StepSizeRule rule = StepSizeRule::kSqrtForm;

  /// Throws std::invalid_argument unless the gain is positive definite and
  /// 0 < alpha_min < 1 and horizon >= 1.
  void validate() const;
};

struct ControllerState {
  VectorXd reference;
  Mode mode = Mode::kExploration;
  double last_alpha = 0.0;
};

/// Linear plant x+ = A x + B u used for structural gain synthesis.
struct GainSynthesisProblem {
  MatrixXd a;
  MatrixXd b;
  SymMatrix q = SymMatrix::identity(1);
  SymMatrix h_upper = SymMatrix::identity(1);
};

/// Adaptive step-size in [0, 1]; zero for an invalid estimate or a
/// vanishing descent direction (|theta|_K^2 <= 1e-15).
double compute_step_size(const GradientEstimate& estimate, const SymMatrix& gain,
                         StepSizeRule rule = StepSizeRule::kSqrtForm);

/// Maximizer of err' K theta over the error ellipsoid matching `rule`.
/// Throws std::invalid_argument for an invalid estimate or a degenerate
/// direction.
VectorXd worst_case_error(const GradientEstimate& estimate, const SymMatrix& gain,
                          StepSizeRule rule = StepSizeRule::kSqrtForm);

/// One integral-controller update: descend when alpha >= alpha_min,
/// otherwise hold the reference and explore.
ControllerState controller_step(const ControllerState& state, const GradientEstimate& estimate,
                                const ControllerConfig& config);

/// K - K (H_upper + gamma I) K >= -tol.
bool verify_gain(const SymMatrix& gain, const SymMatrix& h_upper, double gamma, double tol);

/// H_upper + G' (P + P Q^-1 P) G with G = (I - A)^-1 B and P the discrete
/// Lyapunov solution for (A, Q). Any K with K^-1 >= this bound is admissible.
SymMatrix linear_gain_bound(const GainSynthesisProblem& problem);

/// Largest scalar gain k I with (k I)^-1 >= linear_gain_bound(problem).
SymMatrix synthesize_linear_gain(const GainSynthesisProblem& problem);

}  // namespace esc
