#pragma once

#include <cstdint>
#include <string>

#include "esc/controller.hpp"

namespace esc {

/// Outcome of one randomized property suite.
struct PropertyReport {
  std::string name;
  int trials = 0;
  /// Instances actually checked (invalid estimates are redrawn, not counted).
  int checked = 0;
  int violations = 0;
  /// Largest observed value of the suite's figure of merit.
  double worst = 0.0;
  double seconds = 0.0;
  bool passed() const { return checked == trials && violations == 0; }
  std::string summary() const;
};

/// Quadratic costs with exact curvature bounds: |theta - grad J(r)| against
/// 1e-9 (1 + |grad J(r)|). `worst` is the largest normalized error.
PropertyReport check_estimator_exactness(int trials, std::uint64_t seed);

/// Quadratic-plus-sinusoid costs whose Hessian provably stays in the declared
/// bounds: |Lambda^-1 (theta_hat - grad J(r))| <= 1 + 1e-9. `worst` is the
/// largest residual.
PropertyReport check_ellipsoid_containment(int trials, std::uint64_t seed);

/// Closed-form step-size against 1 - max over `samples` boundary points of the
/// error set matching `rule`. Violations are soundness failures (closed form
/// above the sampled value by more than 1e-9) or sampling gaps above 1e-3.
/// `worst` is the largest gap.
PropertyReport check_step_size_game(int trials, int samples, StepSizeRule rule,
                                    std::uint64_t seed);

/// Residual intervals: sampled residuals must stay inside, and the extremal
/// curvature pair must reach >= 95% of the halfwidth. `worst` is the
/// smallest reached fraction.
PropertyReport check_omega_interval(int trials, int samples, std::uint64_t seed);

}  // namespace esc
