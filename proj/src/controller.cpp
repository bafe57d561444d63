#include "esc/controller.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>
#include <string>

namespace esc {

namespace {

constexpr double kMinDescent = 1e-15;

const SymMatrix& error_scale(const GradientEstimate& estimate, StepSizeRule rule) {
  return rule == StepSizeRule::kSqrtForm ? estimate.covariance_sqrt() : estimate.covariance();
}

}  // namespace

std::string_view to_string(StepSizeRule rule) {
  return rule == StepSizeRule::kSqrtForm ? "sqrt_form" : "full_form";
}

StepSizeRule parse_step_size_rule(std::string_view text) {
  if (text == "sqrt" || text == "sqrt_form") return StepSizeRule::kSqrtForm;
  if (text == "full" || text == "full_form") return StepSizeRule::kFullForm;
  throw std::invalid_argument("unknown step-size rule '" + std::string(text) + "'");
}

void ControllerConfig::validate() const {
  if (!(min_eigenvalue(gain) > 0.0)) {
    throw std::invalid_argument("controller: gain must be positive definite");
  }
  if (!(alpha_min > 0.0 && alpha_min < 1.0)) {
    throw std::invalid_argument("controller: alpha_min must lie in (0, 1)");
  }
  if (horizon < 1) throw std::invalid_argument("controller: horizon must be >= 1");
}

double compute_step_size(const GradientEstimate& estimate, const SymMatrix& gain,
                         StepSizeRule rule) {
  if (!estimate.valid()) return 0.0;
  const VectorXd& theta = estimate.theta_hat();
  const VectorXd k_theta = gain.matrix() * theta;
  const double descent = theta.dot(k_theta);
  if (!(descent > kMinDescent)) return 0.0;
  const double worst = (error_scale(estimate, rule).matrix() * k_theta).norm();
  return std::clamp(1.0 - worst / descent, 0.0, 1.0);
}

VectorXd worst_case_error(const GradientEstimate& estimate, const SymMatrix& gain,
                          StepSizeRule rule) {
  if (!estimate.valid()) {
    throw std::invalid_argument("worst_case_error: estimate is invalid");
  }
  const MatrixXd& scale = error_scale(estimate, rule).matrix();
  const VectorXd direction = scale * (gain.matrix() * estimate.theta_hat());
  const double len = direction.norm();
  if (!(len > 0.0)) throw std::invalid_argument("worst_case_error: degenerate direction");
  return scale * (direction / len);
}

ControllerState controller_step(const ControllerState& state, const GradientEstimate& estimate,
                                const ControllerConfig& config) {
  ControllerState next = state;
  next.last_alpha = compute_step_size(estimate, config.gain, config.rule);
  if (estimate.valid() && next.last_alpha >= config.alpha_min) {
    next.mode = Mode::kExploitation;
    next.reference = state.reference - next.last_alpha * (config.gain.matrix() * estimate.theta_hat());
  } else {
    next.mode = Mode::kExploration;
  }
  return next;
}

bool verify_gain(const SymMatrix& gain, const SymMatrix& h_upper, double gamma, double tol) {
  if (gain.dim() != h_upper.dim()) {
    throw std::invalid_argument("verify_gain: dimension mismatch");
  }
  const MatrixXd& k = gain.matrix();
  const MatrixXd shifted = h_upper.matrix() + gamma * MatrixXd::Identity(gain.dim(), gain.dim());
  const MatrixXd slack = k - k * shifted * k;
  return is_psd(SymMatrix(0.5 * (slack + slack.transpose())), tol);
}

SymMatrix linear_gain_bound(const GainSynthesisProblem& problem) {
  const int nx = static_cast<int>(problem.a.rows());
  if (problem.a.cols() != nx || problem.b.rows() != nx || problem.q.dim() != nx) {
    throw std::invalid_argument("linear_gain_bound: inconsistent A, B, Q sizes");
  }
  if (problem.b.cols() != problem.h_upper.dim()) {
    throw std::invalid_argument("linear_gain_bound: B columns must match H_upper");
  }
  if (!(min_eigenvalue(problem.q) > 0.0)) {
    throw std::invalid_argument("linear_gain_bound: Q must be positive definite");
  }
  const SymMatrix p = solve_discrete_lyapunov(problem.a, problem.q);
  // Steady-state sensitivity of the plant state to the input.
  const MatrixXd g =
      (MatrixXd::Identity(nx, nx) - problem.a).fullPivLu().solve(problem.b);
  const MatrixXd pm = p.matrix();
  const MatrixXd inner = pm + pm * problem.q.matrix().llt().solve(pm);
  const MatrixXd m = problem.h_upper.matrix() + g.transpose() * inner * g;
  return SymMatrix(0.5 * (m + m.transpose()));
}

SymMatrix synthesize_linear_gain(const GainSynthesisProblem& problem) {
  const SymMatrix m = linear_gain_bound(problem);
  const double top = max_eigenvalue(m);
  if (!(min_eigenvalue(m) > 0.0)) {
    std::ostringstream msg;
    msg << "synthesize_linear_gain: gain bound is not positive definite (min eigenvalue "
        << min_eigenvalue(m) << ")";
    throw std::domain_error(msg.str());
  }
  return SymMatrix::scalar(m.dim(), 1.0 / top);
}

}  // namespace esc
