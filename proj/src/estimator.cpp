#include "esc/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace esc {

CurvatureBounds::CurvatureBounds(SymMatrix lower, SymMatrix upper)
    : lower_(std::move(lower)),
      upper_(std::move(upper)),
      median_(0.5 * (lower_ + upper_)),
      range_(upper_ - lower_) {
  if (lower_.dim() != upper_.dim()) {
    throw std::invalid_argument("CurvatureBounds: lower and upper differ in size");
  }
  const double tol = 1e-9 * std::max({spectral_norm(lower_), spectral_norm(upper_), 1e-300});
  if (!is_psd(range_, tol)) {
    throw std::invalid_argument("CurvatureBounds: upper - lower is not PSD");
  }
}

CurvatureBounds CurvatureBounds::lipschitz(int n, double h) {
  return {SymMatrix::scalar(n, -h), SymMatrix::scalar(n, h)};
}

CurvatureBounds CurvatureBounds::exact(const SymMatrix& h) { return {h, h}; }

SampleBatch::SampleBatch(int horizon, int output_dim)
    : horizon_(horizon), output_dim_(output_dim), reference_(VectorXd::Zero(output_dim)) {
  if (output_dim < 1 || horizon < output_dim) {
    std::ostringstream msg;
    msg << "SampleBatch: horizon " << horizon << " must be >= output dimension "
        << output_dim << " >= 1";
    throw std::invalid_argument(msg.str());
  }
}

void SampleBatch::push(const VectorXd& output, double cost) {
  if (output.size() != output_dim_) {
    throw std::invalid_argument("SampleBatch::push: output dimension mismatch");
  }
  if (!output.allFinite() || !std::isfinite(cost)) {
    throw std::invalid_argument("SampleBatch::push: non-finite measurement");
  }
  samples_.push_back({output, cost});
  if (samples_.size() > static_cast<std::size_t>(horizon_) + 1) samples_.pop_front();
}

void SampleBatch::set_reference(const VectorXd& reference) {
  if (reference.size() != output_dim_ || !reference.allFinite()) {
    throw std::invalid_argument("SampleBatch::set_reference: bad reference");
  }
  reference_ = reference;
}

void SampleBatch::clear() { samples_.clear(); }

const Sample& SampleBatch::latest() const {
  if (samples_.empty()) throw std::logic_error("SampleBatch::latest: batch is empty");
  return samples_.back();
}

GradientEstimate::GradientEstimate(SymMatrix information, std::optional<VectorXd> theta,
                                   std::optional<SymMatrix> cov,
                                   std::optional<SymMatrix> cov_sqrt)
    : information_(std::move(information)),
      theta_(std::move(theta)),
      cov_(std::move(cov)),
      cov_sqrt_(std::move(cov_sqrt)) {}

GradientEstimate GradientEstimate::invalid(SymMatrix information) {
  return {std::move(information), std::nullopt, std::nullopt, std::nullopt};
}

GradientEstimate GradientEstimate::from_information(VectorXd theta, SymMatrix information) {
  if (theta.size() != information.dim()) {
    throw std::invalid_argument("GradientEstimate: dimension mismatch");
  }
  const auto e = sym_eigen(information);
  if (!(e.values(0) > 0.0)) {
    throw std::invalid_argument("GradientEstimate: information matrix not positive definite");
  }
  const VectorXd inv = e.values.cwiseInverse();
  SymMatrix cov(e.vectors * inv.asDiagonal() * e.vectors.transpose());
  SymMatrix cov_sqrt(e.vectors * inv.cwiseSqrt().asDiagonal() * e.vectors.transpose());
  return {std::move(information), std::move(theta), std::move(cov), std::move(cov_sqrt)};
}

GradientEstimate GradientEstimate::from_covariance(VectorXd theta, SymMatrix covariance) {
  if (theta.size() != covariance.dim()) {
    throw std::invalid_argument("GradientEstimate: dimension mismatch");
  }
  const auto e = sym_eigen(covariance);
  if (!(e.values(0) > 0.0)) {
    throw std::invalid_argument("GradientEstimate: covariance not positive definite");
  }
  SymMatrix info(e.vectors * e.values.cwiseInverse().asDiagonal() * e.vectors.transpose());
  SymMatrix cov_sqrt(e.vectors * e.values.cwiseSqrt().asDiagonal() * e.vectors.transpose());
  return {std::move(info), std::move(theta), std::move(covariance), std::move(cov_sqrt)};
}

const VectorXd& GradientEstimate::theta_hat() const {
  if (!theta_) throw std::logic_error("GradientEstimate: estimate is invalid");
  return *theta_;
}

const SymMatrix& GradientEstimate::covariance() const {
  if (!cov_) throw std::logic_error("GradientEstimate: estimate is invalid");
  return *cov_;
}

const SymMatrix& GradientEstimate::covariance_sqrt() const {
  if (!cov_sqrt_) throw std::logic_error("GradientEstimate: estimate is invalid");
  return *cov_sqrt_;
}

double compute_weight(const VectorXd& delta_y, const VectorXd& tracking_error,
                      const CurvatureBounds& bounds, double w_max) {
  const SymMatrix& range = bounds.range();
  const double dy_range = range.weighted_norm(delta_y);
  const double e_range = range.weighted_norm(tracking_error);
  const double denom = 0.5 * delta_y.norm() * dy_range * (e_range + 0.5 * dy_range);
  if (!(denom >= 1.0 / w_max)) return w_max;
  return 1.0 / denom;
}

namespace {

void check_batch(const SampleBatch& batch, const CurvatureBounds& bounds) {
  if (!batch.full()) {
    throw std::invalid_argument("estimator: batch must hold N+1 samples");
  }
  if (bounds.dim() != batch.output_dim()) {
    throw std::invalid_argument("estimator: curvature bounds dimension mismatch");
  }
}

}  // namespace

SymMatrix build_information(const SampleBatch& batch, const CurvatureBounds& bounds,
                            double w_max) {
  check_batch(batch, bounds);
  const int n = batch.output_dim();
  const Sample& now = batch.latest();
  const VectorXd e = batch.reference() - now.output;
  MatrixXd info = MatrixXd::Zero(n, n);
  const auto& samples = batch.samples();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const VectorXd dy = samples[k].output - now.output;
    if (dy.norm() < kMinRegressorNorm) continue;
    info += compute_weight(dy, e, bounds, w_max) * dy * dy.transpose();
  }
  info /= batch.horizon();
  return SymMatrix(0.5 * (info + info.transpose()));
}

GradientEstimate estimate_gradient(const SampleBatch& batch, const CurvatureBounds& bounds,
                                   const EstimatorOptions& options) {
  check_batch(batch, bounds);
  const int n = batch.output_dim();
  const Sample& now = batch.latest();
  const VectorXd e = batch.reference() - now.output;
  const MatrixXd& h_med = bounds.median().matrix();

  MatrixXd info = MatrixXd::Zero(n, n);
  VectorXd moment = VectorXd::Zero(n);
  const auto& samples = batch.samples();
  for (std::size_t k = 0; k + 1 < samples.size(); ++k) {
    const VectorXd dy = samples[k].output - now.output;
    if (dy.norm() < kMinRegressorNorm) continue;
    const double w = compute_weight(dy, e, bounds, options.w_max);
    const double d_cost = samples[k].cost - now.cost;
    const double corrected = d_cost + dy.dot(h_med * (e - 0.5 * dy));
    info += w * dy * dy.transpose();
    moment += w * corrected * dy;
  }
  info /= batch.horizon();
  moment /= batch.horizon();
  SymMatrix information(0.5 * (info + info.transpose()));

  const auto eig = sym_eigen(information);
  const double lo = eig.values(0);
  const double hi = eig.values(n - 1);
  if (!(lo >= options.min_eigenvalue) || hi > options.cond_thresh * lo) {
    return GradientEstimate::invalid(std::move(information));
  }
  const MatrixXd cov = eig.vectors * eig.values.cwiseInverse().asDiagonal() *
                       eig.vectors.transpose();
  VectorXd theta = cov * moment;
  return GradientEstimate::from_information(std::move(theta), std::move(information));
}

ErrorInterval omega_interval(const VectorXd& delta_y, const VectorXd& tracking_error,
                             const CurvatureBounds& bounds) {
  if (delta_y.norm() < kMinRegressorNorm) {
    throw std::invalid_argument("omega_interval: zero regressor");
  }
  const double dy_range = bounds.range().weighted_norm(delta_y);
  const double e_range = bounds.range().weighted_norm(tracking_error);
  ErrorInterval out;
  out.center = -delta_y.dot(bounds.median().matrix() * (tracking_error - 0.5 * delta_y));
  out.halfwidth = 0.5 * dy_range * (e_range + 0.5 * dy_range);
  return out;
}

double error_ellipsoid_residual(const GradientEstimate& estimate, const VectorXd& theta_true) {
  if (!estimate.valid()) {
    throw std::invalid_argument("error_ellipsoid_residual: estimate is invalid");
  }
  return (estimate.information().matrix() * (estimate.theta_hat() - theta_true)).norm();
}

}  // namespace esc
