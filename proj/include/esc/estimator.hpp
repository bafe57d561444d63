#pragma once

#include <cstddef>
#include <deque>
#include <optional>

#include "esc/numerics.hpp"

namespace esc {

/// Matrix bounds lower <= Hessian(J) <= upper on the unknown cost curvature.
/// The median and range are derived from the two bounds and never set
/// independently.
class CurvatureBounds {
 public:
  CurvatureBounds(SymMatrix lower, SymMatrix upper);

  /// Lipschitz-only knowledge: -h I <= Hessian <= h I.
  static CurvatureBounds lipschitz(int n, double h);
  /// Exactly known curvature.
  static CurvatureBounds exact(const SymMatrix& h);

  int dim() const { return lower_.dim(); }
  const SymMatrix& lower() const { return lower_; }
  const SymMatrix& upper() const { return upper_; }
  /// (upper + lower) / 2
  const SymMatrix& median() const { return median_; }
  /// upper - lower, PSD
  const SymMatrix& range() const { return range_; }

 private:
  SymMatrix lower_;
  SymMatrix upper_;
  SymMatrix median_;
  SymMatrix range_;
};

struct EstimatorOptions {
  /// Saturation for the data weights when the curvature range or the
  /// tracking error and transients vanish.
  double w_max = 1e12;
  /// Largest admissible condition number of the information matrix.
  double cond_thresh = 1e10;
  /// Smallest admissible eigenvalue of the information matrix.
  double min_eigenvalue = 1e-12;
};

/// Regressors shorter than this carry no information and are skipped.
inline constexpr double kMinRegressorNorm = 1e-12;

struct Sample {
  VectorXd output;
  double cost = 0.0;
};

/// Sliding window of the last N+1 (output, cost) measurements plus the
/// reference active at the newest one.
class SampleBatch {
 public:
  /// Throws std::invalid_argument unless horizon >= output_dim >= 1.
  SampleBatch(int horizon, int output_dim);

  int horizon() const { return horizon_; }
  int output_dim() const { return output_dim_; }
  std::size_t size() const { return samples_.size(); }
  bool full() const { return samples_.size() == static_cast<std::size_t>(horizon_) + 1; }

  /// Appends a measurement, dropping the oldest once N+1 are held.
  void push(const VectorXd& output, double cost);
  void set_reference(const VectorXd& reference);
  void clear();

  const std::deque<Sample>& samples() const { return samples_; }
  /// Newest sample, i.e. (y_t, J(y_t)).
  const Sample& latest() const;
  const VectorXd& reference() const { return reference_; }

 private:
  int horizon_;
  int output_dim_;
  std::deque<Sample> samples_;
  VectorXd reference_;
};

/// Gradient estimate together with its information matrix Lambda^-1. When
/// the information matrix is too poorly conditioned the estimate is marked
/// invalid and only the information matrix is available.
class GradientEstimate {
 public:
  static GradientEstimate invalid(SymMatrix information);
  /// Builds a valid estimate from theta and Lambda^-1; Lambda^-1 must be
  /// positive definite.
  static GradientEstimate from_information(VectorXd theta, SymMatrix information);
  /// Builds a valid estimate from theta and Lambda; Lambda must be positive
  /// definite.
  static GradientEstimate from_covariance(VectorXd theta, SymMatrix covariance);

  bool valid() const { return theta_.has_value(); }
  int dim() const { return information_.dim(); }

  /// Accessors below throw std::logic_error on an invalid estimate.
  const VectorXd& theta_hat() const;
  const SymMatrix& information() const { return information_; }
  const SymMatrix& covariance() const;
  const SymMatrix& covariance_sqrt() const;

 private:
  GradientEstimate(SymMatrix information, std::optional<VectorXd> theta,
                   std::optional<SymMatrix> cov, std::optional<SymMatrix> cov_sqrt);

  SymMatrix information_;
  std::optional<VectorXd> theta_;
  std::optional<SymMatrix> cov_;
  std::optional<SymMatrix> cov_sqrt_;
};

/// Interval center + halfwidth * [-1, 1].
struct ErrorInterval {
  double center = 0.0;
  double halfwidth = 0.0;

  double lower() const { return center - halfwidth; }
  double upper() const { return center + halfwidth; }
  bool contains(double x, double slack = 0.0) const {
    return x >= lower() - slack && x <= upper() + slack;
  }
};

/// Data weight 1 / (1/2 |dy| |dy|_R (|e|_R + 1/2 |dy|_R)) with R the
/// curvature range, saturated at w_max.
double compute_weight(const VectorXd& delta_y, const VectorXd& tracking_error,
                      const CurvatureBounds& bounds, double w_max);

/// Lambda^-1 = (1/N) sum_k w_k dy_k dy_k' over the N past samples, with
/// dy_k = y_k - y_t.
SymMatrix build_information(const SampleBatch& batch, const CurvatureBounds& bounds,
                            double w_max);

/// Weighted batch least-squares estimate of grad J(r_t), corrected for the
/// tracking error e_t = r_t - y_t and output transients. Requires a full
/// batch with the reference set.
GradientEstimate estimate_gradient(const SampleBatch& batch, const CurvatureBounds& bounds,
                                   const EstimatorOptions& options = {});

/// Interval enclosing the regression residual
///   1/2 dy' H1 dy - e' H2 dy   for all lower <= H1, H2 <= upper.
/// Throws std::invalid_argument for a zero regressor.
ErrorInterval omega_interval(const VectorXd& delta_y, const VectorXd& tracking_error,
                             const CurvatureBounds& bounds);

/// ||Lambda^-1 (theta_hat - theta_true)||; at most one whenever the cost
/// curvature stays inside the declared bounds.
double error_ellipsoid_residual(const GradientEstimate& estimate, const VectorXd& theta_true);

}  // namespace esc
