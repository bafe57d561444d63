#pragma once

#include <memory>

#include "esc/estimator.hpp"

namespace esc {

/// Steady-state cost J(y) together with the curvature bounds handed to the
/// estimator.
class CostModel {
 public:
  explicit CostModel(CurvatureBounds bounds) : bounds_(std::move(bounds)) {}
  virtual ~CostModel() = default;

  int dim() const { return bounds_.dim(); }
  const CurvatureBounds& bounds() const { return bounds_; }

  virtual double evaluate(const VectorXd& y) const = 0;
  /// Central differences unless overridden with the analytic gradient.
  virtual VectorXd gradient(const VectorXd& y) const;

 private:
  CurvatureBounds bounds_;
};

using CostPtr = std::shared_ptr<const CostModel>;

/// 1/2 (y - y*)' H (y - y*).
CostPtr quadratic_cost(const SymMatrix& h, const VectorXd& y_star, const CurvatureBounds& bounds);

/// Negative Gaussian-plume concentration
///   -strength (2 pi sigma)^-1/2 exp(-1/2 (y - y*)' S^+ (y - y*)),
/// S = sigma^2 (I - d d') downwind of y* and sigma0^2 I upwind, with
/// sigma = sigma0 + d'(y - y*)/2 downwind and sigma0 upwind.
CostPtr plume_cost(const VectorXd& y_star, double wind_angle, double sigma0,
                   const CurvatureBounds& bounds, double strength = 1.0);

/// Peak concentration strength (2 pi sigma0)^-1/2 of plume_cost.
double plume_peak(double sigma0, double strength = 1.0);

/// 3 - 1 / sqrt(1 + (y - 2)^2).
CostPtr bench1_cost(const CurvatureBounds& bounds);

/// |y - 1|^2 + 2018.
CostPtr bench2_cost(const CurvatureBounds& bounds);

/// y1^2 + 2 y2.
CostPtr bench3_cost(const CurvatureBounds& bounds);

}  // namespace esc
