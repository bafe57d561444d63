#include "esc/costs.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace esc {

namespace {

void require_dim(const VectorXd& y, int n, const char* what) {
  if (y.size() != n) throw std::invalid_argument(std::string(what) + ": dimension mismatch");
}

class QuadraticCost final : public CostModel {
 public:
  QuadraticCost(SymMatrix h, VectorXd y_star, CurvatureBounds bounds)
      : CostModel(std::move(bounds)), h_(std::move(h)), y_star_(std::move(y_star)) {}

  double evaluate(const VectorXd& y) const override {
    require_dim(y, dim(), "quadratic_cost");
    const VectorXd e = y - y_star_;
    return 0.5 * e.dot(h_.matrix() * e);
  }
  VectorXd gradient(const VectorXd& y) const override {
    require_dim(y, dim(), "quadratic_cost");
    return h_.matrix() * (y - y_star_);
  }

 private:
  SymMatrix h_;
  VectorXd y_star_;
};

class PlumeCost final : public CostModel {
 public:
  PlumeCost(VectorXd y_star, double angle, double sigma0, double strength,
            CurvatureBounds bounds)
      : CostModel(std::move(bounds)),
        y_star_(std::move(y_star)),
        sigma0_(sigma0),
        strength_(strength) {
    wind_ = VectorXd(2);
    wind_ << std::cos(angle), std::sin(angle);
  }

  double evaluate(const VectorXd& y) const override {
    require_dim(y, 2, "plume_cost");
    const VectorXd e = y - y_star_;
    const double along = wind_.dot(e);
    double sigma = sigma0_;
    double quad = 0.0;
    if (along >= 0.0) {
      // Pseudo-inverse of sigma^2 (I - d d') is (I - d d') / sigma^2.
      sigma = sigma0_ + 0.5 * along;
      const VectorXd cross = e - along * wind_;
      quad = cross.squaredNorm() / (sigma * sigma);
    } else {
      quad = e.squaredNorm() / (sigma0_ * sigma0_);
    }
    return -strength_ / std::sqrt(2.0 * std::numbers::pi * sigma) * std::exp(-0.5 * quad);
  }

 private:
  VectorXd y_star_;
  VectorXd wind_;
  double sigma0_;
  double strength_;
};

class Bench1Cost final : public CostModel {
 public:
  using CostModel::CostModel;
  double evaluate(const VectorXd& y) const override {
    require_dim(y, 1, "bench1_cost");
    const double s = y(0) - 2.0;
    return 3.0 - 1.0 / std::sqrt(1.0 + s * s);
  }
  VectorXd gradient(const VectorXd& y) const override {
    require_dim(y, 1, "bench1_cost");
    const double s = y(0) - 2.0;
    return VectorXd::Constant(1, s * std::pow(1.0 + s * s, -1.5));
  }
};

class Bench2Cost final : public CostModel {
 public:
  using CostModel::CostModel;
  double evaluate(const VectorXd& y) const override {
    require_dim(y, 2, "bench2_cost");
    return (y.array() - 1.0).matrix().squaredNorm() + 2018.0;
  }
  VectorXd gradient(const VectorXd& y) const override {
    require_dim(y, 2, "bench2_cost");
    return 2.0 * (y.array() - 1.0).matrix();
  }
};

class Bench3Cost final : public CostModel {
 public:
  using CostModel::CostModel;
  double evaluate(const VectorXd& y) const override {
    require_dim(y, 2, "bench3_cost");
    return y(0) * y(0) + 2.0 * y(1);
  }
  VectorXd gradient(const VectorXd& y) const override {
    require_dim(y, 2, "bench3_cost");
    VectorXd g(2);
    g << 2.0 * y(0), 2.0;
    return g;
  }
};

void check_bounds_dim(const CurvatureBounds& bounds, int n, const char* what) {
  if (bounds.dim() != n) {
    throw std::invalid_argument(std::string(what) + ": curvature bounds have wrong dimension");
  }
}

}  // namespace

VectorXd CostModel::gradient(const VectorXd& y) const {
  const int n = dim();
  VectorXd g(n);
  for (int i = 0; i < n; ++i) {
    const double h = 1e-6 * std::max(1.0, std::abs(y(i)));
    VectorXd hi = y;
    VectorXd lo = y;
    hi(i) += h;
    lo(i) -= h;
    g(i) = (evaluate(hi) - evaluate(lo)) / (2.0 * h);
  }
  return g;
}

CostPtr quadratic_cost(const SymMatrix& h, const VectorXd& y_star, const CurvatureBounds& bounds) {
  if (y_star.size() != h.dim()) {
    throw std::invalid_argument("quadratic_cost: H and y* differ in size");
  }
  check_bounds_dim(bounds, h.dim(), "quadratic_cost");
  return std::make_shared<QuadraticCost>(h, y_star, bounds);
}

CostPtr plume_cost(const VectorXd& y_star, double wind_angle, double sigma0,
                   const CurvatureBounds& bounds, double strength) {
  if (y_star.size() != 2) throw std::invalid_argument("plume_cost: y* must be planar");
  if (!(sigma0 > 0.0)) throw std::invalid_argument("plume_cost: sigma0 must be positive");
  if (!(strength > 0.0)) throw std::invalid_argument("plume_cost: strength must be positive");
  check_bounds_dim(bounds, 2, "plume_cost");
  return std::make_shared<PlumeCost>(y_star, wind_angle, sigma0, strength, bounds);
}

double plume_peak(double sigma0, double strength) {
  return strength / std::sqrt(2.0 * std::numbers::pi * sigma0);
}

CostPtr bench1_cost(const CurvatureBounds& bounds) {
  check_bounds_dim(bounds, 1, "bench1_cost");
  return std::make_shared<Bench1Cost>(bounds);
}

CostPtr bench2_cost(const CurvatureBounds& bounds) {
  check_bounds_dim(bounds, 2, "bench2_cost");
  return std::make_shared<Bench2Cost>(bounds);
}

CostPtr bench3_cost(const CurvatureBounds& bounds) {
  check_bounds_dim(bounds, 2, "bench3_cost");
  return std::make_shared<Bench3Cost>(bounds);
}

}  // namespace esc
