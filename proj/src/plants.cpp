#include "esc/plants.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <unsupported/Eigen/MatrixFunctions>

namespace esc {

namespace {

void require_size(const VectorXd& v, int n, const char* what) {
  if (v.size() != n) {
    std::ostringstream msg;
    msg << what << ": expected size " << n << ", got " << v.size();
    throw std::invalid_argument(msg.str());
  }
}

class Bench1Plant final : public ContinuousPlant {
 public:
  explicit Bench1Plant(int substeps) : ContinuousPlant(substeps, Integrator::kRk4) {}
  int state_dim() const override { return 1; }
  int input_dim() const override { return 1; }
  int output_dim() const override { return 1; }

  VectorXd derivative(const VectorXd& x, const VectorXd& held, double) const override {
    return held - x;
  }
  VectorXd output(const VectorXd& x, const VectorXd&) const override { return x; }
};

class Bench2Plant final : public ContinuousPlant {
 public:
  Bench2Plant(MatrixXd f, int substeps)
      : ContinuousPlant(substeps, Integrator::kRk4), f_(std::move(f)) {}
  int state_dim() const override { return 2; }
  int input_dim() const override { return 2; }
  int output_dim() const override { return 2; }

  static Eigen::Matrix2d rotation(const VectorXd& x) {
    const double a = x(0) + x(1);
    Eigen::Matrix2d r;
    r << std::cos(a), -std::sin(a), std::sin(a), std::cos(a);
    return r;
  }
  static Eigen::Vector2d disturbance(double t) { return {std::sin(2.0 * t), std::cos(t)}; }

  VectorXd hold(const VectorXd& x, const VectorXd& v, double t) const override {
    // Cancels the sampled disturbance and imposes x' = F (x - r) at t_k.
    return rotation(x).transpose() * (f_ * (x - v) - disturbance(t));
  }
  VectorXd derivative(const VectorXd& x, const VectorXd& held, double t) const override {
    return rotation(x) * held + disturbance(t);
  }
  VectorXd output(const VectorXd& x, const VectorXd&) const override { return x; }

 private:
  MatrixXd f_;
};

class Bench3Plant final : public ContinuousPlant {
 public:
  Bench3Plant(int substeps, Integrator method) : ContinuousPlant(substeps, method) {}
  int state_dim() const override { return 3; }
  int input_dim() const override { return 2; }
  int output_dim() const override { return 2; }

  VectorXd hold(const VectorXd&, const VectorXd& v, double) const override {
    return bench3_transform(v);
  }
  VectorXd derivative(const VectorXd& x, const VectorXd& u, double) const override {
    VectorXd dx(3);
    dx << -x(0) + u(1) * u(1), -x(1) + u(0), -x(2) + u(1) * x(1);
    return dx;
  }
  VectorXd output(const VectorXd& x, const VectorXd& v) const override {
    const VectorXd u = bench3_transform(v);
    VectorXd y(2);
    y << x(1) + x(2), x(0) + x(1) - u(0);
    return y;
  }
};

class DroneSurrogate final : public ContinuousPlant {
 public:
  DroneSurrogate(double kp, double kd, int substeps)
      : ContinuousPlant(substeps, Integrator::kRk4), kp_(kp), kd_(kd) {}
  int state_dim() const override { return 4; }
  int input_dim() const override { return 2; }
  int output_dim() const override { return 2; }

  VectorXd derivative(const VectorXd& x, const VectorXd& held, double) const override {
    VectorXd dx(4);
    dx.head<2>() = x.tail<2>();
    dx.tail<2>() = kp_ * (held - x.head<2>()) - kd_ * x.tail<2>();
    return dx;
  }
  VectorXd output(const VectorXd& x, const VectorXd&) const override { return x.head<2>(); }

 private:
  double kp_;
  double kd_;
};

}  // namespace

LinearPlant::LinearPlant(MatrixXd a, MatrixXd b, MatrixXd c, MatrixXd d)
    : a_(std::move(a)), b_(std::move(b)), c_(std::move(c)), d_(std::move(d)) {
  const auto nx = a_.rows();
  if (nx < 1 || a_.cols() != nx || b_.rows() != nx || c_.cols() != nx ||
      d_.rows() != c_.rows() || d_.cols() != b_.cols()) {
    throw std::invalid_argument("LinearPlant: inconsistent A, B, C, D sizes");
  }
}

VectorXd LinearPlant::step(const VectorXd& x, const VectorXd& v, double, double) const {
  require_size(x, state_dim(), "LinearPlant::step state");
  require_size(v, input_dim(), "LinearPlant::step input");
  return a_ * x + b_ * v;
}

VectorXd LinearPlant::output(const VectorXd& x, const VectorXd& v) const {
  require_size(x, state_dim(), "LinearPlant::output state");
  require_size(v, input_dim(), "LinearPlant::output input");
  return c_ * x + d_ * v;
}

ContinuousPlant::ContinuousPlant(int substeps, Integrator method)
    : substeps_(substeps), method_(method) {
  if (substeps < 1) throw std::invalid_argument("ContinuousPlant: substeps must be >= 1");
}

VectorXd ContinuousPlant::hold(const VectorXd&, const VectorXd& v, double) const { return v; }

VectorXd ContinuousPlant::step(const VectorXd& x, const VectorXd& v, double t, double dt) const {
  require_size(x, state_dim(), "ContinuousPlant::step state");
  require_size(v, input_dim(), "ContinuousPlant::step input");
  if (!(dt > 0.0)) throw std::invalid_argument("ContinuousPlant::step: dt must be positive");
  const VectorXd u = hold(x, v, t);
  const double h = dt / substeps_;
  VectorXd s = x;
  for (int i = 0; i < substeps_; ++i) {
    const double ti = t + i * h;
    if (method_ == Integrator::kEuler) {
      s += h * derivative(s, u, ti);
      continue;
    }
    const VectorXd k1 = derivative(s, u, ti);
    const VectorXd k2 = derivative(s + 0.5 * h * k1, u, ti + 0.5 * h);
    const VectorXd k3 = derivative(s + 0.5 * h * k2, u, ti + 0.5 * h);
    const VectorXd k4 = derivative(s + h * k3, u, ti + h);
    s += (h / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
  }
  return s;
}

std::shared_ptr<const LinearPlant> second_order_plant(double zeta, double omega_n, double dt) {
  if (!(dt > 0.0) || !(omega_n > 0.0) || !(zeta >= 0.0)) {
    throw std::invalid_argument("second_order_plant: need dt > 0, omega_n > 0, zeta >= 0");
  }
  // exp([[Ac, Bc], [0, 0]] dt) = [[Ad, Bd], [0, I]].
  Eigen::Matrix3d aug = Eigen::Matrix3d::Zero();
  aug(0, 1) = 1.0;
  aug(1, 0) = -omega_n * omega_n;
  aug(1, 1) = -2.0 * zeta * omega_n;
  aug(1, 2) = omega_n * omega_n;
  const Eigen::Matrix3d e = (aug * dt).exp();
  MatrixXd c(1, 2);
  c << 1.0, 0.0;
  return std::make_shared<LinearPlant>(MatrixXd(e.topLeftCorner<2, 2>()),
                                       MatrixXd(e.topRightCorner<2, 1>()), c,
                                       MatrixXd::Zero(1, 1));
}

PlantPtr bench1_plant(int substeps) { return std::make_shared<Bench1Plant>(substeps); }

PlantPtr bench2_plant(const MatrixXd& f, int substeps) {
  if (f.rows() != 2 || f.cols() != 2) {
    throw std::invalid_argument("bench2_plant: F must be 2x2");
  }
  return std::make_shared<Bench2Plant>(f, substeps);
}

VectorXd bench3_transform(const VectorXd& r) {
  require_size(r, 2, "bench3_transform");
  const double s = std::sqrt(std::max(r(1), 0.0));
  VectorXd u(2);
  u << r(0) / (1.0 + s), s;
  return u;
}

PlantPtr bench3_plant(int substeps, Integrator method) {
  return std::make_shared<Bench3Plant>(substeps, method);
}

PlantPtr drone_surrogate_plant(double kp, double kd, int substeps) {
  if (!(kp > 0.0) || !(kd > 0.0)) {
    throw std::invalid_argument("drone_surrogate_plant: gains must be positive");
  }
  return std::make_shared<DroneSurrogate>(kp, kd, substeps);
}

}  // namespace esc
