#pragma once

#include <memory>

#include "esc/numerics.hpp"

namespace esc {

/// Discrete-time plant x+ = f(x, v, t), y = g(x, v), where v is the command
/// issued by the extremum-seeking loop (reference plus dither). Plants that
/// need an inner stabilizer or an input transform apply it internally, so v
/// always lives in output space.
class PlantModel {
 public:
  virtual ~PlantModel() = default;

  virtual int state_dim() const = 0;
  virtual int input_dim() const = 0;
  virtual int output_dim() const = 0;

  /// Advances the state by one sample period dt starting at absolute time t.
  virtual VectorXd step(const VectorXd& x, const VectorXd& v, double t, double dt) const = 0;
  virtual VectorXd output(const VectorXd& x, const VectorXd& v) const = 0;
};

using PlantPtr = std::shared_ptr<const PlantModel>;

/// x+ = A x + B v, y = C x + D v.
class LinearPlant final : public PlantModel {
 public:
  LinearPlant(MatrixXd a, MatrixXd b, MatrixXd c, MatrixXd d);

  int state_dim() const override { return static_cast<int>(a_.rows()); }
  int input_dim() const override { return static_cast<int>(b_.cols()); }
  int output_dim() const override { return static_cast<int>(c_.rows()); }

  VectorXd step(const VectorXd& x, const VectorXd& v, double t, double dt) const override;
  VectorXd output(const VectorXd& x, const VectorXd& v) const override;

  const MatrixXd& a() const { return a_; }
  const MatrixXd& b() const { return b_; }
  const MatrixXd& c() const { return c_; }
  const MatrixXd& d() const { return d_; }

 private:
  MatrixXd a_, b_, c_, d_;
};

enum class Integrator { kRk4, kEuler };

/// Continuous-time plant sampled under zero-order hold. The held input is
/// computed once per sample from (x_k, v_k, t_k) and the vector field is
/// integrated with `substeps` fixed steps.
class ContinuousPlant : public PlantModel {
 public:
  ContinuousPlant(int substeps, Integrator method);

  VectorXd step(const VectorXd& x, const VectorXd& v, double t, double dt) const override;

  /// Input applied over [t_k, t_k + dt); identity by default.
  virtual VectorXd hold(const VectorXd& x, const VectorXd& v, double t) const;
  virtual VectorXd derivative(const VectorXd& x, const VectorXd& held, double t) const = 0;

  int substeps() const { return substeps_; }
  Integrator method() const { return method_; }

 private:
  int substeps_;
  Integrator method_;
};

/// Exact ZOH discretization of  y'' + 2 zeta wn y' + wn^2 y = wn^2 u  with
/// state (y, y').
std::shared_ptr<const LinearPlant> second_order_plant(double zeta, double omega_n, double dt);

/// x' = -x + u, y = x.
PlantPtr bench1_plant(int substeps = 10);

/// x' = R(x) u + w(t), y = x, with R the rotation by x1 + x2, w(t) =
/// (sin 2t, cos t), and the sampled stabilizer u = R(x_k)' (F (x_k - r) - w(t_k))
/// held over each period.
PlantPtr bench2_plant(const MatrixXd& f, int substeps = 10);

/// Steady-state inverse used by the three-state benchmark:
/// u1 = r1 / (1 + sqrt(r2)), u2 = sqrt(r2), with r2 clamped at zero.
VectorXd bench3_transform(const VectorXd& r);

/// x1' = -x1 + u2^2, x2' = -x2 + u1, x3' = -x3 + u2 x2; y1 = x2 + x3,
/// y2 = x1 + x2 - u1, with u = bench3_transform(v).
PlantPtr bench3_plant(int substeps = 10, Integrator method = Integrator::kRk4);

/// Planar double integrator p'' = kp (v - p) - kd p' standing in for a
/// position-controlled quadrotor. State (p, p'), output p.
PlantPtr drone_surrogate_plant(double kp, double kd, int substeps = 10);

}  // namespace esc
