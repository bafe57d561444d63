#include "esc/verification.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Cholesky>

#include "esc/estimator.hpp"

namespace esc {

namespace {

using Clock = std::chrono::steady_clock;
using Rng = std::mt19937_64;

constexpr int kMaxRedraws = 50;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

int uniform_int(Rng& rng, int lo, int hi) {
  return std::uniform_int_distribution<int>(lo, hi)(rng);
}

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

VectorXd gaussian_vector(Rng& rng, int n, double scale = 1.0) {
  std::normal_distribution<double> normal(0.0, scale);
  VectorXd v(n);
  for (int i = 0; i < n; ++i) v(i) = normal(rng);
  return v;
}

MatrixXd gaussian_matrix(Rng& rng, int rows, int cols) {
  std::normal_distribution<double> normal(0.0, 1.0);
  MatrixXd m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < cols; ++j) m(i, j) = normal(rng);
  }
  return m;
}

MatrixXd random_symmetric(Rng& rng, int n) {
  const MatrixXd g = gaussian_matrix(rng, n, n);
  return 0.5 * (g + g.transpose());
}

/// Well-conditioned SPD matrix with eigenvalues spread over [lo, hi].
MatrixXd random_spd(Rng& rng, int n, double lo, double hi) {
  const MatrixXd q = gaussian_matrix(rng, n, n).householderQr().householderQ();
  VectorXd d(n);
  for (int i = 0; i < n; ++i) d(i) = std::exp(uniform(rng, std::log(lo), std::log(hi)));
  return q * d.asDiagonal() * q.transpose();
}

VectorXd unit_sphere(Rng& rng, int n) {
  VectorXd v;
  do {
    v = gaussian_vector(rng, n);
  } while (v.norm() < 1e-12);
  return v / v.norm();
}

/// Sum of a quadratic and ridge sinusoids beta_i sin(omega_i a_i' y + phi_i).
struct PerturbedQuadratic {
  MatrixXd h0;
  VectorXd center;
  MatrixXd dirs;  // columns a_i
  VectorXd beta, omega, phase;

  double value(const VectorXd& y) const {
    const VectorXd e = y - center;
    double j = 0.5 * e.dot(h0 * e);
    for (Eigen::Index i = 0; i < dirs.cols(); ++i) {
      j += beta(i) * std::sin(omega(i) * dirs.col(i).dot(y) + phase(i));
    }
    return j;
  }
  VectorXd gradient(const VectorXd& y) const {
    VectorXd g = h0 * (y - center);
    for (Eigen::Index i = 0; i < dirs.cols(); ++i) {
      g += beta(i) * omega(i) * std::cos(omega(i) * dirs.col(i).dot(y) + phase(i)) * dirs.col(i);
    }
    return g;
  }
  /// -P <= Hessian - h0 <= P for every y.
  MatrixXd perturbation_envelope() const {
    MatrixXd p = MatrixXd::Zero(h0.rows(), h0.cols());
    for (Eigen::Index i = 0; i < dirs.cols(); ++i) {
      p += std::abs(beta(i)) * omega(i) * omega(i) * dirs.col(i) * dirs.col(i).transpose();
    }
    return p;
  }
};

}  // namespace

std::string PropertyReport::summary() const {
  std::ostringstream out;
  out << name << ": " << (passed() ? "PASS" : "FAIL") << " checked=" << checked << "/" << trials
      << " violations=" << violations << " worst=" << worst << " time=" << seconds << "s";
  return out.str();
}

PropertyReport check_estimator_exactness(int trials, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  PropertyReport rep;
  rep.name = "estimator-exactness";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const int n = uniform_int(rng, 1, 4);
      const int horizon = uniform_int(rng, n, n + 6);
      const MatrixXd h = random_symmetric(rng, n);
      const VectorXd y_star = gaussian_vector(rng, n, 3.0);
      const VectorXd r = gaussian_vector(rng, n, 3.0);
      auto cost = [&](const VectorXd& y) { return 0.5 * (y - y_star).dot(h * (y - y_star)); };

      SampleBatch batch(horizon, n);
      // Outputs wander around a displaced point, i.e. large tracking error
      // and transients.
      const VectorXd offset = gaussian_vector(rng, n, uniform(rng, 0.0, 2.0));
      for (int k = 0; k <= horizon; ++k) {
        const VectorXd y = r + offset + gaussian_vector(rng, n, uniform(rng, 0.05, 1.0));
        batch.push(y, cost(y));
      }
      batch.set_reference(r);
      const auto bounds = CurvatureBounds::exact(SymMatrix(h));
      const GradientEstimate est = estimate_gradient(batch, bounds);
      if (!est.valid()) continue;
      const VectorXd truth = h * (r - y_star);
      const double err = (est.theta_hat() - truth).norm() / (1.0 + truth.norm());
      rep.worst = std::max(rep.worst, err / 1e-9);
      if (err > 1e-9) ++rep.violations;
      ++rep.checked;
      break;
    }
  }
  rep.seconds = seconds_since(start);
  return rep;
}

PropertyReport check_ellipsoid_containment(int trials, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  PropertyReport rep;
  rep.name = "ellipsoid-containment";
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    for (int attempt = 0; attempt < kMaxRedraws; ++attempt) {
      const int n = uniform_int(rng, 1, 3);
      const int horizon = uniform_int(rng, n, n + 8);
      const int ridges = uniform_int(rng, 1, 3);
      PerturbedQuadratic f;
      f.h0 = random_symmetric(rng, n);
      f.center = gaussian_vector(rng, n, 2.0);
      f.dirs = MatrixXd(n, ridges);
      f.beta = VectorXd(ridges);
      f.omega = VectorXd(ridges);
      f.phase = VectorXd(ridges);
      for (int i = 0; i < ridges; ++i) {
        f.dirs.col(i) = unit_sphere(rng, n);
        f.beta(i) = uniform(rng, -0.5, 0.5);
        f.omega(i) = uniform(rng, 0.2, 3.0);
        f.phase(i) = uniform(rng, 0.0, 6.283185307179586);
      }
      // Declared bounds: the exact envelope, sometimes padded.
      const MatrixXd env = f.perturbation_envelope();
      const double pad = uniform(rng, 0.0, 1.0) < 0.5 ? 0.0 : uniform(rng, 0.0, 0.5);
      const MatrixXd eye = MatrixXd::Identity(n, n);
      const MatrixXd lo = f.h0 - env - pad * eye;
      const MatrixXd hi = f.h0 + env + pad * eye;
      const CurvatureBounds bounds{SymMatrix(0.5 * (lo + lo.transpose())),
                                  SymMatrix(0.5 * (hi + hi.transpose()))};

      const VectorXd r = gaussian_vector(rng, n, 2.0);
      const double spread = std::exp(uniform(rng, std::log(1e-3), std::log(2.0)));
      const VectorXd offset = gaussian_vector(rng, n, uniform(rng, 0.0, 1.0));
      SampleBatch batch(horizon, n);
      for (int k = 0; k <= horizon; ++k) {
        const VectorXd y = r + offset + gaussian_vector(rng, n, spread);
        batch.push(y, f.value(y));
      }
      batch.set_reference(r);
      const GradientEstimate est = estimate_gradient(batch, bounds);
      if (!est.valid()) continue;
      const double res = error_ellipsoid_residual(est, f.gradient(r));
      rep.worst = std::max(rep.worst, res);
      if (res > 1.0 + 1e-9) ++rep.violations;
      ++rep.checked;
      break;
    }
  }
  rep.seconds = seconds_since(start);
  return rep;
}

PropertyReport check_step_size_game(int trials, int samples, StepSizeRule rule,
                                    std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  PropertyReport rep;
  rep.name = std::string("step-size-game/") + std::string(to_string(rule));
  rep.trials = trials;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = uniform_int(rng, 1, 3);
    const MatrixXd cov = random_spd(rng, n, 1e-3, 1.0);
    const MatrixXd k = random_spd(rng, n, 0.1, 2.0);
    // Scale theta so the worst-case ratio straddles one.
    const VectorXd theta = unit_sphere(rng, n) * std::exp(uniform(rng, std::log(0.05), std::log(20.0)));
    const GradientEstimate est = GradientEstimate::from_covariance(theta, SymMatrix(cov));
    const double alpha = compute_step_size(est, SymMatrix(k), rule);

    // Boundary of the error set as the image of the unit sphere:
    // sqrt form  {L z}, L L' = Lambda   (theta' Lambda^-1 theta <= 1)
    // full form  {Lambda z}              (|Lambda^-1 theta| <= 1)
    const MatrixXd map = rule == StepSizeRule::kSqrtForm ? MatrixXd(cov.llt().matrixL()) : cov;
    const VectorXd k_theta = k * theta;
    const double descent = theta.dot(k_theta);
    double best = -1e300;
    for (int s = 0; s < samples; ++s) {
      best = std::max(best, (map * unit_sphere(rng, n)).dot(k_theta));
    }
    const double sampled = std::max(0.0, 1.0 - best / descent);
    const double gap = sampled - alpha;
    rep.worst = std::max(rep.worst, gap);
    if (alpha > sampled + 1e-9 || gap > 1e-3) ++rep.violations;
    ++rep.checked;
  }
  rep.seconds = seconds_since(start);
  return rep;
}

PropertyReport check_omega_interval(int trials, int samples, std::uint64_t seed) {
  const auto start = Clock::now();
  Rng rng(seed);
  PropertyReport rep;
  rep.name = "omega-interval";
  rep.trials = trials;
  rep.worst = 1.0;
  for (int trial = 0; trial < trials; ++trial) {
    const int n = uniform_int(rng, 1, 4);
    // Range R R' with a known factor, possibly rank deficient.
    const MatrixXd factor = gaussian_matrix(rng, n, uniform_int(rng, 1, n));
    const MatrixXd range = factor * factor.transpose();
    const MatrixXd med = random_symmetric(rng, n);
    const MatrixXd lo = med - 0.5 * range;
    const MatrixXd hi = med + 0.5 * range;
    const CurvatureBounds bounds{SymMatrix(0.5 * (lo + lo.transpose())),
                                 SymMatrix(0.5 * (hi + hi.transpose()))};
    const VectorXd dy = gaussian_vector(rng, n);
    const VectorXd e = uniform(rng, 0.0, 1.0) < 0.1 ? VectorXd::Zero(n)
                                                    : gaussian_vector(rng, n, 2.0);
    const ErrorInterval iv = omega_interval(dy, e, bounds);

    const auto omega = [&](const MatrixXd& s1, const MatrixXd& s2) {
      const MatrixXd ha = med + 0.5 * factor * s1 * factor.transpose();
      const MatrixXd hb = med + 0.5 * factor * s2 * factor.transpose();
      return 0.5 * dy.dot(ha * dy) - e.dot(hb * dy);
    };

    const int m = static_cast<int>(factor.cols());
    bool escaped = false;
    const double slack = 1e-9 * (1.0 + std::abs(iv.center) + iv.halfwidth);
    for (int s = 0; s < samples; ++s) {
      MatrixXd s1 = random_symmetric(rng, m);
      MatrixXd s2 = random_symmetric(rng, m);
      s1 *= uniform(rng, 0.0, 1.0) / std::max(1e-12, s1.operatorNorm());
      s2 *= uniform(rng, 0.0, 1.0) / std::max(1e-12, s2.operatorNorm());
      if (!iv.contains(omega(s1, s2), slack)) escaped = true;
    }

    // Extremal pair: H1 = upper bound, H2 the reflection aligning R'dy with -R'e.
    const VectorXd a = -(factor.transpose() * e);
    const VectorXd b = factor.transpose() * dy;
    MatrixXd s2 = MatrixXd::Identity(m, m);
    if (a.norm() > 1e-12 && b.norm() > 1e-12) {
      const VectorXd u = b / b.norm() - a / a.norm();
      if (u.norm() > 1e-12) s2 -= 2.0 * (u / u.norm()) * (u / u.norm()).transpose();
    }
    const double top = omega(MatrixXd::Identity(m, m), s2);
    if (!iv.contains(top, slack)) escaped = true;
    const double reach = iv.halfwidth > 1e-12 ? (top - iv.center) / iv.halfwidth : 1.0;
    rep.worst = std::min(rep.worst, reach);
    if (escaped || reach < 0.95) ++rep.violations;
    ++rep.checked;
  }
  rep.seconds = seconds_since(start);
  return rep;
}

}  // namespace esc
