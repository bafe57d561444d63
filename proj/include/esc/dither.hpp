#pragma once

#include <cstdint>
#include <random>

#include "esc/numerics.hpp"

namespace esc {

enum class DitherKind { kNone, kSinusoidal, kGaussian };

/// Per-channel dither description. Sinusoidal channels produce
/// a_i sin(w_i t + phi_i); Gaussian channels draw N(0, std_i^2) once per call.
struct DitherSpec {
  DitherKind kind = DitherKind::kNone;
  VectorXd amplitudes;
  VectorXd frequencies;
  VectorXd phases;
  VectorXd stddev;

  static DitherSpec none(int n);
  static DitherSpec sinusoidal(VectorXd amplitudes, VectorXd frequencies, VectorXd phases);
  static DitherSpec gaussian(VectorXd stddev);

  int dim() const;
  /// Throws std::invalid_argument on negative amplitudes/deviations or
  /// mismatched channel counts.
  void validate() const;
  /// Upper bound on |d_t|_inf for sinusoidal dither; zero for none.
  double bound() const;
};

/// Stateful sampler; Gaussian draws come from a seeded mt19937_64 so two
/// generators with the same seed yield identical sequences.
class DitherGenerator {
 public:
  DitherGenerator(DitherSpec spec, std::uint64_t seed);

  VectorXd sample(double t);
  const DitherSpec& spec() const { return spec_; }

 private:
  DitherSpec spec_;
  std::mt19937_64 rng_;
  std::normal_distribution<double> normal_{0.0, 1.0};
};

}  // namespace esc
