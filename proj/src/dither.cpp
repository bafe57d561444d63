#include "esc/dither.hpp"

#include <cmath>
#include <stdexcept>
#include <utility>

namespace esc {

DitherSpec DitherSpec::none(int n) {
  DitherSpec s;
  s.amplitudes = VectorXd::Zero(n);
  return s;
}

DitherSpec DitherSpec::sinusoidal(VectorXd amplitudes, VectorXd frequencies, VectorXd phases) {
  DitherSpec s;
  s.kind = DitherKind::kSinusoidal;
  s.amplitudes = std::move(amplitudes);
  s.frequencies = std::move(frequencies);
  s.phases = std::move(phases);
  s.validate();
  return s;
}

DitherSpec DitherSpec::gaussian(VectorXd stddev) {
  DitherSpec s;
  s.kind = DitherKind::kGaussian;
  s.stddev = std::move(stddev);
  s.validate();
  return s;
}

int DitherSpec::dim() const {
  return static_cast<int>(kind == DitherKind::kGaussian ? stddev.size() : amplitudes.size());
}

void DitherSpec::validate() const {
  switch (kind) {
    case DitherKind::kNone:
      break;
    case DitherKind::kSinusoidal:
      if (frequencies.size() != amplitudes.size() || phases.size() != amplitudes.size()) {
        throw std::invalid_argument("dither: amplitudes, frequencies and phases differ in size");
      }
      if (!amplitudes.allFinite() || !frequencies.allFinite() || !phases.allFinite() ||
          (amplitudes.array() < 0.0).any()) {
        throw std::invalid_argument("dither: amplitudes must be finite and non-negative");
      }
      break;
    case DitherKind::kGaussian:
      if (!stddev.allFinite() || (stddev.array() < 0.0).any()) {
        throw std::invalid_argument("dither: standard deviations must be finite and non-negative");
      }
      break;
  }
  if (dim() < 1) throw std::invalid_argument("dither: needs at least one channel");
}

double DitherSpec::bound() const {
  if (kind == DitherKind::kSinusoidal) return amplitudes.cwiseAbs().maxCoeff();
  if (kind == DitherKind::kNone) return 0.0;
  throw std::logic_error("dither: gaussian dither is unbounded");
}

DitherGenerator::DitherGenerator(DitherSpec spec, std::uint64_t seed)
    : spec_(std::move(spec)), rng_(seed) {
  spec_.validate();
}

VectorXd DitherGenerator::sample(double t) {
  const int n = spec_.dim();
  switch (spec_.kind) {
    case DitherKind::kNone:
      return VectorXd::Zero(n);
    case DitherKind::kSinusoidal:
      return (spec_.amplitudes.array() *
              (spec_.frequencies.array() * t + spec_.phases.array()).sin())
          .matrix();
    case DitherKind::kGaussian: {
      VectorXd d(n);
      for (int i = 0; i < n; ++i) d(i) = spec_.stddev(i) * normal_(rng_);
      return d;
    }
  }
  return VectorXd::Zero(n);
}

}  // namespace esc
