#pragma once

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "esc/controller.hpp"
#include "esc/costs.hpp"
#include "esc/dither.hpp"
#include "esc/plants.hpp"

namespace esc {

/// Replaces the batch estimator, e.g. to feed perfect or corrupted
/// gradients. Called with the current reference, output and batch.
using GradientSource =
    std::function<GradientEstimate(const VectorXd& r, const VectorXd& y, const SampleBatch& batch)>;

/// Maps a reference onto the admissible set after every controller update.
using ReferenceProjection = std::function<VectorXd(const VectorXd& r)>;

/// Any state or output component beyond this magnitude aborts the run.
inline constexpr double kDivergenceThreshold = 1e9;

struct RunConfig {
  PlantPtr plant;
  CostPtr cost;
  ControllerConfig controller;
  EstimatorOptions estimator;
  DitherSpec dither;
  double dt = 0.1;
  double duration = 0.0;
  VectorXd x0;
  VectorXd r0;
  std::uint64_t seed = 0;
  GradientSource gradient_source;
  ReferenceProjection projection;

  /// Throws std::invalid_argument on inconsistent dimensions or parameters.
  void validate() const;
};

struct TraceRow {
  double t = 0.0;
  VectorXd r;
  VectorXd u;
  VectorXd y;
  double cost = 0.0;
  double alpha = 0.0;
  Mode mode = Mode::kExploration;
  std::optional<VectorXd> theta;
  /// Spectral norm of the information matrix; unset while the batch primes.
  std::optional<double> info_norm;
};

struct RunResult {
  std::vector<TraceRow> trace;
  bool diverged = false;
  std::string report;
};

/// Simulates round(duration / dt) + 1 controller samples. Each sample reads
/// y = g(x, r + d), updates the batch, estimates, steps the controller and
/// advances the plant. The first N samples only fill the batch.
RunResult run_closed_loop(const RunConfig& config);

/// `dim` sizes the vector columns of the header when the trace is empty.
void write_csv(const std::vector<TraceRow>& trace, std::ostream& out, int dim = 0);
/// Throws std::runtime_error naming the path on I/O failure.
void emit_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path,
              int dim = 0);

}  // namespace esc
