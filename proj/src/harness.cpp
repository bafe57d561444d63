#include "esc/harness.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <stdexcept>

namespace esc {

namespace {

bool out_of_range(const VectorXd& v) {
  return !v.allFinite() || v.cwiseAbs().maxCoeff() > kDivergenceThreshold;
}

void write_vector(std::ostream& out, const VectorXd& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) out << ',' << v(i);
}

void write_header(std::ostream& out, const char* name, Eigen::Index n) {
  for (Eigen::Index i = 0; i < n; ++i) out << ',' << name << '_' << i;
}

}  // namespace

void RunConfig::validate() const {
  if (!plant || !cost) throw std::invalid_argument("run: plant and cost are required");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw std::invalid_argument("run: dt must be positive");
  if (!(duration >= 0.0) || !std::isfinite(duration)) {
    throw std::invalid_argument("run: duration must be non-negative");
  }
  controller.validate();
  const int ny = plant->output_dim();
  if (plant->input_dim() != ny) {
    throw std::invalid_argument("run: plant command and output dimensions differ");
  }
  if (cost->dim() != ny) throw std::invalid_argument("run: cost dimension differs from output");
  if (controller.gain.dim() != ny) throw std::invalid_argument("run: gain dimension mismatch");
  if (controller.horizon < ny) throw std::invalid_argument("run: horizon must be >= output dim");
  if (x0.size() != plant->state_dim() || !x0.allFinite()) {
    throw std::invalid_argument("run: initial state has wrong size");
  }
  if (r0.size() != ny || !r0.allFinite()) {
    throw std::invalid_argument("run: initial reference has wrong size");
  }
  dither.validate();
  if (dither.dim() != ny) throw std::invalid_argument("run: dither dimension mismatch");
}

RunResult run_closed_loop(const RunConfig& config) {
  config.validate();
  RunResult result;
  const auto samples = static_cast<long>(std::llround(config.duration / config.dt));
  if (samples <= 0) return result;

  const PlantModel& plant = *config.plant;
  const CostModel& cost = *config.cost;
  DitherGenerator dither(config.dither, config.seed);
  SampleBatch batch(config.controller.horizon, plant.output_dim());
  ControllerState state{config.r0, Mode::kExploration, 0.0};
  VectorXd x = config.x0;
  result.trace.reserve(static_cast<std::size_t>(samples) + 1);

  for (long k = 0; k <= samples; ++k) {
    const double t = static_cast<double>(k) * config.dt;
    TraceRow row;
    row.t = t;
    row.r = state.reference;
    row.u = state.reference + dither.sample(t);
    row.y = plant.output(x, row.u);
    if (out_of_range(x) || out_of_range(row.y)) {
      std::ostringstream msg;
      msg << "diverged at t = " << t << " (|x| = " << x.norm() << ", |y| = " << row.y.norm()
          << ")";
      result.diverged = true;
      result.report = msg.str();
      return result;
    }
    row.cost = cost.evaluate(row.y);

    batch.push(row.y, row.cost);
    batch.set_reference(state.reference);
    if (batch.full()) {
      const GradientEstimate estimate =
          config.gradient_source ? config.gradient_source(state.reference, row.y, batch)
                                 : estimate_gradient(batch, cost.bounds(), config.estimator);
      state = controller_step(state, estimate, config.controller);
      if (config.projection) state.reference = config.projection(state.reference);
      row.info_norm = spectral_norm(estimate.information());
      if (estimate.valid()) row.theta = estimate.theta_hat();
    } else {
      state.mode = Mode::kExploration;
      state.last_alpha = 0.0;
    }
    row.alpha = state.last_alpha;
    row.mode = state.mode;
    result.trace.push_back(std::move(row));

    const TraceRow& last = result.trace.back();
    x = plant.step(x, last.u, t, config.dt);
    if (!state.reference.allFinite()) {
      result.diverged = true;
      result.report = "reference became non-finite";
      return result;
    }
  }
  result.report = "completed";
  return result;
}

void write_csv(const std::vector<TraceRow>& trace, std::ostream& out, int dim) {
  const Eigen::Index n = trace.empty() ? dim : trace.front().r.size();
  out << 't';
  write_header(out, "r", n);
  write_header(out, "u", n);
  write_header(out, "y", n);
  out << ",J,alpha,mode";
  write_header(out, "theta", n);
  out << ",info_norm\n";
  out << std::setprecision(15);
  for (const TraceRow& row : trace) {
    out << row.t;
    write_vector(out, row.r);
    write_vector(out, row.u);
    write_vector(out, row.y);
    out << ',' << row.cost << ',' << row.alpha << ',' << static_cast<int>(row.mode);
    if (row.theta) {
      write_vector(out, *row.theta);
    } else {
      for (Eigen::Index i = 0; i < n; ++i) out << ',';
    }
    out << ',';
    if (row.info_norm) out << *row.info_norm;
    out << '\n';
  }
}

void emit_csv(const std::vector<TraceRow>& trace, const std::filesystem::path& path,
              int dim) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  write_csv(trace, out, dim);
  out.flush();
  if (!out) throw std::runtime_error("failed writing '" + path.string() + "'");
}

}  // namespace esc
