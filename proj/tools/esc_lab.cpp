// esc-lab: runs the extremum-seeking scenarios, gain checks and the
// randomized estimator / step-size property suites.

#include <charconv>
#include <cmath>
#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "esc/scenarios.hpp"
#include "esc/verification.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFailure = 1;
constexpr int kExitConfig = 2;

struct RunOptions {
  std::string config;
  std::string out;
  std::optional<std::uint64_t> seed;
  bool dump = false;
};

std::optional<std::uint64_t> env_seed() {
  const char* text = std::getenv("ESC_LAB_SEED");
  if (text == nullptr || *text == '\0') return std::nullopt;
  std::uint64_t v = 0;
  const std::string s(text);
  const auto [end, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || end != s.data() + s.size()) {
    throw esc::ConfigError("ESC_LAB_SEED: expected a non-negative integer, got '" + s + "'");
  }
  return v;
}

void print_run_summary(esc::Scenario scenario, const esc::RunResult& result) {
  const auto& trace = result.trace;
  std::cout << "scenario: " << esc::to_string(scenario) << '\n'
            << "samples: " << trace.size() << '\n'
            << "status: " << (result.diverged ? "diverged" : "completed");
  if (result.diverged) std::cout << " (" << result.report << ')';
  std::cout << '\n';
  if (trace.empty()) return;
  long nonzero = 0;
  long exploit = 0;
  for (const auto& row : trace) {
    if (row.alpha != 0.0) ++nonzero;
    if (row.mode == esc::Mode::kExploitation) ++exploit;
  }
  const auto& last = trace.back();
  const Eigen::IOFormat fmt(8, Eigen::DontAlignCols, " ", " ", "", "", "[", "]");
  std::cout << "final t: " << last.t << '\n'
            << "final r: " << last.r.transpose().format(fmt) << '\n'
            << "final y: " << last.y.transpose().format(fmt) << '\n'
            << "final J: " << last.cost << '\n'
            << "nonzero alpha: " << nonzero << " of " << trace.size() << '\n'
            << "exploitation steps: " << exploit << '\n';
}

int run_scenario(esc::Scenario scenario, const RunOptions& opt) {
  esc::Settings settings = esc::Settings::defaults(scenario);
  if (!opt.config.empty()) settings.merge_file(opt.config);
  if (opt.dump) {
    std::cout << settings.dump();
    return kExitOk;
  }
  esc::RunConfig cfg = esc::build_run_config(scenario, settings);
  if (opt.seed) {
    cfg.seed = *opt.seed;
  } else if (const auto s = env_seed()) {
    cfg.seed = *s;
  }
  const esc::RunResult result = esc::run_closed_loop(cfg);
  if (!opt.out.empty()) esc::emit_csv(result.trace, opt.out, cfg.plant->output_dim());
  print_run_summary(scenario, result);
  return result.diverged ? kExitFailure : kExitOk;
}

int matrix_dim(const esc::Settings& s) {
  auto count = [&](const std::string& key) {
    const std::string& raw = s.raw(key);
    int n = 0;
    bool in_token = false;
    for (char c : raw) {
      const bool sep = c == ' ' || c == '\t' || c == ',';
      if (!sep && !in_token) ++n;
      in_token = !sep;
    }
    return n;
  };
  for (const char* key : {"gain.gain", "gain.h_upper"}) {
    const int m = count(key);
    if (m > 1) {
      const int n = static_cast<int>(std::lround(std::sqrt(static_cast<double>(m))));
      if (n * n != m) throw esc::ConfigError(std::string("key '") + key + "': not a square matrix");
      return n;
    }
  }
  const long n = s.integer("gain.dim");
  if (n < 1) throw esc::ConfigError("key 'gain.dim': must be >= 1");
  return static_cast<int>(n);
}

int verify_gain_command(const std::string& config) {
  esc::Settings s = esc::Settings::gain_defaults();
  if (!config.empty()) s.merge_file(config);
  const int n = matrix_dim(s);
  esc::SymMatrix k = esc::SymMatrix::identity(n);
  esc::SymMatrix h = esc::SymMatrix::identity(n);
  try {
    k = esc::SymMatrix(s.matrix("gain.gain", n));
    h = esc::SymMatrix(s.matrix("gain.h_upper", n));
  } catch (const std::invalid_argument& e) {
    throw esc::ConfigError(e.what());
  }
  if (!(esc::min_eigenvalue(k) > 0.0)) throw esc::ConfigError("gain must be positive definite");
  const double gamma = s.number("gain.gamma");
  const double tol = s.number("gain.tol");
  const auto slack = k.matrix() - k.matrix() * (h.matrix() + gamma * esc::MatrixXd::Identity(n, n)) *
                                      k.matrix();
  const double margin = esc::min_eigenvalue(esc::SymMatrix(0.5 * (slack + slack.transpose())));
  const bool ok = esc::verify_gain(k, h, gamma, tol);
  std::cout << "gain condition K - K(H_upper + gamma I)K >= -tol: " << (ok ? "PASS" : "FAIL")
            << " (min eigenvalue " << margin << ", tol " << tol << ")\n";
  return ok ? kExitOk : kExitFailure;
}

struct PropertyOptions {
  std::string suite = "all";
  std::string rule = "both";
  std::optional<int> trials;
  int samples = 0;
  std::optional<std::uint64_t> seed;
};

int check_properties_command(const PropertyOptions& opt) {
  std::uint64_t seed = 20240601;
  if (opt.seed) {
    seed = *opt.seed;
  } else if (const auto s = env_seed()) {
    seed = *s;
  }
  auto want = [&](const char* name) { return opt.suite == "all" || opt.suite == name; };
  std::vector<esc::PropertyReport> reports;
  if (want("exactness")) reports.push_back(esc::check_estimator_exactness(opt.trials.value_or(100), seed));
  if (want("containment")) {
    reports.push_back(esc::check_ellipsoid_containment(opt.trials.value_or(1000), seed + 1));
  }
  if (want("step-size")) {
    const int samples = opt.samples > 0 ? opt.samples : 100000;
    if (opt.rule != "full") {
      reports.push_back(esc::check_step_size_game(opt.trials.value_or(1000), samples,
                                                  esc::StepSizeRule::kSqrtForm, seed + 2));
    }
    if (opt.rule != "sqrt") {
      reports.push_back(esc::check_step_size_game(opt.trials.value_or(1000), samples,
                                                  esc::StepSizeRule::kFullForm, seed + 3));
    }
  }
  if (want("omega")) {
    const int samples = opt.samples > 0 ? opt.samples : 10000;
    reports.push_back(esc::check_omega_interval(opt.trials.value_or(500), samples, seed + 4));
  }
  bool ok = true;
  for (const auto& r : reports) {
    std::cout << r.summary() << '\n';
    ok = ok && r.passed();
  }
  return ok ? kExitOk : kExitFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Adaptive step-size extremum-seeking control lab"};
  app.require_subcommand(1);

  std::vector<std::pair<esc::Scenario, CLI::App*>> scenario_cmds;
  RunOptions run_opt;
  for (esc::Scenario s : {esc::Scenario::kIllustrative, esc::Scenario::kDrone,
                          esc::Scenario::kBench1, esc::Scenario::kBench2,
                          esc::Scenario::kBench3}) {
    auto* cmd = app.add_subcommand(std::string(esc::to_string(s)),
                                   "Run the " + std::string(esc::to_string(s)) + " scenario");
    cmd->add_option("--config", run_opt.config, "INI file overriding the defaults");
    cmd->add_option("--out", run_opt.out, "Write the trace as CSV");
    cmd->add_option("--seed", run_opt.seed, "RNG seed (overrides ESC_LAB_SEED)");
    cmd->add_flag("--dump-config", run_opt.dump, "Print the effective configuration and exit");
    scenario_cmds.emplace_back(s, cmd);
  }

  std::string gain_config;
  auto* gain_cmd = app.add_subcommand("verify-gain", "Check K - K(H_upper + gamma I)K >= 0");
  gain_cmd->add_option("--config", gain_config, "INI file with a [gain] section");

  PropertyOptions prop_opt;
  auto* prop_cmd = app.add_subcommand("check-properties", "Run the randomized property suites");
  prop_cmd->add_option("--suite", prop_opt.suite, "all, exactness, containment, step-size or omega")
      ->check(CLI::IsMember({"all", "exactness", "containment", "step-size", "omega"}));
  prop_cmd->add_option("--rule", prop_opt.rule, "Step-size rule: sqrt, full or both")
      ->check(CLI::IsMember({"sqrt", "full", "both"}));
  prop_cmd->add_option("--trials", prop_opt.trials, "Instances per suite")
      ->check(CLI::PositiveNumber);
  prop_cmd->add_option("--samples", prop_opt.samples, "Samples per instance")
      ->check(CLI::PositiveNumber);
  prop_cmd->add_option("--seed", prop_opt.seed, "RNG seed (overrides ESC_LAB_SEED)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    std::cerr << app.help();
    return kExitConfig;
  }

  try {
    for (const auto& [s, cmd] : scenario_cmds) {
      if (cmd->parsed()) return run_scenario(s, run_opt);
    }
    if (gain_cmd->parsed()) return verify_gain_command(gain_config);
    if (prop_cmd->parsed()) return check_properties_command(prop_opt);
  } catch (const esc::ConfigError& e) {
    std::cerr << "config error: " << e.what() << '\n';
    return kExitConfig;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitConfig;
}
