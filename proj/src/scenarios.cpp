#include "esc/scenarios.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>
#include <vector>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

namespace esc {

namespace {

using Defaults = std::map<std::string, std::string>;

Defaults common_defaults() {
  return {
      {"controller.alpha_min", "0.01"},
      {"controller.step_size_rule", "full_form"},
      {"estimator.w_max", "1e12"},
      {"estimator.cond_thresh", "1e10"},
      {"estimator.min_eigenvalue", "1e-12"},
      {"dither.kind", "none"},
      {"dither.amplitude", "0"},
      {"dither.frequency", "1"},
      {"dither.phase", "0"},
      {"dither.stddev", "0"},
      {"run.seed", "0"},
  };
}

Defaults scenario_defaults(Scenario s) {
  switch (s) {
    case Scenario::kIllustrative:
      return {
          {"plant.zeta", "0.1"},
          {"plant.omega_n", "1.0"},
          {"cost.hessian", "5"},
          {"cost.y_star", "10"},
          {"bounds.lower", "0"},
          {"bounds.upper", "10"},
          {"controller.gain", "0.0035"},
          {"controller.horizon", "5"},
          {"dither.kind", "sinusoidal"},
          {"dither.amplitude", "0.001"},
          {"dither.frequency", "1"},
          {"run.dt", "0.1"},
          {"run.duration", "60"},
          {"run.x0", "0 0"},
          {"run.r0", "0"},
      };
    case Scenario::kDrone:
      return {
          {"plant.kp", "16"},
          {"plant.kd", "7.2"},
          {"plant.substeps", "10"},
          {"cost.y_star", "200 100"},
          {"cost.wind_angle", "-0.7853981633974483"},
          {"cost.sigma0", "30"},
          {"cost.strength", "370"},
          {"bounds.lower", "-0.3"},
          {"bounds.upper", "0.15"},
          {"controller.gain", "1"},
          {"controller.horizon", "20"},
          {"dither.kind", "gaussian"},
          {"dither.stddev", "1 1"},
          {"run.dt", "0.05"},
          {"run.duration", "900"},
          {"run.x0", "150 30 0 0"},
          {"run.r0", "150 30"},
      };
    case Scenario::kBench1:
      return {
          {"plant.substeps", "10"},
          {"bounds.lower", "-2"},
          {"bounds.upper", "2"},
          {"controller.gain", "0.5"},
          {"controller.horizon", "5"},
          {"dither.kind", "sinusoidal"},
          {"dither.amplitude", "0.001"},
          {"dither.frequency", "1"},
          {"run.dt", "0.1"},
          {"run.duration", "20"},
          {"run.x0", "0.5"},
          {"run.r0", "0.5"},
      };
    case Scenario::kBench2:
      return {
          {"plant.f", "-10"},
          {"plant.substeps", "10"},
          {"bounds.lower", "0"},
          {"bounds.upper", "10"},
          {"controller.gain", "0.5"},
          {"controller.horizon", "5"},
          {"run.dt", "0.05"},
          {"run.duration", "25"},
          {"run.x0", "0 0"},
          {"run.r0", "0 0"},
      };
    case Scenario::kBench3:
      return {
          {"plant.substeps", "10"},
          {"plant.integrator", "rk4"},
          {"controller.project_reference", "false"},
          {"bounds.lower", "0"},
          {"bounds.upper", "10"},
          {"controller.gain", "0.1"},
          {"controller.horizon", "5"},
          {"dither.kind", "sinusoidal"},
          {"dither.amplitude", "0.001 0.001"},
          {"dither.frequency", "1 2"},
          {"dither.phase", "0 0"},
          {"run.dt", "0.25"},
          {"run.duration", "30"},
          {"run.x0", "0.5 0.234315 0.165685"},
          {"run.r0", "0.4 0.5"},
      };
  }
  return {};
}

std::vector<double> parse_numbers(const std::string& key, const std::string& text) {
  std::vector<double> out;
  const char* p = text.data();
  const char* end = p + text.size();
  while (p < end) {
    if (*p == ' ' || *p == '\t' || *p == ',') {
      ++p;
      continue;
    }
    double v = 0.0;
    const auto [next, ec] = std::from_chars(p, end, v);
    if (ec != std::errc() || !std::isfinite(v)) {
      throw ConfigError("key '" + key + "': cannot parse '" + text + "' as numbers");
    }
    out.push_back(v);
    p = next;
  }
  if (out.empty()) throw ConfigError("key '" + key + "': expected a value");
  return out;
}

}  // namespace

std::string_view to_string(Scenario s) {
  switch (s) {
    case Scenario::kIllustrative: return "illustrative";
    case Scenario::kDrone: return "drone";
    case Scenario::kBench1: return "bench1";
    case Scenario::kBench2: return "bench2";
    case Scenario::kBench3: return "bench3";
  }
  return "unknown";
}

std::optional<Scenario> parse_scenario(std::string_view name) {
  for (Scenario s : {Scenario::kIllustrative, Scenario::kDrone, Scenario::kBench1,
                     Scenario::kBench2, Scenario::kBench3}) {
    if (to_string(s) == name) return s;
  }
  return std::nullopt;
}

Settings Settings::defaults(Scenario scenario) {
  Settings out;
  out.values_ = common_defaults();
  for (auto& [k, v] : scenario_defaults(scenario)) out.values_[k] = v;
  return out;
}

Settings Settings::gain_defaults() {
  Settings out;
  out.values_ = {
      {"gain.gain", "0.5"},
      {"gain.h_upper", "2"},
      {"gain.gamma", "0"},
      {"gain.tol", "1e-9"},
      {"gain.dim", "1"},
  };
  return out;
}

void Settings::merge_text(const std::string& text, const std::string& origin) {
  boost::property_tree::ptree tree;
  std::istringstream in(text);
  try {
    boost::property_tree::ini_parser::read_ini(in, tree);
  } catch (const boost::property_tree::ini_parser_error& e) {
    throw ConfigError(origin + ": " + e.message() + " (line " + std::to_string(e.line()) + ")");
  }
  for (const auto& [section, body] : tree) {
    if (body.empty()) {
      throw ConfigError(origin + ": key '" + section + "' must sit inside a [section]");
    }
    for (const auto& [key, value] : body) {
      const std::string full = section + "." + key;
      if (!values_.count(full)) throw ConfigError(origin + ": unknown key '" + full + "'");
      values_[full] = value.data();
    }
  }
}

void Settings::merge_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config file '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  merge_text(text.str(), path.string());
}

void Settings::set(const std::string& key, const std::string& value) {
  if (!values_.count(key)) throw ConfigError("unknown key '" + key + "'");
  values_[key] = value;
}

const std::string& Settings::raw(const std::string& key) const {
  const auto it = values_.find(key);
  if (it == values_.end()) throw ConfigError("missing key '" + key + "'");
  return it->second;
}

double Settings::number(const std::string& key) const {
  const auto v = parse_numbers(key, raw(key));
  if (v.size() != 1) throw ConfigError("key '" + key + "': expected a single number");
  return v.front();
}

long Settings::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15) {
    throw ConfigError("key '" + key + "': expected an integer");
  }
  return static_cast<long>(v);
}

bool Settings::flag(const std::string& key) const {
  const std::string& v = raw(key);
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  throw ConfigError("key '" + key + "': expected true or false, got '" + v + "'");
}

VectorXd Settings::vector(const std::string& key, int n) const {
  const auto v = parse_numbers(key, raw(key));
  if (static_cast<int>(v.size()) != n) {
    throw ConfigError("key '" + key + "': expected " + std::to_string(n) + " numbers, got " +
                      std::to_string(v.size()));
  }
  return Eigen::Map<const VectorXd>(v.data(), n);
}

MatrixXd Settings::matrix(const std::string& key, int n) const {
  const auto v = parse_numbers(key, raw(key));
  if (v.size() == 1) return v.front() * MatrixXd::Identity(n, n);
  if (static_cast<int>(v.size()) != n * n) {
    throw ConfigError("key '" + key + "': expected 1 or " + std::to_string(n * n) + " numbers");
  }
  MatrixXd m(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) m(i, j) = v[static_cast<std::size_t>(i * n + j)];
  }
  return m;
}

std::string Settings::dump() const {
  std::ostringstream out;
  std::string section;
  for (const auto& [key, value] : values_) {
    const auto dot = key.find('.');
    const std::string sec = key.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << key.substr(dot + 1) << " = " << value << '\n';
  }
  return out.str();
}

namespace {

SymMatrix sym(const Settings& s, const std::string& key, int n) {
  try {
    return SymMatrix(s.matrix(key, n));
  } catch (const std::invalid_argument& e) {
    throw ConfigError("key '" + key + "': " + e.what());
  }
}

DitherSpec build_dither(const Settings& s, int n) {
  const std::string& kind = s.raw("dither.kind");
  if (kind == "none") return DitherSpec::none(n);
  if (kind == "sinusoidal") {
    return DitherSpec::sinusoidal(s.vector("dither.amplitude", n), s.vector("dither.frequency", n),
                                  s.vector("dither.phase", n));
  }
  if (kind == "gaussian") return DitherSpec::gaussian(s.vector("dither.stddev", n));
  throw ConfigError("key 'dither.kind': expected none, sinusoidal or gaussian, got '" + kind + "'");
}

}  // namespace

double drone_plume_peak(const Settings& settings) {
  return plume_peak(settings.number("cost.sigma0"), settings.number("cost.strength"));
}

RunConfig build_run_config(Scenario scenario, const Settings& s) {
  try {
    RunConfig cfg;
    int n = 1;
    switch (scenario) {
      case Scenario::kIllustrative: {
        const double dt = s.number("run.dt");
        cfg.plant = second_order_plant(s.number("plant.zeta"), s.number("plant.omega_n"), dt);
        const CurvatureBounds bounds(sym(s, "bounds.lower", 1), sym(s, "bounds.upper", 1));
        cfg.cost = quadratic_cost(sym(s, "cost.hessian", 1), s.vector("cost.y_star", 1), bounds);
        break;
      }
      case Scenario::kDrone: {
        n = 2;
        const auto substeps = static_cast<int>(s.integer("plant.substeps"));
        cfg.plant = drone_surrogate_plant(s.number("plant.kp"), s.number("plant.kd"), substeps);
        const CurvatureBounds bounds(sym(s, "bounds.lower", 2), sym(s, "bounds.upper", 2));
        cfg.cost = plume_cost(s.vector("cost.y_star", 2), s.number("cost.wind_angle"),
                              s.number("cost.sigma0"), bounds, s.number("cost.strength"));
        break;
      }
      case Scenario::kBench1: {
        cfg.plant = bench1_plant(static_cast<int>(s.integer("plant.substeps")));
        cfg.cost = bench1_cost({sym(s, "bounds.lower", 1), sym(s, "bounds.upper", 1)});
        break;
      }
      case Scenario::kBench2: {
        n = 2;
        cfg.plant = bench2_plant(s.matrix("plant.f", 2), static_cast<int>(s.integer("plant.substeps")));
        cfg.cost = bench2_cost({sym(s, "bounds.lower", 2), sym(s, "bounds.upper", 2)});
        break;
      }
      case Scenario::kBench3: {
        n = 2;
        const std::string& method = s.raw("plant.integrator");
        if (method != "rk4" && method != "euler") {
          throw ConfigError("key 'plant.integrator': expected rk4 or euler");
        }
        cfg.plant = bench3_plant(static_cast<int>(s.integer("plant.substeps")),
                                 method == "rk4" ? Integrator::kRk4 : Integrator::kEuler);
        cfg.cost = bench3_cost({sym(s, "bounds.lower", 2), sym(s, "bounds.upper", 2)});
        if (s.flag("controller.project_reference")) {
          cfg.projection = [](const VectorXd& r) {
            VectorXd p = r;
            p(1) = std::max(p(1), 0.0);
            return p;
          };
        }
        break;
      }
    }
    cfg.controller.gain = sym(s, "controller.gain", n);
    cfg.controller.alpha_min = s.number("controller.alpha_min");
    cfg.controller.horizon = static_cast<int>(s.integer("controller.horizon"));
    cfg.controller.rule = parse_step_size_rule(s.raw("controller.step_size_rule"));
    cfg.estimator.w_max = s.number("estimator.w_max");
    cfg.estimator.cond_thresh = s.number("estimator.cond_thresh");
    cfg.estimator.min_eigenvalue = s.number("estimator.min_eigenvalue");
    cfg.dither = build_dither(s, n);
    cfg.dt = s.number("run.dt");
    cfg.duration = s.number("run.duration");
    cfg.x0 = s.vector("run.x0", cfg.plant->state_dim());
    cfg.r0 = s.vector("run.r0", n);
    const long seed = s.integer("run.seed");
    if (seed < 0) throw ConfigError("key 'run.seed': must be non-negative");
    cfg.seed = static_cast<std::uint64_t>(seed);
    cfg.validate();
    return cfg;
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  } catch (const std::domain_error& e) {
    throw ConfigError(e.what());
  }
}

}  // namespace esc
