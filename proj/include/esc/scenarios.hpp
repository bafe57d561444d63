#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "esc/harness.hpp"

namespace esc {

/// Bad configuration text, unknown keys or unparsable values.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class Scenario { kIllustrative, kDrone, kBench1, kBench2, kBench3 };

std::string_view to_string(Scenario s);
std::optional<Scenario> parse_scenario(std::string_view name);

/// Flat "section.key" -> value text, seeded with the defaults of one
/// scenario. Files may only override keys that already exist.
class Settings {
 public:
  static Settings defaults(Scenario scenario);
  /// Defaults for `verify-gain`: [gain] gain, h_upper, gamma, tol.
  static Settings gain_defaults();

  /// Overlays an INI file; throws ConfigError naming the file and key.
  void merge_file(const std::filesystem::path& path);
  void merge_text(const std::string& text, const std::string& origin = "<text>");
  void set(const std::string& key, const std::string& value);

  const std::string& raw(const std::string& key) const;
  double number(const std::string& key) const;
  long integer(const std::string& key) const;
  bool flag(const std::string& key) const;
  VectorXd vector(const std::string& key, int n) const;
  /// A single number s means s I; otherwise n*n row-major entries.
  MatrixXd matrix(const std::string& key, int n) const;

  /// INI rendering of every key, grouped by section.
  std::string dump() const;
  const std::map<std::string, std::string>& values() const { return values_; }

 private:
  std::map<std::string, std::string> values_;
};

/// Builds a closed-loop configuration; throws ConfigError on bad values.
RunConfig build_run_config(Scenario scenario, const Settings& settings);

/// Peak concentration for the drone scenario configured by `settings`.
double drone_plume_peak(const Settings& settings);

}  // namespace esc
