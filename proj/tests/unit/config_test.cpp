#include <gtest/gtest.h>

#include "esc/scenarios.hpp"

namespace esc {
namespace {

constexpr Scenario kAll[] = {Scenario::kIllustrative, Scenario::kDrone, Scenario::kBench1,
                             Scenario::kBench2, Scenario::kBench3};

TEST(Settings, EveryScenarioBuilds) {
  for (Scenario s : kAll) {
    EXPECT_NO_THROW(build_run_config(s, Settings::defaults(s))) << to_string(s);
    EXPECT_EQ(parse_scenario(to_string(s)), s);
  }
  EXPECT_FALSE(parse_scenario("bench4").has_value());
}

TEST(Settings, StatedDefaults) {
  const Settings ill = Settings::defaults(Scenario::kIllustrative);
  EXPECT_EQ(ill.number("plant.zeta"), 0.1);
  EXPECT_EQ(ill.number("plant.omega_n"), 1.0);
  EXPECT_EQ(ill.number("cost.hessian"), 5.0);
  EXPECT_EQ(ill.number("cost.y_star"), 10.0);
  EXPECT_EQ(ill.number("bounds.lower"), 0.0);
  EXPECT_EQ(ill.number("bounds.upper"), 10.0);
  EXPECT_EQ(ill.integer("controller.horizon"), 5);
  EXPECT_EQ(ill.number("run.duration"), 60.0);

  const Settings b2 = Settings::defaults(Scenario::kBench2);
  EXPECT_EQ(b2.number("plant.f"), -10.0);
  EXPECT_EQ(b2.number("run.dt"), 0.05);
  EXPECT_EQ(b2.number("run.duration"), 25.0);

  const Settings b1 = Settings::defaults(Scenario::kBench1);
  EXPECT_EQ(b1.number("bounds.lower"), -2.0);
  EXPECT_EQ(b1.number("bounds.upper"), 2.0);

  const Settings drone = Settings::defaults(Scenario::kDrone);
  EXPECT_EQ(drone.number("run.duration"), 900.0);
  EXPECT_EQ(drone.raw("dither.kind"), "gaussian");
}

TEST(Settings, OverridesAndUnknownKeys) {
  Settings s = Settings::defaults(Scenario::kBench1);
  s.merge_text("[controller]\ngain = 0.25\n[run]\nduration = 5\n");
  EXPECT_EQ(s.number("controller.gain"), 0.25);
  EXPECT_EQ(build_run_config(Scenario::kBench1, s).duration, 5.0);
  EXPECT_THROW(s.merge_text("[controller]\ngian = 1\n"), ConfigError);
  EXPECT_THROW(s.merge_text("gain = 1\n"), ConfigError);
  EXPECT_THROW(s.set("nope.key", "1"), ConfigError);
  EXPECT_THROW(s.merge_file("/nonexistent/config.ini"), ConfigError);
}

TEST(Settings, BadValuesAreConfigErrors) {
  Settings s = Settings::defaults(Scenario::kBench2);
  s.set("controller.gain", "abc");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("controller.gain", "1 2 3");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("controller.gain", "1 2 3 4");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("controller.gain", "-1");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("controller.step_size_rule", "cubic");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("controller.horizon", "2.5");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("run.x0", "0");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
  s = Settings::defaults(Scenario::kBench2);
  s.set("bounds.upper", "-20");
  EXPECT_THROW(build_run_config(Scenario::kBench2, s), ConfigError);
}

TEST(Settings, MatrixForms) {
  Settings s = Settings::defaults(Scenario::kBench2);
  s.set("controller.gain", "0.3");
  EXPECT_EQ(s.matrix("controller.gain", 2), 0.3 * MatrixXd::Identity(2, 2));
  s.set("controller.gain", "0.5, 0.1, 0.1, 0.4");
  const MatrixXd m = s.matrix("controller.gain", 2);
  EXPECT_EQ(m(0, 1), 0.1);
  EXPECT_EQ(m(1, 1), 0.4);
  EXPECT_EQ(build_run_config(Scenario::kBench2, s).controller.gain.matrix(), m);
}

TEST(Settings, DumpRoundTrips) {
  for (Scenario s : kAll) {
    const Settings a = Settings::defaults(s);
    Settings b = Settings::defaults(s);
    for (auto& [k, v] : a.values()) b.set(k, "0");
    b.merge_text(a.dump());
    EXPECT_EQ(a.values(), b.values()) << to_string(s);
  }
}

TEST(Settings, Flags) {
  Settings s = Settings::defaults(Scenario::kBench3);
  EXPECT_FALSE(s.flag("controller.project_reference"));
  s.set("controller.project_reference", "true");
  RunConfig c = build_run_config(Scenario::kBench3, s);
  ASSERT_TRUE(static_cast<bool>(c.projection));
  VectorXd r(2);
  r << 0.3, -0.2;
  EXPECT_EQ(c.projection(r)(1), 0.0);
  s.set("controller.project_reference", "maybe");
  EXPECT_THROW(build_run_config(Scenario::kBench3, s), ConfigError);
}

TEST(Settings, GainDefaults) {
  const Settings g = Settings::gain_defaults();
  EXPECT_EQ(g.number("gain.gain"), 0.5);
  EXPECT_EQ(g.number("gain.h_upper"), 2.0);
  EXPECT_EQ(g.number("gain.gamma"), 0.0);
}

}  // namespace
}  // namespace esc
