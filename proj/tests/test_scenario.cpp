#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <cmath>
#include <set>

#include "pidlib/scenario.hpp"

using Catch::Matchers::WithinAbs;
using namespace pidlib;

namespace {

Scenario tiny_loop() {
  Scenario s;
  s.duration = 1.0;
  s.dt = 0.1;
  s.plant = {1.0, 1.0, 0.0};
  PidConfig cfg;
  cfg.kp = 0.5;
  cfg.ki = 0.5;
  cfg.dt_nominal = s.dt;
  s.controllers = {cfg};
  return s;
}

}  // namespace

TEST_CASE("scenario validation rejects malformed descriptions") {
  Scenario s = tiny_loop();
  CHECK_NOTHROW(s.validate());

  Scenario bad = s;
  bad.duration = 0.0;
  CHECK_THROWS_AS(bad.validate(), ScenarioError);

  bad = s;
  bad.dt = -0.1;
  CHECK_THROWS_AS(bad.validate(), ScenarioError);

  bad = s;
  bad.events = {{5.0, Event::Action::Setpoint, 1.0},
                {2.0, Event::Action::Setpoint, 2.0}};
  CHECK_THROWS_AS(bad.validate(), ScenarioError);

  bad = s;
  bad.controllers.push_back(bad.controllers[0]);
  CHECK_THROWS_AS(bad.validate(), ScenarioError);

  bad = s;
  bad.controllers[0].umin = 1.0;
  bad.controllers[0].umax = -1.0;
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = s;
  Event e{1.0, Event::Action::Params};
  e.params.ki = -1.0;
  bad.events = {e};
  CHECK_THROWS_AS(bad.validate(), ConfigError);

  bad = s;
  bad.kind = Scenario::Kind::Selector;  // needs two controllers
  CHECK_THROWS_AS(run_selector(bad), ScenarioError);

  CHECK_THROWS_AS(run_gain_scheduling_parallel(s), ScenarioError);
}

TEST_CASE("trajectory covers t = 0 through the duration inclusive") {
  const Trajectory tr = run_closed_loop(tiny_loop());
  REQUIRE(tr.size() == 11);
  CHECK(tr.t.front() == 0.0);
  CHECK_THAT(tr.t.back(), WithinAbs(1.0, 1e-12));
  CHECK_FALSE(tr.has_v);
  CHECK_FALSE(tr.has_active);
}

TEST_CASE("a zero-gain controller leaves a resting loop at rest") {
  Scenario s = tiny_loop();
  s.controllers[0] = PidConfig{};
  s.controllers[0].dt_nominal = s.dt;
  const Trajectory tr = run_closed_loop(s);
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.u[i] == 0.0);
    CHECK(tr.y[i] == 0.0);
  }
}

TEST_CASE("events fire at the first sample at or after their time") {
  Scenario s = tiny_loop();
  s.dt = 0.01;
  s.duration = 0.2;
  s.controllers[0].dt_nominal = s.dt;
  s.events = {{0.1, Event::Action::Setpoint, 5.0},
              {0.10499, Event::Action::Setpoint, 7.0}};
  // Make the setpoint visible without dynamics in the way.
  const Trajectory tr = run_closed_loop(s);
  CHECK(tr.r[9] == 0.0);
  CHECK(tr.r[10] == 5.0);   // t = 0.10 catches the event at exactly 0.1
  CHECK(tr.r[11] == 7.0);   // t = 0.11 is the first sample >= 0.10499
}

TEST_CASE("mode and manual-value events drive the loop") {
  Scenario s = tiny_loop();
  s.duration = 2.0;
  s.mode0 = Mode::Manual;
  s.r0 = 3.0;
  s.events = {{0.5, Event::Action::ManualValue, 1.0},
              {1.0, Event::Action::SwitchMode, 0.0, Mode::Auto}};
  const Trajectory tr = run_closed_loop(s);

  CHECK(tr.mode[0] == 1);
  CHECK(tr.u[0] == 0.0);  // manual output starts at the initial actuator value
  const std::size_t i_uman = 5;   // t = 0.5
  const std::size_t i_auto = 10;  // t = 1.0
  CHECK(tr.u[i_uman] == 1.0);
  CHECK(tr.mode[i_auto - 1] == 1);
  CHECK(tr.mode[i_auto] == 2);
}

TEST_CASE("parameter-swap events replace the controller parameters") {
  Scenario s = tiny_loop();
  s.duration = 2.0;
  s.r0 = 1.0;
  s.y0 = 1.0;
  s.u_init = 1.0;
  PidConfig p_only = s.controllers[0];
  p_only.ki = 0.0;
  p_only.u0 = 2.0;
  s.events = {{1.0, Event::Action::Params, 0.0, Mode::Auto, p_only}};
  const Trajectory tr = run_closed_loop(s);
  // Before the swap the loop is at equilibrium with u = 1; at the swap the
  // positional law takes over around its bias.
  CHECK(tr.u[5] == 1.0);
  CHECK(tr.u[10] > 1.5);
}

TEST_CASE("built-in scenarios expose the documented shape") {
  CHECK_THROWS_AS(example_scenario(0), ScenarioError);
  CHECK_THROWS_AS(example_scenario(8), ScenarioError);

  for (int n = 1; n <= 7; ++n) CHECK_NOTHROW(example_scenario(n).validate());

  CHECK(example_scenario(1).mode0 == Mode::Manual);
  CHECK_FALSE(example_scenario(1).has_disturbance());
  CHECK(example_scenario(3).has_disturbance());
  CHECK(example_scenario(4).feedforward.has_value());
  CHECK(example_scenario(4).disturbance_plant.has_value());
  CHECK(example_scenario(6).kind == Scenario::Kind::GainScheduledTank);
  CHECK(example_scenario(6).dt == 0.1);
  CHECK(example_scenario(7).kind == Scenario::Kind::Selector);
}

TEST_CASE("overrides patch the scenario, controllers, and event payloads") {
  Scenario s = example_scenario(2);
  Overrides ov;
  ov.dt = 0.1;
  ov.dumin = -0.1;
  ov.dumax = 0.1;
  ov.tf = 0.2;
  ov.sigma = 0.01;
  ov.seed = 99;
  ov.duration = 12.0;
  apply_overrides(s, ov);

  CHECK(s.dt == 0.1);
  CHECK(s.tf == 0.2);
  CHECK(s.noise.sigma == 0.01);
  CHECK(s.noise.seed == 99);
  CHECK(s.duration == 12.0);
  CHECK(s.controllers[0].dt_nominal == 0.1);
  CHECK(s.controllers[0].dumin == -0.1);
  for (const Event& e : s.events) {
    if (e.action == Event::Action::Params) {
      CHECK(e.params.dt_nominal == 0.1);
      CHECK(e.params.dumax == 0.1);
    }
  }
  CHECK_NOTHROW(s.validate());
}

TEST_CASE("zone map splits the level range at 12 and 20") {
  CHECK(zone_of(0.0) == 0);
  CHECK(zone_of(11.999) == 0);
  CHECK(zone_of(12.0) == 1);
  CHECK(zone_of(19.999) == 1);
  CHECK(zone_of(20.0) == 2);
  CHECK(zone_of(30.0) == 2);
}

TEST_CASE("parallel and single gain scheduling produce the same trajectory") {
  Scenario s = example_scenario(6);
  s.duration = 600.0;  // long enough to cross both zone boundaries
  s.events.clear();

  const Trajectory parallel = run_gain_scheduling_parallel(s);
  const Trajectory single = run_gain_scheduling_single(s);
  REQUIRE(parallel.size() == single.size());

  std::set<int> zones;
  double max_du = 0.0;
  double max_dy = 0.0;
  for (std::size_t i = 0; i < parallel.size(); ++i) {
    zones.insert(parallel.active[i]);
    CHECK(parallel.active[i] == single.active[i]);
    max_du = std::max(max_du, std::abs(parallel.u[i] - single.u[i]));
    max_dy = std::max(max_dy, std::abs(parallel.y[i] - single.y[i]));
  }
  CHECK(zones.size() == 3);  // the run really exercised all three zones
  CHECK(max_du <= 1e-12);
  CHECK(max_dy <= 1e-12);
  CHECK(parallel.has_active);
}

TEST_CASE("selector applies the smaller output and hands over in track mode") {
  Scenario s = example_scenario(7);
  s.duration = 12.0;  // covers the first disturbance flip at t = 5
  // Trim events beyond the shortened horizon.
  s.events.erase(std::remove_if(s.events.begin(), s.events.end(),
                                [&](const Event& e) { return e.time > 12.0; }),
                 s.events.end());

  const Trajectory tr = run_selector(s);
  REQUIRE(tr.size() == 1201);
  REQUIRE(tr.u1.size() == tr.size());

  int handovers = 0;
  for (std::size_t i = 0; i < tr.size(); ++i) {
    CHECK(tr.u[i] == std::min(tr.u1[i], tr.u2[i]));
    const bool winner_is_1 = tr.u1[i] <= tr.u2[i];
    CHECK(tr.active[i] == (winner_is_1 ? 0 : 1));
    if (i > 0 && tr.active[i] != tr.active[i - 1]) {
      ++handovers;
      CHECK(tr.mode[i] == 3);  // incoming controller spent this step tracking
    }
  }
  CHECK(handovers >= 1);
  CHECK(tr.has_active);
  CHECK(tr.has_v);
}

TEST_CASE("run_scenario dispatches on the scenario kind") {
  Scenario s6 = example_scenario(6);
  s6.duration = 5.0;
  CHECK(run_scenario(s6).has_active);

  Scenario s1 = example_scenario(1);
  s1.duration = 1.0;
  s1.events.clear();
  CHECK_FALSE(run_scenario(s1).has_active);
}
