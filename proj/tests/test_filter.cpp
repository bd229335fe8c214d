#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <limits>
#include <string>

#include "pidlib/errors.hpp"
#include "pidlib/filter.hpp"
#include "oracles.hpp"

using Catch::Matchers::WithinAbs;
using namespace pidlib;

TEST_CASE("filter coefficient matches the trapezoidal discretization") {
  // dt/(Tf + dt/2) with Tf=0.1, dt=0.01: 0.01/0.105.
  CHECK_THAT(filter_coefficient(0.1, 0.01),
             WithinAbs(0.0952380952380952, 1e-15));
  // Tf = 0 gives a coefficient of 2, but the filter bypasses that case.
  CHECK_THAT(filter_coefficient(0.0, 0.01), WithinAbs(2.0, 1e-15));
}

TEST_CASE("one step from rest propagates through both stages") {
  LowPassFilter f(0.1);
  f.initialize(0.0);
  const double out = f.step(1.0, 0.01);
  const double a = filter_coefficient(0.1, 0.01);
  CHECK_THAT(f.stage1(), WithinAbs(a, 1e-15));        // 0.095238...
  CHECK_THAT(out, WithinAbs(a * a, 1e-15));           // 0.009070...
  CHECK_THAT(out, WithinAbs(0.00907029478458, 1e-12));
  CHECK(f.output() == out);
}

TEST_CASE("unit DC gain") {
  LowPassFilter f(0.1);
  f.initialize(0.0);
  double out = 0.0;
  for (int i = 0; i < 10000; ++i) out = f.step(2.5, 0.01);
  CHECK_THAT(out, WithinAbs(2.5, 1e-9));
}

TEST_CASE("initialization removes the startup transient") {
  LowPassFilter f(0.1);
  f.initialize(3.0);
  CHECK(f.step(3.0, 0.01) == 3.0);
  CHECK(f.step(3.0, 0.01) == 3.0);
}

TEST_CASE("63% rise times match the continuous-time predictions") {
  const double tf = 0.1;
  const double dt = 0.001;
  const double target = 1.0 - std::exp(-1.0);

  // Two cascaded stages: crossing at x*·Tf where (1+x*)e^{-x*} = e^{-1}.
  {
    LowPassFilter f(tf);
    f.initialize(0.0);
    double t = 0.0;
    while (f.step(1.0, dt) < target) t += dt;
    t += dt;
    CHECK_THAT(t, WithinAbs(oracles::cascade_rise_factor() * tf, 2.0 * dt));
  }

  // Single stage: crossing at the time constant itself.
  {
    LowPassFilter f(tf, false);
    f.initialize(0.0);
    double t = 0.0;
    while (f.step(1.0, dt) < target) t += dt;
    t += dt;
    CHECK_THAT(t, WithinAbs(tf, 2.0 * dt));
  }
}

TEST_CASE("first-order variant exposes the single-stage output") {
  LowPassFilter second(0.1);
  LowPassFilter first(0.1, false);
  second.initialize(0.0);
  first.initialize(0.0);
  for (int i = 0; i < 20; ++i) {
    second.step(1.0, 0.01);
    const double out = first.step(1.0, 0.01);
    CHECK(out == second.stage1());
    CHECK(first.output() == out);
  }
}

TEST_CASE("Tf = 0 bypasses the filter and snaps the states") {
  LowPassFilter f(0.0);
  f.initialize(0.0);
  CHECK(f.step(3.0, 0.01) == 3.0);
  CHECK(f.stage1() == 3.0);
  CHECK(f.output() == 3.0);

  // Turning filtering on afterwards continues from the snapped value.
  f.set_time_constant(0.1);
  const double out = f.step(3.0, 0.01);
  CHECK(out == 3.0);
}

TEST_CASE("time-constant changes keep the stored states (no output bump)") {
  LowPassFilter f(0.2);
  f.initialize(0.0);
  for (int i = 0; i < 30; ++i) f.step(1.0, 0.01);
  const double s1 = f.stage1();
  const double s2 = f.output();

  f.set_time_constant(0.05);
  CHECK(f.stage1() == s1);
  CHECK(f.output() == s2);

  // The next output moves by at most one smoothing step of the new Tf.
  const double a = filter_coefficient(0.05, 0.01);
  const double next = f.step(1.0, 0.01);
  CHECK(std::abs(next - s2) <= a * std::abs(1.0 - s2) + 1e-12);
}

TEST_CASE("negative or NaN time constants are rejected") {
  CHECK_THROWS_AS(LowPassFilter(-0.1), ConfigError);
  LowPassFilter f(0.1);
  CHECK_THROWS_AS(f.set_time_constant(-1.0), ConfigError);
  CHECK_THROWS_AS(
      f.set_time_constant(std::numeric_limits<double>::quiet_NaN()),
      ConfigError);
  try {
    f.set_time_constant(-1.0);
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.field()) == "tf");
  }
}
