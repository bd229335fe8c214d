#pragma once

#include <algorithm>
#include <cstdint>
#include <optional>
#include <vector>

#include "pidlib/controller.hpp"
#include "pidlib/errors.hpp"
#include "pidlib/filter.hpp"
#include "pidlib/process.hpp"

namespace pidlib {

// ---------------------------------------------------------------------------
// Scenario description
// ---------------------------------------------------------------------------

/// @brief Parameters of a first-order-plus-dead-time transfer path.
struct FopdtSpec {
  double k = 1.0;
  double T = 1.0;
  double L = 0.0;
};

/// @brief Parameters of a lead-lag feed-forward compensator.
struct LeadLagSpec {
  double gain = 0.0;
  double t_lead = 0.0;
  double t_lag = 1.0;
};

/// @brief Measurement-noise description.
struct NoiseSpec {
  double sigma = 0.0;
  std::uint64_t seed = 0;
};

/// @brief One timed change applied to the running loop. Events take effect at
/// the first sample instant at or after `time`, before that step's filter and
/// controller calls.
struct Event {
  enum class Action {
    Setpoint,     ///< set the setpoint r
    SwitchMode,   ///< switch the controller mode
    ManualValue,  ///< set the manual control value uman
    Disturbance,  ///< set the load-disturbance level v
    Params,       ///< swap the full controller parameter set
  };

  double time = 0.0;
  Action action = Action::Setpoint;
  double value = 0.0;          ///< payload for Setpoint/ManualValue/Disturbance
  Mode mode = Mode::Auto;      ///< payload for SwitchMode
  PidConfig params{};          ///< payload for Params
};

/// @brief Complete closed-loop simulation description: plant, controller(s),
/// filter, noise, schedule, and initial conditions.
struct Scenario {
  enum class Kind {
    SingleLoop,         ///< one controller, one FOPDT plant
    GainScheduledTank,  ///< three zone controllers on the nonlinear tank
    Selector,           ///< two loops arbitrated by a min selector
  };

  Kind kind = Kind::SingleLoop;
  double duration = 10.0;  ///< simulation horizon, seconds
  double dt = 0.01;        ///< sample interval, seconds

  FopdtSpec plant{};  ///< control-to-output path (ignored for the tank)
  std::optional<FopdtSpec> disturbance_plant{};  ///< separate v-to-output path
  bool disturbance_at_input = false;  ///< v adds to the plant input instead
  std::optional<LeadLagSpec> feedforward{};      ///< compensator driven by v

  std::vector<PidConfig> controllers{};  ///< 1 (loop), 3 (zones), or 2 (selector)
  double tf = 0.0;                       ///< measurement filter time constant
  NoiseSpec noise{};

  std::vector<Event> events{};

  double r0 = 0.0;      ///< initial setpoint (loop 1 for the selector)
  double r0_b = 0.0;    ///< initial setpoint of selector loop 2
  double y0 = 0.0;      ///< initial process output / tank level
  double u_init = 0.0;  ///< initial actuator value
  Mode mode0 = Mode::Auto;

  /// @brief True if any disturbance path or event is present (decides whether
  /// the v column carries data).
  bool has_disturbance() const {
    if (disturbance_plant || disturbance_at_input) return true;
    return std::any_of(events.begin(), events.end(), [](const Event& e) {
      return e.action == Event::Action::Disturbance;
    });
  }

  /// @brief Validates the run description and every controller parameter set.
  /// @throws ScenarioError / ConfigError on the first problem found.
  void validate() const {
    if (!(duration > 0.0)) throw ScenarioError("duration must be > 0");
    if (!(dt > 0.0)) throw ScenarioError("dt must be > 0");
    if (!std::is_sorted(events.begin(), events.end(),
                        [](const Event& a, const Event& b) {
                          return a.time < b.time;
                        }))
      throw ScenarioError("events must be sorted by time");
    const std::size_t expected =
        kind == Kind::SingleLoop ? 1u : (kind == Kind::Selector ? 2u : 3u);
    if (controllers.size() != expected)
      throw ScenarioError("scenario needs " + std::to_string(expected) +
                          " controller parameter set(s)");
    for (const PidConfig& cfg : controllers) cfg.validate();
    for (const Event& e : events)
      if (e.action == Event::Action::Params) e.params.validate();
    if (std::isnan(tf) || tf < 0.0) throw ConfigError("tf", "must be >= 0");
    if (std::isnan(noise.sigma) || noise.sigma < 0.0)
      throw ConfigError("noise.sigma", "must be >= 0");
  }
};

/// @brief Per-sample record of a simulation run. The first eight series are
/// the CSV payload; the trailing series are in-memory diagnostics for tests
/// (stored nominal controller output, and both candidate outputs for the
/// selector arrangement).
struct Trajectory {
  std::vector<double> t, r, y, yf, u, v;
  std::vector<int> mode;    ///< 2-bit mode encodings
  std::vector<int> active;  ///< active controller index (selector/zones)
  bool has_v = false;
  bool has_active = false;

  std::vector<double> u_nominal;  ///< stored (unsaturated) controller output
  std::vector<double> u1, u2;     ///< selector candidate outputs
  std::vector<double> y1, y2;     ///< selector per-loop process outputs

  std::size_t size() const { return t.size(); }
};

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

namespace detail {

/// @brief Walks the (sorted) event list and applies everything due at time t.
class EventCursor {
 public:
  explicit EventCursor(const std::vector<Event>& events) : events_(events) {}

  template <typename Apply>
  void run(double t, Apply&& apply) {
    while (next_ < events_.size() && events_[next_].time <= t + 1e-9) {
      apply(events_[next_]);
      ++next_;
    }
  }

 private:
  const std::vector<Event>& events_;
  std::size_t next_ = 0;
};

inline std::size_t step_count(double duration, double dt) {
  return static_cast<std::size_t>(std::llround(duration / dt));
}

}  // namespace detail

/// @brief Runs a single-controller loop: FOPDT plant, optional separate
/// disturbance path or input-additive disturbance, optional feed-forward
/// compensator, measurement noise, and the low-pass filter ahead of the
/// controller. Records duration/dt + 1 samples.
inline Trajectory run_closed_loop(const Scenario& s) {
  s.validate();
  if (s.kind != Scenario::Kind::SingleLoop)
    throw ScenarioError("run_closed_loop requires a single-loop scenario");

  PidController pid(s.controllers[0]);
  pid.initialize(s.r0, s.y0, s.u_init);
  FopdtModel plant(s.plant.k, s.plant.T, s.plant.L, s.dt, s.y0, s.u_init);
  std::optional<FopdtModel> dist_plant;
  if (s.disturbance_plant)
    dist_plant.emplace(s.disturbance_plant->k, s.disturbance_plant->T,
                       s.disturbance_plant->L, s.dt);
  std::optional<LeadLagFilter> ff;
  if (s.feedforward)
    ff.emplace(s.feedforward->gain, s.feedforward->t_lead, s.feedforward->t_lag,
               s.dt);
  LowPassFilter filt(s.tf);
  filt.initialize(s.y0);
  GaussianNoise noise(s.noise.seed, s.noise.sigma);

  double r = s.r0;
  Mode mode = s.mode0;
  double uman = s.u_init;
  double v = 0.0;
  double u_applied = std::clamp(s.u_init, s.controllers[0].umin,
                                s.controllers[0].umax);
  double y_plant = s.y0;
  double y_dist = 0.0;

  Trajectory out;
  out.has_v = s.has_disturbance();
  detail::EventCursor events(s.events);
  const std::size_t n_steps = detail::step_count(s.duration, s.dt);
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * s.dt;
    events.run(t, [&](const Event& e) {
      switch (e.action) {
        case Event::Action::Setpoint: r = e.value; break;
        case Event::Action::SwitchMode: mode = e.mode; break;
        case Event::Action::ManualValue: uman = e.value; break;
        case Event::Action::Disturbance: v = e.value; break;
        case Event::Action::Params: pid.set_params(e.params); break;
      }
    });
    if (n > 0) {
      y_plant = plant.step(u_applied + (s.disturbance_at_input ? v : 0.0));
      if (dist_plant) y_dist = dist_plant->step(v);
    }
    const double y_meas = y_plant + y_dist + noise.next();
    const double yf = filt.step(y_meas, s.dt);
    const double uff = ff ? ff->step(v) : 0.0;
    u_applied = pid.control({r, yf, uff, uman, 0.0, mode, s.dt});

    out.t.push_back(t);
    out.r.push_back(r);
    out.y.push_back(y_meas);
    out.yf.push_back(yf);
    out.u.push_back(u_applied);
    out.v.push_back(v);
    out.mode.push_back(static_cast<int>(mode_encoding(mode)));
    out.active.push_back(-1);
    out.u_nominal.push_back(pid.state().xu);
  }
  return out;
}

/// @brief Zone index for a tank level: below 12, below 20, or above. Levels
/// outside the designed 4..25 range fall into the nearest zone.
inline int zone_of(double y) { return y < 12.0 ? 0 : (y < 20.0 ? 1 : 2); }

/// @brief Gain scheduling with three parallel controllers on the tank. Every
/// step all three run on the same (r, y); the controller of the current zone
/// supplies the applied input while the others track it. At a zone handover
/// the incoming controller spends that one step in tracking mode (the
/// outgoing one still computes the applied output), which makes the takeover
/// bumpless and the trajectory identical to a single re-parameterized
/// controller.
inline Trajectory run_gain_scheduling_parallel(const Scenario& s) {
  s.validate();
  if (s.kind != Scenario::Kind::GainScheduledTank)
    throw ScenarioError("gain scheduling requires a tank scenario");

  std::vector<PidController> pids;
  for (const PidConfig& cfg : s.controllers) {
    pids.emplace_back(cfg);
    pids.back().initialize(s.r0, s.y0, s.u_init);
  }
  TankModel tank(s.dt, s.y0);

  double r = s.r0;
  double y = s.y0;
  double u_applied =
      std::clamp(s.u_init, s.controllers[0].umin, s.controllers[0].umax);
  int active_prev = zone_of(s.y0);

  Trajectory out;
  out.has_active = true;
  detail::EventCursor events(s.events);
  const std::size_t n_steps = detail::step_count(s.duration, s.dt);
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * s.dt;
    events.run(t, [&](const Event& e) {
      if (e.action == Event::Action::Setpoint) r = e.value;
    });
    if (n > 0) y = tank.step(u_applied);
    const int zone = zone_of(y);
    const double utrack = u_applied;
    double outs[3] = {0.0, 0.0, 0.0};
    Mode modes[3];
    for (int i = 0; i < 3; ++i) {
      // In steady operation the zone controller is in Auto. On the step of a
      // handover the incoming controller still tracks the applied input once
      // while the outgoing controller computes the output.
      const int auto_index = (zone == active_prev) ? zone : active_prev;
      modes[i] = (i == auto_index) ? Mode::Auto : Mode::Track;
      outs[i] = pids[i].control({r, y, 0.0, 0.0, utrack, modes[i], s.dt});
    }
    u_applied = outs[zone];

    out.t.push_back(t);
    out.r.push_back(r);
    out.y.push_back(y);
    out.yf.push_back(y);
    out.u.push_back(u_applied);
    out.v.push_back(0.0);
    out.mode.push_back(static_cast<int>(mode_encoding(modes[zone])));
    out.active.push_back(zone);
    out.u_nominal.push_back(pids[zone].state().xu);
    active_prev = zone;
  }
  return out;
}

/// @brief Gain scheduling with a single controller whose (kp, ki) set is
/// swapped atomically whenever the level enters a new zone.
inline Trajectory run_gain_scheduling_single(const Scenario& s) {
  s.validate();
  if (s.kind != Scenario::Kind::GainScheduledTank)
    throw ScenarioError("gain scheduling requires a tank scenario");

  int zone_prev = zone_of(s.y0);
  PidController pid(s.controllers[static_cast<std::size_t>(zone_prev)]);
  pid.initialize(s.r0, s.y0, s.u_init);
  TankModel tank(s.dt, s.y0);

  double r = s.r0;
  double y = s.y0;
  double u_applied =
      std::clamp(s.u_init, s.controllers[0].umin, s.controllers[0].umax);

  Trajectory out;
  out.has_active = true;
  detail::EventCursor events(s.events);
  const std::size_t n_steps = detail::step_count(s.duration, s.dt);
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * s.dt;
    events.run(t, [&](const Event& e) {
      if (e.action == Event::Action::Setpoint) r = e.value;
    });
    if (n > 0) y = tank.step(u_applied);
    const int zone = zone_of(y);
    if (zone != zone_prev)
      pid.set_params(s.controllers[static_cast<std::size_t>(zone)]);
    u_applied = pid.control({r, y, 0.0, 0.0, 0.0, Mode::Auto, s.dt});

    out.t.push_back(t);
    out.r.push_back(r);
    out.y.push_back(y);
    out.yf.push_back(y);
    out.u.push_back(u_applied);
    out.v.push_back(0.0);
    out.mode.push_back(static_cast<int>(mode_encoding(Mode::Auto)));
    out.active.push_back(zone);
    out.u_nominal.push_back(pid.state().xu);
    zone_prev = zone;
  }
  return out;
}

/// @brief Two loops arbitrated by a min selector. Both controllers run every
/// step on their own (r, y); the smaller output is applied to both plants and
/// the loser tracks it. Selection is re-evaluated per step from the fresh
/// outputs; a controller that lost the previous step runs the current step in
/// tracking mode, so takeovers are bumpless. The disturbance adds at plant
/// 1's input.
inline Trajectory run_selector(const Scenario& s) {
  s.validate();
  if (s.kind != Scenario::Kind::Selector)
    throw ScenarioError("run_selector requires a selector scenario");

  PidController pid1(s.controllers[0]);
  PidController pid2(s.controllers[1]);
  pid1.initialize(s.r0, s.y0, s.u_init);
  pid2.initialize(s.r0_b, s.y0, s.u_init);
  FopdtModel plant1(s.plant.k, s.plant.T, s.plant.L, s.dt, s.y0, s.u_init);
  FopdtModel plant2(s.plant.k, s.plant.T, s.plant.L, s.dt, s.y0, s.u_init);

  double v = 0.0;
  double u = std::clamp(s.u_init, s.controllers[0].umin,
                        s.controllers[0].umax);
  double y1 = s.y0;
  double y2 = s.y0;
  int selected_prev = 0;

  Trajectory out;
  out.has_v = true;
  out.has_active = true;
  detail::EventCursor events(s.events);
  const std::size_t n_steps = detail::step_count(s.duration, s.dt);
  for (std::size_t n = 0; n <= n_steps; ++n) {
    const double t = static_cast<double>(n) * s.dt;
    events.run(t, [&](const Event& e) {
      if (e.action == Event::Action::Disturbance) v = e.value;
    });
    if (n > 0) {
      y1 = plant1.step(u + v);
      y2 = plant2.step(u);
    }
    const double utrack = u;
    const Mode m1 = selected_prev == 0 ? Mode::Auto : Mode::Track;
    const Mode m2 = selected_prev == 1 ? Mode::Auto : Mode::Track;
    const double u1 = pid1.control({s.r0, y1, 0.0, 0.0, utrack, m1, s.dt});
    const double u2 = pid2.control({s.r0_b, y2, 0.0, 0.0, utrack, m2, s.dt});
    u = std::min(u1, u2);
    const int selected = (u1 <= u2) ? 0 : 1;

    out.t.push_back(t);
    out.r.push_back(selected == 0 ? s.r0 : s.r0_b);
    out.y.push_back(selected == 0 ? y1 : y2);
    out.yf.push_back(selected == 0 ? y1 : y2);
    out.u.push_back(u);
    out.v.push_back(v);
    out.mode.push_back(static_cast<int>(
        mode_encoding(selected == 0 ? m1 : m2)));
    out.active.push_back(selected);
    out.u_nominal.push_back(selected == 0 ? pid1.state().xu
                                          : pid2.state().xu);
    out.u1.push_back(u1);
    out.u2.push_back(u2);
    out.y1.push_back(y1);
    out.y2.push_back(y2);
    selected_prev = selected;
  }
  return out;
}

/// @brief Runs a scenario with the runner matching its kind (the parallel
/// arrangement for the gain-scheduled tank).
inline Trajectory run_scenario(const Scenario& s) {
  switch (s.kind) {
    case Scenario::Kind::SingleLoop: return run_closed_loop(s);
    case Scenario::Kind::GainScheduledTank:
      return run_gain_scheduling_parallel(s);
    case Scenario::Kind::Selector: return run_selector(s);
  }
  throw ScenarioError("unknown scenario kind");
}

// ---------------------------------------------------------------------------
// Built-in demo scenarios
// ---------------------------------------------------------------------------

/// @brief Optional parameter replacements applied on top of a scenario.
struct Overrides {
  std::optional<double> dt, tt, tf, sigma, duration, dumin, dumax;
  std::optional<std::uint64_t> seed;
  std::optional<AntiWindup> aw;
};

/// @brief Applies overrides to the scenario, its controllers, and every
/// parameter-swap event payload (so a Tt override survives mid-run swaps).
inline void apply_overrides(Scenario& s, const Overrides& ov) {
  auto patch = [&](PidConfig& cfg) {
    if (ov.dt) cfg.dt_nominal = *ov.dt;
    if (ov.tt) cfg.tt = *ov.tt;
    if (ov.dumin) cfg.dumin = *ov.dumin;
    if (ov.dumax) cfg.dumax = *ov.dumax;
    if (ov.aw) cfg.aw = *ov.aw;
  };
  if (ov.dt) s.dt = *ov.dt;
  if (ov.tf) s.tf = *ov.tf;
  if (ov.sigma) s.noise.sigma = *ov.sigma;
  if (ov.seed) s.noise.seed = *ov.seed;
  if (ov.duration) s.duration = *ov.duration;
  for (PidConfig& cfg : s.controllers) patch(cfg);
  for (Event& e : s.events)
    if (e.action == Event::Action::Params) patch(e.params);
}

/// @brief The seven built-in demonstration scenarios:
///   1 bumpless manual-to-auto transfer on a PI loop
///   2 runtime PI <-> P switching around a bias, plus setpoint steps
///   3 setpoint weighting b with an input-side load disturbance
///   4 output saturation and the anti-windup strategies with feed-forward
///   5 measurement noise and the second-order filter
///   6 gain-scheduled level control of the nonlinear tank
///   7 min-selector override of two competing loops
/// @throws ScenarioError for numbers outside 1..7.
inline Scenario example_scenario(int number) {
  Scenario s;
  const FopdtSpec default_plant{1.0, 1.0, 0.5};
  auto pi = [](double kp, double ki, double dt) {
    PidConfig cfg;
    cfg.kp = kp;
    cfg.ki = ki;
    cfg.dt_nominal = dt;
    return cfg;
  };
  switch (number) {
    case 1: {
      s.duration = 20.0;
      s.plant = default_plant;
      s.controllers = {pi(0.667, 0.667, s.dt)};
      s.r0 = 3.0;
      s.mode0 = Mode::Manual;
      s.events = {{1.0, Event::Action::ManualValue, 1.0},
                  {10.0, Event::Action::SwitchMode, 0.0, Mode::Auto}};
      return s;
    }
    case 2: {
      s.duration = 30.0;
      s.plant = default_plant;
      PidConfig base = pi(0.667, 0.667, s.dt);
      base.u0 = 2.0;
      PidConfig p_only = base;
      p_only.ki = 0.0;
      s.controllers = {base};
      s.r0 = 1.0;
      s.y0 = 1.0;
      s.u_init = 1.0;
      s.events = {{1.0, Event::Action::Setpoint, 3.0},
                  {10.0, Event::Action::Params, 0.0, Mode::Auto, p_only},
                  {15.0, Event::Action::Setpoint, 1.0},
                  {21.0, Event::Action::Params, 0.0, Mode::Auto, base}};
      return s;
    }
    case 3: {
      s.duration = 20.0;
      s.plant = default_plant;
      s.controllers = {pi(0.667, 0.667, s.dt)};
      s.disturbance_at_input = true;
      s.events = {{1.0, Event::Action::Setpoint, 3.0},
                  {10.0, Event::Action::Disturbance, 1.0}};
      return s;
    }
    case 4: {
      s.duration = 70.0;
      s.plant = {1.0, 3.0, 0.5};
      s.disturbance_plant = FopdtSpec{2.0, 1.0, 0.5};
      s.feedforward = LeadLagSpec{-2.0, 3.0, 1.0};
      PidConfig cfg;
      cfg.kp = 2.83;
      cfg.ki = 2.83 / 3.25;
      cfg.kd = 2.83 * 0.23;
      cfg.b = 1.0;
      cfg.c = 0.0;
      cfg.umin = -3.0;
      cfg.umax = 3.0;
      cfg.tt = 3.25;
      cfg.dt_nominal = s.dt;
      s.controllers = {cfg};
      s.events = {{1.0, Event::Action::Setpoint, 4.5},
                  {20.0, Event::Action::Setpoint, 0.0},
                  {45.0, Event::Action::Disturbance, 1.5}};
      return s;
    }
    case 5: {
      s.duration = 10.0;
      s.plant = default_plant;
      s.controllers = {pi(0.667, 0.667, s.dt)};
      s.mode0 = Mode::Manual;
      s.tf = 0.1;
      s.noise = {0.05, 42};
      s.events = {{1.0, Event::Action::Setpoint, 3.0},
                  {1.25, Event::Action::SwitchMode, 0.0, Mode::Auto}};
      return s;
    }
    case 6: {
      s.kind = Scenario::Kind::GainScheduledTank;
      s.duration = 2000.0;
      s.dt = 0.1;
      for (double ti : {16.36, 28.34, 36.59}) {
        PidConfig cfg = pi(14.39, 14.39 / ti, s.dt);
        cfg.umin = 0.0;
        cfg.umax = 1000.0;
        s.controllers.push_back(cfg);
      }
      s.r0 = 22.0;
      s.y0 = 4.0;
      s.u_init = 190.66;
      s.events = {{500.0, Event::Action::Setpoint, 8.0},
                  {1000.0, Event::Action::Setpoint, 16.0},
                  {1500.0, Event::Action::Setpoint, 24.0}};
      return s;
    }
    case 7: {
      s.kind = Scenario::Kind::Selector;
      s.duration = 40.0;
      s.plant = default_plant;
      s.controllers = {pi(0.667, 0.667, s.dt), pi(0.667, 0.667, s.dt)};
      s.r0 = 0.3;
      s.r0_b = 0.5;
      s.events = {{5.0, Event::Action::Disturbance, -0.4},
                  {15.0, Event::Action::Disturbance, 0.4},
                  {25.0, Event::Action::Disturbance, -0.4},
                  {35.0, Event::Action::Disturbance, 0.4}};
      return s;
    }
    default:
      throw ScenarioError("unknown example " + std::to_string(number) +
                          " (valid: 1..7)");
  }
}

}  // namespace pidlib
