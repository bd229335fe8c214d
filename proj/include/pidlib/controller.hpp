#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <utility>

#include "pidlib/errors.hpp"

namespace pidlib {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// @brief Controller operating mode with its stable 2-bit wire encoding.
enum class Mode : unsigned {
  Disabled = 0b00,  ///< output frozen at the last applied value
  Manual = 0b01,    ///< operator supplies the control signal
  Auto = 0b10,      ///< closed-loop control
  Track = 0b11,     ///< output follows an external signal, state kept consistent
};

/// @brief Decodes a 2-bit mode encoding; rejects everything else.
/// @throws InvalidModeError for encodings outside 0..3 (never falls back to Auto).
inline Mode mode_from_encoding(unsigned encoding) {
  if (encoding > 3u) throw InvalidModeError(encoding);
  return static_cast<Mode>(encoding);
}

/// @brief The 2-bit wire encoding of a mode (used in config files and CSV).
inline unsigned mode_encoding(Mode mode) { return static_cast<unsigned>(mode); }

/// @brief Strategy applied to the stored control signal when the output saturates.
enum class AntiWindup {
  BackCalculation,         ///< decay the saturation error with time constant Tt
  ConditionalIntegration,  ///< drop integral increments that deepen saturation,
                           ///< then back-calculate the remainder
};

/// @brief Complete parameter set of the controller. Values are plain doubles;
/// limits and Tt may be infinite to disable the corresponding feature.
struct PidConfig {
  double kp = 0.0;  ///< proportional gain
  double ki = 0.0;  ///< integral gain; 0 selects the positional (P/PD) law
  double kd = 0.0;  ///< derivative gain
  double b = 1.0;   ///< setpoint weight in the proportional term, in [0,1]
  double c = 1.0;   ///< setpoint weight in the derivative term, in [0,1]
  double u0 = 0.0;  ///< bias added by the positional law (ki = 0)
  double umin = -kInfinity;  ///< lower output limit
  double umax = kInfinity;   ///< upper output limit
  double dumin = -kInfinity;  ///< most negative allowed output rate, <= 0
  double dumax = kInfinity;   ///< most positive allowed output rate, >= 0
  double tt = kInfinity;      ///< anti-windup time constant, >= dt_nominal
  double dt_nominal = 0.01;   ///< nominal execution interval, > 0
  AntiWindup aw = AntiWindup::BackCalculation;

  /// @brief Checks every invariant; throws ConfigError naming the first
  /// violated field.
  void validate() const {
    auto bad = [](double v) { return std::isnan(v); };
    if (bad(kp)) throw ConfigError("kp", "must not be NaN");
    if (bad(ki) || ki < 0.0) throw ConfigError("ki", "must be >= 0");
    if (bad(kd)) throw ConfigError("kd", "must not be NaN");
    if (bad(b) || b < 0.0 || b > 1.0) throw ConfigError("b", "must be in [0,1]");
    if (bad(c) || c < 0.0 || c > 1.0) throw ConfigError("c", "must be in [0,1]");
    if (bad(u0)) throw ConfigError("u0", "must not be NaN");
    if (bad(umin)) throw ConfigError("umin", "must not be NaN");
    if (bad(umax) || umax < umin)
      throw ConfigError("umax", "must be >= umin");
    if (bad(dumin) || dumin > 0.0) throw ConfigError("dumin", "must be <= 0");
    if (bad(dumax) || dumax < 0.0) throw ConfigError("dumax", "must be >= 0");
    if (bad(dt_nominal) || dt_nominal <= 0.0)
      throw ConfigError("dt", "must be > 0");
    if (bad(tt) || tt < dt_nominal)
      throw ConfigError("tt", "must be >= the execution interval");
  }
};

/// @brief Persistent controller state: the previous values of every signal the
/// update law differentiates or increments.
struct PidState {
  double xr = 0.0;    ///< previous setpoint
  double xy = 0.0;    ///< previous process variable
  double xu = 0.0;    ///< previous nominal (unsaturated) control signal
  double xus = 0.0;   ///< previous saturated (applied) control signal
  double xdy = 0.0;   ///< previous process-variable derivative
  double xdr = 0.0;   ///< previous setpoint derivative
  double xuff = 0.0;  ///< previous feed-forward signal
};

/// @brief Everything the controller needs for one update step.
struct ControlInput {
  double r = 0.0;       ///< setpoint
  double y = 0.0;       ///< process variable (pre-filtered by the caller)
  double uff = 0.0;     ///< feed-forward control signal
  double uman = 0.0;    ///< manual control signal (Manual mode)
  double utrack = 0.0;  ///< tracking signal (Track mode)
  Mode mode = Mode::Auto;
  double dt = 0.01;  ///< seconds elapsed since the previous invocation
};

/// @brief Admissible output interval for one step: the absolute limits
/// intersected with the rate limits around the previously applied value.
struct SaturationBounds {
  double lo = -kInfinity;
  double hi = kInfinity;
};

/// @brief Combines amplitude and rate limits into per-step output bounds.
inline SaturationBounds saturation_bounds(double xus, double dt,
                                          const PidConfig& cfg) {
  return {std::max(cfg.umin, xus + dt * cfg.dumin),
          std::min(cfg.umax, xus + dt * cfg.dumax)};
}

/// @brief Moves the nominal signal toward its saturated value so the
/// saturation error decays as a first-order process with time constant tt.
/// tt = dt collapses to hard clamping (returns exactly us); tt = infinity
/// leaves u untouched.
inline double back_calculation(double u, double us, double dt, double tt) {
  if (std::isinf(tt)) return u;
  return us + (u - us) * (1.0 - dt / tt);
}

/// @brief Conditional integration: removes at most the integral increment dui
/// when it drives u further past a bound (integration toward the limit and
/// away from saturation stays untouched), then back-calculates the remaining
/// saturation error.
inline double conditional_integration(double u, double dui, double usmin,
                                      double usmax, double dt, double tt) {
  if (u > usmax && dui > 0.0) {
    u -= std::min(dui, u - usmax);
  } else if (u < usmin && dui < 0.0) {
    u += std::min(-dui, usmin - u);
  }
  const double us = std::clamp(u, usmin, usmax);
  return back_calculation(u, us, dt, tt);
}

/// @brief Discrete PID controller combining a positional P/PD law (ki = 0)
/// with an incremental PI/PID law (ki > 0), plus output saturation, rate
/// limiting, anti-windup, feed-forward, and the four operating modes.
///
/// The caller supplies the elapsed interval dt on every invocation, so
/// irregular scheduling is compensated exactly in the integral and derivative
/// terms. An instance must be initialized with the live signal values before
/// the first control() call.
class PidController {
 public:
  /// @throws ConfigError if any parameter invariant is violated.
  explicit PidController(PidConfig config) : cfg_(config) { cfg_.validate(); }

  /// @brief Seeds the state from the running process so the first update is
  /// bumpless: previous signals take the live values, derivatives start at 0,
  /// and the stored output starts from the actual actuator value.
  void initialize(double r0, double y0, double u_actuator) {
    s_ = PidState{};
    s_.xr = r0;
    s_.xy = y0;
    s_.xu = u_actuator;
    s_.xus = std::clamp(u_actuator, cfg_.umin, cfg_.umax);
    initialized_ = true;
  }

  /// @brief Replaces the full parameter set between invocations; no step ever
  /// observes a mix of old and new values.
  /// @throws ConfigError if the new set is invalid (the old set is kept).
  void set_params(const PidConfig& config) {
    config.validate();
    cfg_ = config;
  }

  /// @brief One controller update; returns the control signal to apply.
  ///
  /// Disabled returns the previous applied value and freezes all state.
  /// Manual passes uman through the saturation path. Track overwrites the
  /// stored nominal output with utrack and then behaves like Auto, so the
  /// next takeover is bumpless. Auto runs the positional law when ki = 0 and
  /// the incremental law with anti-windup otherwise.
  ///
  /// @throws NotInitializedError before initialize().
  /// @throws InvalidModeError for a mode outside the four defined values.
  /// @throws std::invalid_argument for dt <= 0.
  double control(const ControlInput& in) {
    if (!initialized_) throw NotInitializedError{};
    if (!(in.dt > 0.0)) throw std::invalid_argument("control: dt must be > 0");

    const PidConfig& p = cfg_;
    const auto [usmin, usmax] = saturation_bounds(s_.xus, in.dt, p);
    const double dy = (in.y - s_.xy) / in.dt;
    const double dr = (in.r - s_.xr) / in.dt;

    double u = 0.0;
    switch (in.mode) {
      case Mode::Disabled:
        return s_.xus;  // output and state frozen
      case Mode::Manual:
        u = in.uman;
        break;
      case Mode::Track:
        s_.xu = in.utrack;
        [[fallthrough]];
      case Mode::Auto:
        if (p.ki == 0.0) {
          // Positional P/PD law around the bias; nothing can wind up.
          u = p.u0 + p.kp * (p.b * in.r - in.y) + p.kd * (p.c * dr - dy) +
              in.uff;
        } else {
          // Incremental law: accumulate increments onto the stored nominal
          // output, then rein the result in with the anti-windup strategy.
          const double inc_r = in.r - s_.xr;
          const double inc_y = in.y - s_.xy;
          const double dup = p.kp * (p.b * inc_r - inc_y);
          const double dui = p.ki * in.dt * (in.r - in.y);
          const double dud = p.kd * (p.c * (dr - s_.xdr) - (dy - s_.xdy));
          const double duff = in.uff - s_.xuff;
          u = s_.xu + dup + dui + dud + duff;
          if (p.aw == AntiWindup::BackCalculation) {
            const double us = std::clamp(u, usmin, usmax);
            u = back_calculation(u, us, in.dt, p.tt);
          } else {
            u = conditional_integration(u, dui, usmin, usmax, in.dt, p.tt);
          }
        }
        break;
      default:
        throw InvalidModeError(static_cast<unsigned>(in.mode));
    }

    // Store the nominal value, apply the admissible bounds, remember both.
    s_.xu = u;
    const double applied = std::clamp(u, usmin, usmax);
    s_.xus = applied;
    s_.xr = in.r;
    s_.xy = in.y;
    s_.xdy = dy;
    s_.xdr = dr;
    s_.xuff = in.uff;
    return applied;
  }

  const PidConfig& params() const noexcept { return cfg_; }
  const PidState& state() const noexcept { return s_; }
  bool initialized() const noexcept { return initialized_; }

 private:
  PidConfig cfg_;
  PidState s_{};
  bool initialized_ = false;
};

}  // namespace pidlib
