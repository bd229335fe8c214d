#pragma once

#include <cmath>

#include "pidlib/errors.hpp"

namespace pidlib {

/// @brief Per-step smoothing coefficient of one filter stage for the given
/// time constant and elapsed interval (Tustin discretization of 1/(1+sTf)).
inline double filter_coefficient(double tf, double dt) {
  return dt / (tf + dt / 2.0);
}

/// @brief Low-pass filter built from two cascaded first-order stages, giving a
/// second-order roll-off without overshoot. Tf = 0 bypasses the filter.
///
/// The coefficient is recomputed from the per-call dt, so irregular sampling
/// and runtime changes of Tf are handled without output jumps: the recursion
/// always continues from the stored stage states.
class LowPassFilter {
 public:
  /// @param tf time constant in seconds (0 disables filtering)
  /// @param second_order false selects the single-stage (first-order) variant
  /// @throws ConfigError for negative or NaN tf.
  explicit LowPassFilter(double tf, bool second_order = true)
      : second_order_(second_order) {
    set_time_constant(tf);
  }

  /// @brief Seeds both stages with the latest measured value so the first
  /// output has no startup transient.
  void initialize(double y0) {
    xf1_ = y0;
    xf2_ = y0;
  }

  /// @brief Filters one sample. With Tf = 0 the input passes through and the
  /// states snap to it, so a later nonzero Tf resumes smoothly.
  double step(double y, double dt) {
    if (tf_ == 0.0) {
      xf1_ = y;
      xf2_ = y;
      return y;
    }
    const double a = filter_coefficient(tf_, dt);
    xf1_ += a * (y - xf1_);
    xf2_ += a * (xf1_ - xf2_);
    return second_order_ ? xf2_ : xf1_;
  }

  /// @brief Changes the time constant; the stored states are kept, so the
  /// output continues from its current value (no bump).
  /// @throws ConfigError for negative or NaN tf.
  void set_time_constant(double tf) {
    if (std::isnan(tf) || tf < 0.0)
      throw ConfigError("tf", "must be >= 0");
    tf_ = tf;
  }

  double time_constant() const noexcept { return tf_; }
  double stage1() const noexcept { return xf1_; }
  double output() const noexcept { return second_order_ ? xf2_ : xf1_; }

 private:
  double tf_ = 0.0;
  bool second_order_ = true;
  double xf1_ = 0.0;
  double xf2_ = 0.0;
};

}  // namespace pidlib
