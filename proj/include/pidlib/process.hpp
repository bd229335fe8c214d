#pragma once

#include <cmath>
#include <cstdint>
#include <deque>
#include <random>

#include "pidlib/errors.hpp"

namespace pidlib {

/// @brief First-order-plus-dead-time process k·e^{-sL}/(1+sT), discretized
/// exactly under a zero-order hold at a fixed step, with the dead time
/// realized as an integer-sample input FIFO.
class FopdtModel {
 public:
  /// @param u_init input held on the delay line initially; pass the
  /// equilibrium input to start the model at rest.
  /// @throws ConfigError for non-positive T or dt, or negative L.
  FopdtModel(double k, double T, double L, double dt, double y0 = 0.0,
             double u_init = 0.0)
      : k_(k), phi_(std::exp(-dt / T)), y_(y0) {
    if (std::isnan(k)) throw ConfigError("plant.k", "must not be NaN");
    if (!(T > 0.0)) throw ConfigError("plant.t", "must be > 0");
    if (!(L >= 0.0)) throw ConfigError("plant.l", "must be >= 0");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
    const auto delay_samples =
        static_cast<std::size_t>(std::llround(L / dt));
    queue_.assign(delay_samples, u_init);
  }

  /// @brief Advances one step with input u held over the interval.
  double step(double u) {
    double delayed = u;
    if (!queue_.empty()) {
      queue_.push_back(u);
      delayed = queue_.front();
      queue_.pop_front();
    }
    y_ = phi_ * y_ + (1.0 - phi_) * k_ * delayed;
    return y_;
  }

  double output() const noexcept { return y_; }

 private:
  double k_;
  double phi_;
  double y_;
  std::deque<double> queue_;
};

/// @brief Gravity-drained tank: level y responds to inflow u through
/// dy/dt = -(a/A)·sqrt(2·g·y) + u/A. Integrated with classic fourth-order
/// Runge-Kutta; the level is kept non-negative.
class TankModel {
 public:
  static constexpr double kOutletArea = 2.15;
  static constexpr double kSurfaceArea = 390.0;
  static constexpr double kGravity = 983.0;

  /// @throws ConfigError for non-positive dt or negative initial level.
  TankModel(double dt, double y0) : dt_(dt), y_(y0) {
    if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
    if (!(y0 >= 0.0)) throw ConfigError("y0", "level must be >= 0");
  }

  /// @brief Inflow that holds the level steady at y.
  static double equilibrium_input(double y) {
    return kOutletArea * std::sqrt(2.0 * kGravity * y);
  }

  /// @brief Time constant of the dynamics linearized around level y0.
  static double linearized_time_constant(double y0) {
    return (kSurfaceArea / kOutletArea) * std::sqrt(2.0 * y0 / kGravity);
  }

  /// @brief Static gain of the dynamics linearized around level y0.
  static double linearized_gain(double y0) {
    return linearized_time_constant(y0) / kSurfaceArea;
  }

  /// @brief Advances one RK4 step with inflow u held over the interval.
  double step(double u) {
    const double k1 = rate(y_, u);
    const double k2 = rate(y_ + dt_ / 2.0 * k1, u);
    const double k3 = rate(y_ + dt_ / 2.0 * k2, u);
    const double k4 = rate(y_ + dt_ * k3, u);
    y_ = std::max(0.0, y_ + dt_ / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
    return y_;
  }

  double level() const noexcept { return y_; }

 private:
  static double rate(double y, double u) {
    y = std::max(y, 0.0);
    return -(kOutletArea / kSurfaceArea) * std::sqrt(2.0 * kGravity * y) +
           u / kSurfaceArea;
  }

  double dt_;
  double y_;
};

/// @brief One-state lead-lag element gain·(1+s·t_lead)/(1+s·t_lag) discretized
/// with the Tustin transform at a fixed step; used as a disturbance
/// feed-forward compensator. Starts at rest (zero input history).
class LeadLagFilter {
 public:
  /// @throws ConfigError for non-positive t_lag or dt.
  LeadLagFilter(double gain, double t_lead, double t_lag, double dt) {
    if (!(t_lag > 0.0)) throw ConfigError("ff.tlag", "must be > 0");
    if (!(dt > 0.0)) throw ConfigError("dt", "must be > 0");
    const double den = 1.0 + 2.0 * t_lag / dt;
    b0_ = gain * (1.0 + 2.0 * t_lead / dt) / den;
    b1_ = gain * (1.0 - 2.0 * t_lead / dt) / den;
    a1_ = (1.0 - 2.0 * t_lag / dt) / den;
  }

  /// @brief Advances one step with input v.
  double step(double v) {
    const double w = v - a1_ * w_;
    const double out = b0_ * w + b1_ * w_;
    w_ = w;
    return out;
  }

 private:
  double b0_ = 0.0;
  double b1_ = 0.0;
  double a1_ = 0.0;
  double w_ = 0.0;
};

/// @brief Seeded Gaussian measurement-noise source. A given (seed, sigma)
/// pair always reproduces the same sample sequence.
class GaussianNoise {
 public:
  GaussianNoise(std::uint64_t seed, double sigma)
      : rng_(seed), sigma_(sigma) {
    if (std::isnan(sigma) || sigma < 0.0)
      throw ConfigError("noise.sigma", "must be >= 0");
  }

  /// @brief Next noise sample; exactly 0 (and no generator draw) when
  /// sigma = 0, so disabling noise does not perturb anything downstream.
  double next() {
    if (sigma_ == 0.0) return 0.0;
    return sigma_ * dist_(rng_);
  }

 private:
  std::mt19937_64 rng_;
  std::normal_distribution<double> dist_{0.0, 1.0};
  double sigma_;
};

}  // namespace pidlib
