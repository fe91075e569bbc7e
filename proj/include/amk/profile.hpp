#pragma once

#include <cmath>
#include <concepts>

namespace amk {

/// C-infinity transition h(t) = exp(-1/t) for t > 0, zero otherwise.
inline double smooth_transition(double t) { return t > 0.0 ? std::exp(-1.0 / t) : 0.0; }

/// Smoothed step: 0 for t <= 0, 1 for t >= 1, strictly monotone in between.
inline double smoothed_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const double a = smooth_transition(t);
  const double b = smooth_transition(1.0 - t);
  return a / (a + b);
}

/**
 * @brief Radial bump equal to 1 for |x| <= plateau and 0 for |x| >= support.
 *
 * Both ends are exact: no rounding leaks into the flat regions.
 */
struct RadialBump {
  double plateau = 0.25;
  double support = 0.5;

  [[nodiscard]] double operator()(double radius) const {
    return smoothed_step((support - radius) / (support - plateau));
  }
};

/// The partition profile: 1 on the ball of radius 1/4, supported in the ball of radius 1/2.
struct SmoothStepProfile {
  static constexpr double plateau = 0.25;
  static constexpr double support = 0.5;
  [[nodiscard]] double operator()(double radius) const { return RadialBump{plateau, support}(radius); }
};

template <class P>
concept RadialProfile = requires(const P& p, double r) {
  { p(r) } -> std::convertible_to<double>;
  { P::plateau } -> std::convertible_to<double>;
  { P::support } -> std::convertible_to<double>;
};

}  // namespace amk
