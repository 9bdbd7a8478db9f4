#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <utility>

#include "followme/errors.hpp"

namespace followme {

/**
 * Recursion state of a first-order exponential moving average,
 *
 *   y_t = alpha * x_t + (1 - alpha) * y_{t-1},
 *
 * seeded with the first sample after construction or reset. `last` is empty
 * until the first update.
 */
template <typename Scalar = double>
struct EmaState
{
  Scalar alpha;
  std::optional<Scalar> last;

  bool operator==(const EmaState&) const = default;
};

template <typename Scalar>
EmaState<Scalar> ema_new(Scalar alpha)
{
  if (!(alpha > Scalar(0) && alpha <= Scalar(1))) {
    throw ConfigError("alpha", "must lie in (0, 1]");
  }
  return {alpha, std::nullopt};
}

/// Feeds one distance sample. Returns the new state and the smoothed output.
template <typename Scalar>
std::pair<EmaState<Scalar>, Scalar> ema_update(EmaState<Scalar> state, Scalar x)
{
  if (!std::isfinite(x) || x < Scalar(0)) {
    throw MeasurementError("distance sample must be finite and non-negative");
  }
  Scalar y = x;
  if (state.last && state.alpha < Scalar(1)) {
    const Scalar prev = *state.last;
    // Incremental form keeps constant input an exact fixed point.
    y = prev + state.alpha * (x - prev);
    y = std::clamp(y, std::min(prev, x), std::max(prev, x));
  }
  state.last = y;
  return {state, y};
}

template <typename Scalar>
EmaState<Scalar> ema_reset(EmaState<Scalar> state)
{
  state.last.reset();
  return state;
}

/// Owning convenience wrapper around the free functions.
template <typename Scalar = double>
class EmaFilter
{
public:
  explicit EmaFilter(Scalar alpha) : state_(ema_new(alpha)) {}

  Scalar update(Scalar x)
  {
    auto [next, y] = ema_update(state_, x);
    state_ = next;
    return y;
  }

  void reset() { state_ = ema_reset(state_); }

  std::optional<Scalar> value() const { return state_.last; }
  Scalar alpha() const { return state_.alpha; }
  const EmaState<Scalar>& state() const { return state_; }

private:
  EmaState<Scalar> state_;
};

}  // namespace followme
