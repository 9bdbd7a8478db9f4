#include "followme/follow_controller.hpp"

#include <algorithm>
#include <cmath>

#include "followme/errors.hpp"

namespace followme {

void ControllerConfig::validate() const
{
  if (!(d_des > 0.0) || !std::isfinite(d_des)) {
    throw ConfigError("controller.d_des", "must be > 0");
  }
  if (!(d_resume > 0.0 && d_resume <= d_des)) {
    throw ConfigError("controller.d_resume",
                      "controller.d_resume and controller.d_des must satisfy 0 < d_resume <= d_des");
  }
  if (!(v_nom > 0.0 && v_nom <= v_max) || !std::isfinite(v_max)) {
    throw ConfigError("controller.v_nom",
                      "controller.v_nom and controller.v_max must satisfy 0 < v_nom <= v_max");
  }
}

std::pair<FollowState, DistanceClass> classify_distance(const ControllerConfig& cfg,
                                                        FollowState state, double filtered_d,
                                                        bool valid)
{
  if (!valid) {
    ++state.ticks_since_valid_sample;
    return {state, DistanceClass::NoMeasurement};
  }
  state.ticks_since_valid_sample = 0;
  if (filtered_d > cfg.d_des) {
    state.paused = true;
    return {state, DistanceClass::BeyondDesired};
  }
  if (filtered_d <= cfg.d_resume) {
    state.paused = false;
    return {state, DistanceClass::WithinResume};
  }
  return {state, DistanceClass::HysteresisBand};
}

VelocityCommand compute_command(const ControllerConfig& cfg, GuidancePhase phase,
                                const FollowState& state)
{
  VelocityCommand cmd;
  const bool moving = (phase == GuidancePhase::Guiding && !state.paused) ||
                      phase == GuidancePhase::ReturningHome;
  if (moving) {
    cmd.linear = std::min(cfg.v_nom, cfg.v_max);
  }
  return cmd;
}

bool lost_timeout_elapsed(const FsmConfig& fsm, const FollowState& state, double dt)
{
  // Tolerance absorbs the rounding in ticks*dt for exact multiples.
  return static_cast<double>(state.ticks_since_valid_sample) * dt >= fsm.lost_timeout - 1e-9;
}

}  // namespace followme
