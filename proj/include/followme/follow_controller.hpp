#pragma once

#include <utility>

#include "followme/guidance_fsm.hpp"
#include "followme/world.hpp"

namespace followme {

struct ControllerConfig
{
  double d_des{2.0};     // meters; exceeding it stops the robot
  double d_resume{1.8};  // meters; a paused robot resumes at or below this
  double v_nom{0.5};     // m/s
  double v_max{1.5};     // m/s

  void validate() const;
  bool operator==(const ControllerConfig&) const = default;
};

struct VelocityCommand
{
  double linear{0.0};   // m/s
  double angular{0.0};  // rad/s, always 0 for path-parameterized motion
};

struct FollowState
{
  bool paused{false};
  Tick ticks_since_valid_sample{0};

  bool operator==(const FollowState&) const = default;
};

enum class DistanceClass {
  WithinResume,     // <= d_resume
  HysteresisBand,   // (d_resume, d_des]
  BeyondDesired,    // > d_des
  NoMeasurement,
};

/// Pause/resume rule with a hysteresis band between d_resume and d_des.
/// Invalid samples leave the pause flag alone and count towards loss.
std::pair<FollowState, DistanceClass> classify_distance(const ControllerConfig& cfg,
                                                        FollowState state, double filtered_d,
                                                        bool valid);

/// Speed magnitude is v_nom when guiding unpaused or heading home, else 0.
VelocityCommand compute_command(const ControllerConfig& cfg, GuidancePhase phase,
                                const FollowState& state);

bool lost_timeout_elapsed(const FsmConfig& fsm, const FollowState& state, double dt);

}  // namespace followme
