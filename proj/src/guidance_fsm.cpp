#include "followme/guidance_fsm.hpp"

#include <array>
#include <cmath>
#include <utility>

#include "followme/errors.hpp"

namespace followme {
namespace {

constexpr std::array<std::pair<GuidancePhase, std::string_view>, 8> kPhaseNames{{
    {GuidancePhase::Idle, "Idle"},
    {GuidancePhase::AwaitingGesture, "AwaitingGesture"},
    {GuidancePhase::Identifying, "Identifying"},
    {GuidancePhase::Guiding, "Guiding"},
    {GuidancePhase::Paused, "Paused"},
    {GuidancePhase::Arrived, "Arrived"},
    {GuidancePhase::ReturningHome, "ReturningHome"},
    {GuidancePhase::Aborted, "Aborted"},
}};

}  // namespace

std::string_view to_string(GuidancePhase phase)
{
  for (const auto& [p, name] : kPhaseNames) {
    if (p == phase) return name;
  }
  return "Unknown";
}

std::optional<GuidancePhase> parse_phase(std::string_view name)
{
  for (const auto& [p, n] : kPhaseNames) {
    if (n == name) return p;
  }
  return std::nullopt;
}

std::string_view to_string(GuidanceAction action)
{
  switch (action) {
    case GuidanceAction::CallTryGesture: return "CallTryGesture";
    case GuidanceAction::EnableTracker: return "EnableTracker";
    case GuidanceAction::CallFaceId: return "CallFaceId";
    case GuidanceAction::CommandFollow: return "CommandFollow";
    case GuidanceAction::CommandPause: return "CommandPause";
    case GuidanceAction::CallHomeBase: return "CallHomeBase";
    case GuidanceAction::Halt: return "Halt";
  }
  return "Unknown";
}

void FsmConfig::validate() const
{
  if (gesture_attempts < 1) {
    throw ConfigError("fsm.gesture_attempts", "must be >= 1");
  }
  if (!(lost_timeout > 0.0) || !std::isfinite(lost_timeout)) {
    throw ConfigError("fsm.lost_timeout", "must be > 0");
  }
}

GuidanceFsm::GuidanceFsm(FsmConfig config, double d_des, double d_resume)
: config_(config), d_des_(d_des), d_resume_(d_resume)
{
  config_.validate();
  if (!(d_des > 0.0)) throw ConfigError("controller.d_des", "must be > 0");
  if (!(d_resume > 0.0 && d_resume <= d_des)) {
    throw ConfigError("controller.d_resume", "must satisfy 0 < d_resume <= d_des");
  }
}

std::vector<GuidanceAction> GuidanceFsm::start()
{
  if (phase_ != GuidancePhase::Idle) {
    throw ProtocolError("start() called in phase " + std::string(to_string(phase_)));
  }
  phase_ = GuidancePhase::AwaitingGesture;
  return {GuidanceAction::CallTryGesture};
}

StepResult GuidanceFsm::step(const GuidanceEvent& event)
{
  if (last_tick_ && event.tick < *last_tick_) {
    throw ProtocolError("event tick " + std::to_string(event.tick) + " precedes tick " +
                        std::to_string(*last_tick_));
  }
  last_tick_ = event.tick;

  if (is_terminal(phase_)) {
    return {phase_, {}, true};
  }
  auto actions = transition(event.payload);
  return {phase_, std::move(actions), false};
}

std::vector<GuidanceAction> GuidanceFsm::transition(const EventPayload& payload)
{
  using A = GuidanceAction;
  using P = GuidancePhase;

  switch (phase_) {
    case P::AwaitingGesture:
      if (const auto* g = std::get_if<events::GestureResult>(&payload)) {
        ++attempts_used_;
        if (g->ok) {
          phase_ = P::Identifying;
          return {A::EnableTracker, A::CallFaceId};
        }
        if (attempts_used_ < config_.gesture_attempts) {
          return {A::CallTryGesture};
        }
        phase_ = P::ReturningHome;
        return {A::CallHomeBase};
      }
      break;

    case P::Identifying:
      if (const auto* id = std::get_if<events::IdentityLocked>(&payload)) {
        locked_ = id->person;
        phase_ = P::Guiding;
        return {A::CommandFollow};
      }
      if (std::holds_alternative<events::IdentityFailed>(payload)) {
        phase_ = P::ReturningHome;
        return {A::CallHomeBase};
      }
      break;

    case P::Guiding:
      if (const auto* d = std::get_if<events::DistanceUpdate>(&payload)) {
        if (d->valid && d->filtered > d_des_) {
          phase_ = P::Paused;
          return {A::CommandPause};
        }
      } else if (std::holds_alternative<events::PathCompleted>(payload)) {
        phase_ = P::Arrived;
        return {A::Halt};
      } else if (std::holds_alternative<events::LostTimeout>(payload)) {
        phase_ = P::ReturningHome;
        return {A::CallHomeBase};
      }
      break;

    case P::Paused:
      if (const auto* d = std::get_if<events::DistanceUpdate>(&payload)) {
        if (d->valid && d->filtered <= d_resume_) {
          phase_ = P::Guiding;
          return {A::CommandFollow};
        }
      } else if (std::holds_alternative<events::LostTimeout>(payload)) {
        phase_ = P::ReturningHome;
        return {A::CallHomeBase};
      }
      break;

    case P::ReturningHome:
      if (std::holds_alternative<events::HomeReached>(payload)) {
        phase_ = P::Aborted;
        return {A::Halt};
      }
      break;

    case P::Idle:
    case P::Arrived:
    case P::Aborted:
      break;
  }
  return {};
}

}  // namespace followme
