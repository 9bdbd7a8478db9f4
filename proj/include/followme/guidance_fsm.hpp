#pragma once

#include <optional>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "followme/world.hpp"

namespace followme {

enum class GuidancePhase {
  Idle,
  AwaitingGesture,
  Identifying,
  Guiding,
  Paused,
  Arrived,
  ReturningHome,
  Aborted,
};

std::string_view to_string(GuidancePhase phase);
/// Inverse of to_string; empty for unknown names.
std::optional<GuidancePhase> parse_phase(std::string_view name);

constexpr bool is_terminal(GuidancePhase p)
{
  return p == GuidancePhase::Arrived || p == GuidancePhase::Aborted;
}

namespace events {
struct GestureResult { bool ok; };
struct IdentityLocked { std::string person; };
struct IdentityFailed {};
struct DistanceUpdate { double filtered; bool valid; };
struct LostTimeout {};
struct PathCompleted {};
struct HomeReached {};
struct Tick {};
}  // namespace events

using EventPayload = std::variant<events::GestureResult, events::IdentityLocked,
                                  events::IdentityFailed, events::DistanceUpdate,
                                  events::LostTimeout, events::PathCompleted,
                                  events::HomeReached, events::Tick>;

struct GuidanceEvent
{
  Tick tick{0};
  EventPayload payload;
};

enum class GuidanceAction {
  CallTryGesture,
  EnableTracker,
  CallFaceId,
  CommandFollow,
  CommandPause,
  CallHomeBase,
  Halt,
};

std::string_view to_string(GuidanceAction action);

struct FsmConfig
{
  int gesture_attempts{1};
  double lost_timeout{2.0};  // seconds of consecutive invalid samples

  void validate() const;
  bool operator==(const FsmConfig&) const = default;
};

struct StepResult
{
  GuidancePhase phase;
  std::vector<GuidanceAction> actions;
  bool ignored_terminal{false};  // event arrived after Arrived/Aborted
};

/**
 * Mission sequencing for one guidance run:
 * gesture confirmation, identity lock, guided motion with pause/resume on the
 * pre-filtered distance, and the home-base fallback on any failure.
 *
 * Unlisted (phase, event) pairs leave the machine unchanged with no actions.
 */
class GuidanceFsm
{
public:
  explicit GuidanceFsm(FsmConfig config = {}, double d_des = 2.0, double d_resume = 1.8);

  /// Idle -> AwaitingGesture. Throws ProtocolError in any other phase.
  std::vector<GuidanceAction> start();

  /// Throws ProtocolError if `event.tick` precedes the last processed tick.
  StepResult step(const GuidanceEvent& event);

  GuidancePhase phase() const { return phase_; }
  int gesture_attempts_used() const { return attempts_used_; }
  const std::optional<std::string>& locked_person() const { return locked_; }
  const FsmConfig& config() const { return config_; }

private:
  std::vector<GuidanceAction> transition(const EventPayload& payload);

  FsmConfig config_;
  double d_des_;
  double d_resume_;
  GuidancePhase phase_{GuidancePhase::Idle};
  int attempts_used_{0};
  std::optional<std::string> locked_;
  std::optional<Tick> last_tick_;
};

}  // namespace followme
