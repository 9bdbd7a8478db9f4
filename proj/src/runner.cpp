#include "followme/runner.hpp"

#include <cmath>
#include <variant>

#include "followme/ema.hpp"
#include "followme/follow_controller.hpp"
#include "followme/sensors.hpp"

namespace followme {

std::string_view to_string(TerminationReason reason)
{
  switch (reason) {
    case TerminationReason::Arrived: return "Arrived";
    case TerminationReason::Aborted: return "Aborted";
    case TerminationReason::MaxTicks: return "MaxTicks";
  }
  return "Unknown";
}

std::vector<StopInterval> compute_stop_intervals(const Trace& trace)
{
  std::vector<StopInterval> out;
  std::optional<Tick> open;
  Tick prev = 0;
  for (const auto& rec : trace) {
    const bool guided = rec.phase == GuidancePhase::Guiding || rec.phase == GuidancePhase::Paused;
    const bool stopped = guided && rec.robot_speed_mps == 0.0;
    if (stopped && !open) {
      open = rec.tick;
    } else if (!stopped && open) {
      out.emplace_back(*open, prev);
      open.reset();
    }
    prev = rec.tick;
  }
  if (open) {
    out.emplace_back(*open, prev);
  }
  return out;
}

RunSummary summarize(const Trace& trace, double dt)
{
  RunSummary s;
  if (trace.empty()) {
    return s;
  }
  s.final_phase = trace.back().phase;
  s.stop_intervals = compute_stop_intervals(trace);
  for (const auto& [a, b] : s.stop_intervals) {
    s.total_stopped_s += static_cast<double>(b - a + 1) * dt;
  }
  for (const auto& rec : trace) {
    s.total_distance_travelled_m += std::abs(rec.robot_speed_mps) * dt;
  }
  switch (s.final_phase) {
    case GuidancePhase::Arrived: s.termination_reason = TerminationReason::Arrived; break;
    case GuidancePhase::Aborted: s.termination_reason = TerminationReason::Aborted; break;
    default: s.termination_reason = TerminationReason::MaxTicks; break;
  }
  return s;
}

namespace {

using Message = std::variant<std::monostate, bool, DistanceSample, IdentityResult>;

class Simulation
{
public:
  explicit Simulation(const ScenarioConfig& cfg)
  : cfg_(cfg),
    path_(cfg.path_waypoints),
    rng_(cfg.noise.seed),
    fsm_(cfg.fsm, cfg.controller.d_des, cfg.controller.d_resume),
    filter_(cfg.alpha),
    user_(cfg.user_start),
    robot_(path_.pose_at(0.0)),
    timeout_ticks_(cfg.service_timeout_ticks())
  {
    bus_.declare_topic(topics::distance_samples);
    bus_.register_service(
        services::try_gesture,
        [this](const Message&) -> Message {
          const bool gesturing = cfg_.user_gestures && in_fov(cfg_.fov, robot_, user_);
          return gesture_service(cfg_.detector, rng_, gesturing);
        },
        cfg.detector.gesture_latency);
    bus_.register_service(
        services::face_id,
        [this](const Message&) -> Message {
          return face_id_service(cfg_.detector, rng_, persons_in_view());
        },
        cfg.detector.id_latency);
    bus_.register_service(
        services::tracker_enable,
        [this](const Message&) -> Message {
          tracker_.enabled = true;
          return true;
        },
        0);
    bus_.register_service(
        services::home_base, [](const Message&) -> Message { return true; }, 0);
  }

  RunResult execute()
  {
    RunResult result;
    for (Tick t = 0; t < cfg_.max_ticks; ++t) {
      const double now_s = static_cast<double>(t) * cfg_.dt;
      tick_sample_.reset();

      // 1. user
      user_ = step_user(cfg_.user_script, now_s, user_, robot_, cfg_.dt, cfg_.user_speed_max);
      const bool user_visible = in_fov(cfg_.fov, robot_, user_);
      const double gap = true_distance(robot_, user_);

      // 2. sense
      const WorldSnapshot snapshot{robot_, user_, cfg_.fov};
      if (auto sample = tracker_step(rng_, cfg_.noise, snapshot, tracker_, t)) {
        bus_.publish(topics::distance_samples, *sample, t);
      }

      // 3-5. deliver, filter, decide
      if (t == 0) {
        perform(fsm_.start(), t);
      }
      for (auto& d : bus_.tick_deliver(t)) {
        handle(d, t);
      }

      // 6. command
      const VelocityCommand cmd = compute_command(cfg_.controller, fsm_.phase(), follow_);
      const double v = fsm_.phase() == GuidancePhase::ReturningHome ? -cmd.linear : cmd.linear;

      // 7. integrate
      const double s_before = position_.s;
      const AdvanceResult moved = advance_along_path(path_, position_, v, cfg_.dt);
      position_ = moved.position;
      if (v != 0.0) {
        robot_ = moved.pose;
      }
      const double speed = (position_.s - s_before) / cfg_.dt;
      if (fsm_.phase() == GuidancePhase::Guiding && moved.completed) {
        step(events::PathCompleted{}, t);
      } else if (fsm_.phase() == GuidancePhase::ReturningHome && position_.s == 0.0) {
        step(events::HomeReached{}, t);
      }

      // 8. record
      TraceRecord rec;
      rec.tick = t;
      rec.time_s = now_s;
      if (tick_sample_ && tick_sample_->valid()) {
        rec.raw_distance_m = tick_sample_->raw;
      }
      rec.filtered_distance_m = filter_.value();
      rec.robot_speed_mps = speed;
      rec.phase = fsm_.phase();
      rec.user_in_fov = user_visible;
      result.trace.push_back(rec);
      result.true_distance_m.push_back(gap);

      if (is_terminal(fsm_.phase())) {
        break;
      }
    }
    result.summary = summarize(result.trace, cfg_.dt);
    result.service_calls = bus_.call_log();
    result.final_path_position_m = position_.s;
    return result;
  }

private:
  std::vector<PersonId> persons_in_view() const
  {
    std::vector<PersonId> out;
    if (in_fov(cfg_.fov, robot_, user_)) {
      out.push_back(PersonId{"user", true});
    }
    for (std::size_t i = 0; i < cfg_.bystanders.size(); ++i) {
      if (in_fov(cfg_.fov, robot_, cfg_.bystanders[i])) {
        out.push_back(PersonId{"bystander_" + std::to_string(i + 1), false});
      }
    }
    return out;
  }

  void step(EventPayload payload, Tick t)
  {
    auto res = fsm_.step(GuidanceEvent{t, std::move(payload)});
    perform(res.actions, t);
  }

  void perform(const std::vector<GuidanceAction>& actions, Tick t)
  {
    for (const auto action : actions) {
      switch (action) {
        case GuidanceAction::CallTryGesture:
          bus_.call_service(services::try_gesture, std::monostate{}, t, timeout_ticks_);
          break;
        case GuidanceAction::EnableTracker:
          bus_.call_service(services::tracker_enable, std::monostate{}, t, timeout_ticks_);
          break;
        case GuidanceAction::CallFaceId:
          bus_.call_service(services::face_id, std::monostate{}, t, timeout_ticks_);
          break;
        case GuidanceAction::CallHomeBase:
          bus_.call_service(services::home_base, std::monostate{}, t, timeout_ticks_);
          break;
        case GuidanceAction::Halt:
          tracker_.enabled = false;
          break;
        case GuidanceAction::CommandFollow:
        case GuidanceAction::CommandPause:
          break;
      }
    }
  }

  void handle(const Delivery<Message>& d, Tick t)
  {
    const bool failed = d.kind == DeliveryKind::Timeout || d.kind == DeliveryKind::NotFound;
    if (d.kind == DeliveryKind::Topic) {
      if (const auto* sample = std::get_if<DistanceSample>(&d.payload)) {
        on_sample(*sample, t);
      }
    } else if (d.name == services::try_gesture) {
      const auto* ok = std::get_if<bool>(&d.payload);
      step(events::GestureResult{!failed && ok && *ok}, t);
    } else if (d.name == services::face_id) {
      const auto* id = std::get_if<IdentityResult>(&d.payload);
      if (failed || !id || !id->has_value()) {
        step(events::IdentityFailed{}, t);
        return;
      }
      const PersonId person = **id;
      step(events::IdentityLocked{person.name}, t);
      if (fsm_.phase() == GuidancePhase::Guiding) {
        tracker_.locked = person;
        filter_.reset();
        follow_ = FollowState{};
      }
    }
  }

  void on_sample(const DistanceSample& sample, Tick t)
  {
    tick_sample_ = sample;
    if (sample.valid()) {
      const double filtered = filter_.update(*sample.raw);
      follow_ = classify_distance(cfg_.controller, follow_, filtered, true).first;
      step(events::DistanceUpdate{filtered, true}, t);
      return;
    }
    follow_ = classify_distance(cfg_.controller, follow_, 0.0, false).first;
    if (lost_timeout_elapsed(cfg_.fsm, follow_, cfg_.dt)) {
      step(events::LostTimeout{}, t);
    }
  }

  const ScenarioConfig& cfg_;
  PathPolyline path_;
  Rng rng_;
  Bus<Message> bus_;
  GuidanceFsm fsm_;
  EmaFilter<double> filter_;
  FollowState follow_;
  TrackerState tracker_;
  Point2 user_;
  Pose2D robot_;
  PathPosition position_;
  Tick timeout_ticks_;
  std::optional<DistanceSample> tick_sample_;
};

}  // namespace

RunResult run(const ScenarioConfig& config)
{
  config.validate();
  Simulation sim(config);
  return sim.execute();
}

}  // namespace followme
