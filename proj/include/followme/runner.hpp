#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "followme/bus.hpp"
#include "followme/guidance_fsm.hpp"
#include "followme/scenario.hpp"

namespace followme {

struct TraceRecord
{
  Tick tick{0};
  double time_s{0.0};
  std::optional<double> raw_distance_m;       // empty when the sample was invalid or absent
  std::optional<double> filtered_distance_m;  // empty before the first valid sample
  double robot_speed_mps{0.0};                // realized signed path speed
  GuidancePhase phase{GuidancePhase::Idle};
  bool user_in_fov{false};

  bool operator==(const TraceRecord&) const = default;
};

using Trace = std::vector<TraceRecord>;

enum class TerminationReason { Arrived, Aborted, MaxTicks };

std::string_view to_string(TerminationReason reason);

/// Inclusive tick range.
using StopInterval = std::pair<Tick, Tick>;

struct RunSummary
{
  GuidancePhase final_phase{GuidancePhase::Idle};
  std::vector<StopInterval> stop_intervals;
  double total_stopped_s{0.0};
  double total_distance_travelled_m{0.0};
  TerminationReason termination_reason{TerminationReason::MaxTicks};

  bool operator==(const RunSummary&) const = default;
};

struct RunResult
{
  Trace trace;
  RunSummary summary;
  std::vector<ServiceCallRecord> service_calls;
  double final_path_position_m{0.0};
  std::vector<double> true_distance_m;  // ground-truth robot-user gap, one per trace record
};

/// Maximal runs of zero speed while the phase is Guiding or Paused.
std::vector<StopInterval> compute_stop_intervals(const Trace& trace);

/// Derives a summary from a trace alone. Termination is inferred from the
/// final phase (non-terminal means the tick budget ran out).
RunSummary summarize(const Trace& trace, double dt);

/**
 * Executes one scenario. Per tick t:
 *   1. user step            5. FSM events / actions
 *   2. tracker publishes    6. velocity command
 *   3. bus delivery         7. robot advance (+ arrival / home events)
 *   4. filter update        8. trace record
 * Stops after the first record in a terminal phase or after max_ticks.
 */
RunResult run(const ScenarioConfig& config);

}  // namespace followme
