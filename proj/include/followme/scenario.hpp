#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "followme/follow_controller.hpp"
#include "followme/guidance_fsm.hpp"
#include "followme/sensors.hpp"
#include "followme/world.hpp"

namespace followme {

struct ScenarioConfig
{
  std::string name{"scenario"};

  std::vector<Point2> path_waypoints;
  Point2 user_start{Point2::Zero()};
  std::vector<Point2> bystanders;
  UserScript user_script;
  bool user_gestures{true};
  double user_speed_max{1.2};  // m/s

  ControllerConfig controller;
  FsmConfig fsm;
  double alpha{0.2};
  SensorNoise noise;  // noise.seed seeds the whole run
  DetectorProfile detector;
  FovModel fov;
  double service_timeout{2.0};  // seconds

  double dt{0.05};
  Tick max_ticks{12000};

  /// Throws ConfigError naming the first offending field.
  void validate() const;

  Tick service_timeout_ticks() const;
};

/**
 * Parses the scenario text format: flat `key = value` lines grouped under
 * `[section]` headers, arrays in square brackets, `[[user_script]]` tables
 * for the scripted user, `#` comments. Only `path.waypoints` is required;
 * an omitted `user_start` places the user 1.2 m behind the first waypoint.
 *
 * Throws ParseError (with line) on malformed text or unknown keys and
 * ConfigError on out-of-range values. The result is validated.
 */
ScenarioConfig load_scenario(std::string_view text);
ScenarioConfig load_scenario_file(const std::string& path);

/// Serializes every field, defaults included, in the format load_scenario reads.
std::string write_scenario(const ScenarioConfig& config);

}  // namespace followme
