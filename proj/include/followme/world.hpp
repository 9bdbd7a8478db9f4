#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Core>

namespace followme {

using Tick = std::int64_t;
using Point2 = Eigen::Vector2d;

/// Wraps an angle into (-pi, pi].
double normalize_angle(double theta);

struct Pose2D
{
  Point2 position{Point2::Zero()};
  double theta{0.0};  // radians, (-pi, pi]
};

/// Arc-length position along a path, always within [0, total length].
struct PathPosition
{
  double s{0.0};
};

/// Ordered polyline with precomputed cumulative arc lengths.
class PathPolyline
{
public:
  /// Throws ConfigError("path.waypoints") for fewer than two points or
  /// repeated consecutive waypoints.
  explicit PathPolyline(std::vector<Point2> waypoints);

  double total_length() const { return cumulative_.back(); }
  const std::vector<Point2>& waypoints() const { return waypoints_; }
  const std::vector<double>& cumulative_lengths() const { return cumulative_; }

  /// Point and heading at arc length `s` (clamped). The heading is flipped
  /// when `reversed` is set.
  Pose2D pose_at(double s, bool reversed = false) const;

  /// Shortest distance from `p` to any polyline segment.
  double distance_to(const Point2& p) const;

private:
  std::size_t segment_index(double s) const;

  std::vector<Point2> waypoints_;
  std::vector<double> cumulative_;
};

struct AdvanceResult
{
  PathPosition position;
  Pose2D pose;
  bool completed{false};
};

/// Moves along the path by v*dt (v < 0 heads back toward the start) and clamps
/// to the path ends. `completed` reports arrival at the far end.
AdvanceResult advance_along_path(const PathPolyline& path, PathPosition pos, double v, double dt);

enum class UserBehaviorKind { FollowAtGap, Hold, LeaveField };

struct UserBehavior
{
  UserBehaviorKind kind{UserBehaviorKind::Hold};
  double target_gap{0.0};  // meters, FollowAtGap only

  static UserBehavior follow(double gap) { return {UserBehaviorKind::FollowAtGap, gap}; }
  static UserBehavior hold() { return {UserBehaviorKind::Hold, 0.0}; }
  static UserBehavior leave() { return {UserBehaviorKind::LeaveField, 0.0}; }

  bool operator==(const UserBehavior&) const = default;
};

struct ScriptSegment
{
  double start{0.0};  // seconds, inclusive
  double end{0.0};    // seconds, exclusive
  UserBehavior behavior;

  bool operator==(const ScriptSegment&) const = default;
};

/// Time-ordered, non-overlapping behaviour segments. Uncovered time is Hold.
class UserScript
{
public:
  UserScript() = default;
  explicit UserScript(std::vector<ScriptSegment> segments);

  UserBehavior behavior_at(double t) const;
  const std::vector<ScriptSegment>& segments() const { return segments_; }

  bool operator==(const UserScript&) const = default;

private:
  std::vector<ScriptSegment> segments_;
};

Point2 step_user(const UserScript& script, double t, const Point2& user, const Pose2D& robot,
                 double dt, double user_speed_max);

double true_distance(const Pose2D& robot, const Point2& user);

/// Rear-facing camera cone.
struct FovModel
{
  double half_angle{0.7592};  // radians (43.5 deg)
  double max_range{6.0};      // meters

  void validate() const;
  bool operator==(const FovModel&) const = default;
};

bool in_fov(const FovModel& fov, const Pose2D& robot, const Point2& user);

}  // namespace followme
