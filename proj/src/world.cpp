#include "followme/world.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "followme/errors.hpp"

namespace followme {

double normalize_angle(double theta)
{
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double wrapped = std::fmod(theta, two_pi);
  if (wrapped <= -std::numbers::pi) {
    wrapped += two_pi;
  } else if (wrapped > std::numbers::pi) {
    wrapped -= two_pi;
  }
  return wrapped;
}

PathPolyline::PathPolyline(std::vector<Point2> waypoints) : waypoints_(std::move(waypoints))
{
  if (waypoints_.size() < 2) {
    throw ConfigError("path.waypoints", "needs at least two waypoints");
  }
  cumulative_.reserve(waypoints_.size());
  cumulative_.push_back(0.0);
  for (std::size_t i = 1; i < waypoints_.size(); ++i) {
    const double len = (waypoints_[i] - waypoints_[i - 1]).norm();
    if (!(len > 0.0) || !std::isfinite(len)) {
      throw ConfigError("path.waypoints", "consecutive waypoints must be distinct and finite");
    }
    cumulative_.push_back(cumulative_.back() + len);
  }
}

std::size_t PathPolyline::segment_index(double s) const
{
  // Last segment whose start is <= s; the final knot belongs to the last segment.
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), s);
  const auto idx = static_cast<std::size_t>(std::distance(cumulative_.begin(), it));
  return std::clamp<std::size_t>(idx == 0 ? 0 : idx - 1, 0, waypoints_.size() - 2);
}

Pose2D PathPolyline::pose_at(double s, bool reversed) const
{
  s = std::clamp(s, 0.0, total_length());
  const std::size_t i = segment_index(s);
  const Point2& a = waypoints_[i];
  const Point2& b = waypoints_[i + 1];
  const double seg_len = cumulative_[i + 1] - cumulative_[i];
  const double u = std::clamp((s - cumulative_[i]) / seg_len, 0.0, 1.0);

  Pose2D pose;
  pose.position = a + u * (b - a);
  if (s == total_length()) {
    pose.position = b;
  }
  const Point2 dir = b - a;
  double heading = std::atan2(dir.y(), dir.x());
  if (reversed) {
    heading += std::numbers::pi;
  }
  pose.theta = normalize_angle(heading);
  return pose;
}

double PathPolyline::distance_to(const Point2& p) const
{
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i + 1 < waypoints_.size(); ++i) {
    const Point2 ab = waypoints_[i + 1] - waypoints_[i];
    const double u = std::clamp((p - waypoints_[i]).dot(ab) / ab.squaredNorm(), 0.0, 1.0);
    best = std::min(best, (waypoints_[i] + u * ab - p).norm());
  }
  return best;
}

AdvanceResult advance_along_path(const PathPolyline& path, PathPosition pos, double v, double dt)
{
  AdvanceResult out;
  out.position.s = std::clamp(pos.s + v * dt, 0.0, path.total_length());
  out.pose = path.pose_at(out.position.s, v < 0.0);
  out.completed = out.position.s == path.total_length();
  return out;
}

UserScript::UserScript(std::vector<ScriptSegment> segments) : segments_(std::move(segments))
{
  for (std::size_t i = 0; i < segments_.size(); ++i) {
    const auto& seg = segments_[i];
    if (!(seg.start >= 0.0) || !(seg.end > seg.start)) {
      throw ConfigError("user_script", "segment " + std::to_string(i) + " needs 0 <= start < end");
    }
    if (seg.behavior.kind == UserBehaviorKind::FollowAtGap && !(seg.behavior.target_gap >= 0.0)) {
      throw ConfigError("user_script", "segment " + std::to_string(i) + " gap must be >= 0");
    }
    if (i > 0 && seg.start < segments_[i - 1].end) {
      throw ConfigError("user_script", "segment " + std::to_string(i) + " overlaps or is out of order");
    }
  }
}

UserBehavior UserScript::behavior_at(double t) const
{
  for (const auto& seg : segments_) {
    if (t >= seg.start && t < seg.end) {
      return seg.behavior;
    }
  }
  return UserBehavior::hold();
}

Point2 step_user(const UserScript& script, double t, const Point2& user, const Pose2D& robot,
                 double dt, double user_speed_max)
{
  const UserBehavior behavior = script.behavior_at(t);
  const double reach = user_speed_max * dt;
  switch (behavior.kind) {
    case UserBehaviorKind::Hold:
      return user;
    case UserBehaviorKind::FollowAtGap: {
      const Point2 to_robot = robot.position - user;
      const double gap = to_robot.norm();
      if (gap <= behavior.target_gap) {
        return user;
      }
      const double step = std::min(reach, gap - behavior.target_gap);
      return user + (step / gap) * to_robot;
    }
    case UserBehaviorKind::LeaveField: {
      // Left of the robot heading.
      const Point2 lateral(-std::sin(robot.theta), std::cos(robot.theta));
      return user + reach * lateral;
    }
  }
  return user;
}

double true_distance(const Pose2D& robot, const Point2& user)
{
  return (user - robot.position).norm();
}

void FovModel::validate() const
{
  if (!(half_angle > 0.0 && half_angle < std::numbers::pi)) {
    throw ConfigError("fov.half_angle", "must lie in (0, pi)");
  }
  if (!(max_range > 0.0)) {
    throw ConfigError("fov.max_range", "must be > 0");
  }
}

bool in_fov(const FovModel& fov, const Pose2D& robot, const Point2& user)
{
  const Point2 rel = user - robot.position;
  const double d = rel.norm();
  if (d == 0.0) {
    return true;
  }
  if (d > fov.max_range) {
    return false;
  }
  const Point2 rear(-std::cos(robot.theta), -std::sin(robot.theta));
  const double cos_off = std::clamp(rear.dot(rel) / d, -1.0, 1.0);
  return std::acos(cos_off) <= fov.half_angle;
}

}  // namespace followme
