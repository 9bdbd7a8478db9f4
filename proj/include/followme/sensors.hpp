#pragma once

#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <string>

#include "followme/world.hpp"

namespace followme {

using Rng = std::mt19937_64;

/// A person the simulated camera can see. `is_target` is ground truth that
/// only the perception services consult.
struct PersonId
{
  std::string name;
  bool is_target{false};

  bool operator==(const PersonId&) const = default;
};

/// One depth reading of the tracked person. `raw` is present iff the reading is valid.
struct DistanceSample
{
  Tick tick{0};
  std::optional<double> raw;

  bool valid() const { return raw.has_value(); }
  bool operator==(const DistanceSample&) const = default;
};

struct SensorNoise
{
  double sigma{0.05};       // meters, Gaussian std
  double dropout_p{0.02};
  double outlier_p{0.01};
  double outlier_mag{1.5};  // meters, positive spike
  std::uint64_t seed{0};

  void validate() const;
  bool operator==(const SensorNoise&) const = default;
};

struct DetectorProfile
{
  double gesture_true_p{0.95};
  Tick gesture_latency{10};
  double id_success_p{0.95};
  Tick id_latency{20};

  void validate() const;
  bool operator==(const DetectorProfile&) const = default;
};

/// Outcome of a face identification request: the locked person, or empty on failure.
using IdentityResult = std::optional<PersonId>;

/**
 * Draws one distance reading. Out-of-view targets yield an invalid sample
 * without consuming randomness; in-view readings always consume exactly three
 * draws (dropout, Gaussian, outlier) so stream alignment does not depend on
 * the outcome.
 */
DistanceSample sample_distance(const SensorNoise& noise, Rng& rng, Tick tick, double true_d,
                               bool in_view);

bool gesture_service(const DetectorProfile& profile, Rng& rng, bool user_gesturing);

IdentityResult face_id_service(const DetectorProfile& profile, Rng& rng,
                               std::span<const PersonId> persons_in_view);

struct TrackerState
{
  bool enabled{false};
  std::optional<PersonId> locked;
};

struct WorldSnapshot
{
  Pose2D robot;
  Point2 locked_position{Point2::Zero()};
  FovModel fov;
};

/// One skeleton-distance measurement of the locked person, or nothing when the
/// tracker is disabled or has no identity.
std::optional<DistanceSample> tracker_step(Rng& rng, const SensorNoise& noise,
                                           const WorldSnapshot& world, const TrackerState& tracker,
                                           Tick tick);

}  // namespace followme
