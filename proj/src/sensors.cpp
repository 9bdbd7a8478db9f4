#include "followme/sensors.hpp"

#include <algorithm>
#include <cmath>

#include "followme/errors.hpp"

namespace followme {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }

bool bernoulli(Rng& rng, double p)
{
  return std::bernoulli_distribution(p)(rng);
}

}  // namespace

void SensorNoise::validate() const
{
  if (!(sigma >= 0.0) || !std::isfinite(sigma)) throw ConfigError("noise.sigma", "must be >= 0");
  if (!is_probability(dropout_p)) throw ConfigError("noise.dropout_p", "must lie in [0, 1]");
  if (!is_probability(outlier_p)) throw ConfigError("noise.outlier_p", "must lie in [0, 1]");
  if (!(outlier_mag >= 0.0) || !std::isfinite(outlier_mag)) {
    throw ConfigError("noise.outlier_mag", "must be >= 0");
  }
}

void DetectorProfile::validate() const
{
  if (!is_probability(gesture_true_p)) throw ConfigError("detector.gesture_true_p", "must lie in [0, 1]");
  if (!is_probability(id_success_p)) throw ConfigError("detector.id_success_p", "must lie in [0, 1]");
  if (gesture_latency < 0) throw ConfigError("detector.gesture_latency", "must be >= 0");
  if (id_latency < 0) throw ConfigError("detector.id_latency", "must be >= 0");
}

DistanceSample sample_distance(const SensorNoise& noise, Rng& rng, Tick tick, double true_d,
                               bool in_view)
{
  DistanceSample sample{tick, std::nullopt};
  if (!in_view) {
    return sample;
  }
  const double u_drop = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  const double gauss = std::normal_distribution<double>(0.0, 1.0)(rng);
  const double u_out = std::uniform_real_distribution<double>(0.0, 1.0)(rng);
  if (u_drop < noise.dropout_p) {
    return sample;
  }
  double reading = true_d + noise.sigma * gauss;
  if (u_out < noise.outlier_p) {
    reading += noise.outlier_mag;
  }
  sample.raw = std::max(0.0, reading);
  return sample;
}

bool gesture_service(const DetectorProfile& profile, Rng& rng, bool user_gesturing)
{
  if (!user_gesturing) {
    return false;
  }
  return bernoulli(rng, profile.gesture_true_p);
}

IdentityResult face_id_service(const DetectorProfile& profile, Rng& rng,
                               std::span<const PersonId> persons_in_view)
{
  const auto target = std::find_if(persons_in_view.begin(), persons_in_view.end(),
                                   [](const PersonId& p) { return p.is_target; });
  if (target == persons_in_view.end()) {
    return std::nullopt;
  }
  if (!bernoulli(rng, profile.id_success_p)) {
    return std::nullopt;
  }
  return *target;
}

std::optional<DistanceSample> tracker_step(Rng& rng, const SensorNoise& noise,
                                           const WorldSnapshot& world, const TrackerState& tracker,
                                           Tick tick)
{
  if (!tracker.enabled || !tracker.locked) {
    return std::nullopt;
  }
  const bool visible = in_fov(world.fov, world.robot, world.locked_position);
  return sample_distance(noise, rng, tick, true_distance(world.robot, world.locked_position),
                         visible);
}

}  // namespace followme
