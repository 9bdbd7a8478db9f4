#include <doctest.h>

#include <random>

#include "followme/errors.hpp"
#include "followme/follow_controller.hpp"

using namespace followme;

TEST_CASE("classify_distance examples")
{
  const ControllerConfig cfg;
  FollowState moving;
  FollowState paused{true, 0};

  auto [s1, c1] = classify_distance(cfg, moving, 2.5, true);
  CHECK(s1.paused);
  CHECK(c1 == DistanceClass::BeyondDesired);

  auto [s2, c2] = classify_distance(cfg, paused, 1.5, true);
  CHECK_FALSE(s2.paused);
  CHECK(c2 == DistanceClass::WithinResume);

  auto [s3, c3] = classify_distance(cfg, moving, 2.0, true);
  CHECK_FALSE(s3.paused);
  CHECK(c3 == DistanceClass::HysteresisBand);

  auto [s4, c4] = classify_distance(cfg, paused, 1.9, true);
  CHECK(s4.paused);
  CHECK(c4 == DistanceClass::HysteresisBand);

  FollowState s = paused;
  for (int i = 0; i < 3; ++i) s = classify_distance(cfg, s, 0.0, false).first;
  CHECK(s.paused);
  CHECK(s.ticks_since_valid_sample == 3);
  s = classify_distance(cfg, s, 1.0, true).first;
  CHECK(s.ticks_since_valid_sample == 0);
}

TEST_CASE("compute_command")
{
  const ControllerConfig cfg;
  CHECK(compute_command(cfg, GuidancePhase::Guiding, FollowState{false, 0}).linear == 0.5);
  CHECK(compute_command(cfg, GuidancePhase::Guiding, FollowState{true, 0}).linear == 0.0);
  CHECK(compute_command(cfg, GuidancePhase::Paused, FollowState{true, 0}).linear == 0.0);
  CHECK(compute_command(cfg, GuidancePhase::Arrived, FollowState{false, 0}).linear == 0.0);
  CHECK(compute_command(cfg, GuidancePhase::ReturningHome, FollowState{true, 0}).linear == 0.5);
  CHECK(compute_command(cfg, GuidancePhase::Identifying, FollowState{}).linear == 0.0);
  CHECK(compute_command(cfg, GuidancePhase::Guiding, FollowState{}).angular == 0.0);
}

TEST_CASE("lost_timeout_elapsed")
{
  const FsmConfig fsm{1, 2.0};
  CHECK(lost_timeout_elapsed(fsm, FollowState{false, 40}, 0.05));
  CHECK_FALSE(lost_timeout_elapsed(fsm, FollowState{false, 39}, 0.05));
  FollowState s{false, 39};
  s = classify_distance(ControllerConfig{}, s, 1.0, true).first;
  CHECK_FALSE(lost_timeout_elapsed(fsm, s, 0.05));
}

TEST_CASE("config validation")
{
  CHECK_NOTHROW(ControllerConfig{}.validate());
  CHECK_THROWS_AS((ControllerConfig{2.0, 2.2, 0.5, 1.5}.validate()), ConfigError);
  CHECK_THROWS_AS((ControllerConfig{2.0, 0.0, 0.5, 1.5}.validate()), ConfigError);
  CHECK_THROWS_AS((ControllerConfig{2.0, 1.8, 2.0, 1.5}.validate()), ConfigError);
  CHECK_THROWS_AS((ControllerConfig{2.0, 1.8, 0.0, 1.5}.validate()), ConfigError);
}

TEST_CASE("property: no chattering on a monotone crossing")
{
  const ControllerConfig cfg;
  std::mt19937_64 rng(17);
  std::uniform_real_distribution<double> step(0.0, 0.05);
  for (int trial = 0; trial < 200; ++trial) {
    FollowState s;
    int pauses = 0;
    int resumes = 0;
    double d = 1.0;
    while (d < 3.0) {
      const bool before = s.paused;
      s = classify_distance(cfg, s, d, true).first;
      pauses += (!before && s.paused) ? 1 : 0;
      d += step(rng);
    }
    while (d > 1.0) {
      const bool before = s.paused;
      s = classify_distance(cfg, s, d, true).first;
      if (before && !s.paused) {
        ++resumes;
        REQUIRE(d <= cfg.d_resume);
      }
      d -= step(rng);
    }
    REQUIRE(pauses == 1);
    REQUIRE(resumes == 1);
  }
}

TEST_CASE("property: command bound and safety")
{
  const ControllerConfig cfg;
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> dist(0.0, 4.0);
  FollowState s;
  for (int i = 0; i < 5000; ++i) {
    const double d = dist(rng);
    s = classify_distance(cfg, s, d, true).first;
    const auto cmd = compute_command(cfg, GuidancePhase::Guiding, s);
    REQUIRE(std::abs(cmd.linear) <= cfg.v_max);
    if (d > cfg.d_des) REQUIRE(cmd.linear == 0.0);
  }
}
