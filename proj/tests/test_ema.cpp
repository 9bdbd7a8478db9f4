#include <doctest.h>

#include <cmath>
#include <limits>
#include <random>
#include <vector>

#include "followme/ema.hpp"

using namespace followme;

TEST_CASE("ema_new accepts (0, 1] only")
{
  const auto s = ema_new(0.2);
  CHECK(s.alpha == 0.2);
  CHECK_FALSE(s.last.has_value());
  CHECK_NOTHROW(ema_new(1.0));
  CHECK_THROWS_AS(ema_new(0.0), ConfigError);
  CHECK_THROWS_AS(ema_new(-0.1), ConfigError);
  CHECK_THROWS_AS(ema_new(1.5), ConfigError);
  try {
    ema_new(0.0);
  } catch (const ConfigError& e) {
    CHECK(e.field() == "alpha");
  }
}

TEST_CASE("ema_update recursion examples")
{
  SUBCASE("alpha 1 passes through")
  {
    EmaState<double> s{1.0, 9.9};
    CHECK(ema_update(s, 3.7).second == 3.7);
  }
  SUBCASE("alpha 0.5 averages")
  {
    EmaState<double> s{0.5, 2.0};
    CHECK(ema_update(s, 4.0).second == doctest::Approx(3.0).epsilon(1e-15));
  }
  SUBCASE("first sample seeds the state")
  {
    const auto [next, y] = ema_update(ema_new(0.3), 2.5);
    CHECK(y == 2.5);
    REQUIRE(next.last.has_value());
    CHECK(*next.last == 2.5);
  }
  SUBCASE("constant input is a fixed point")
  {
    EmaFilter<double> f(0.2);
    for (int i = 0; i < 100; ++i) {
      CHECK(f.update(2.0) == 2.0);
    }
  }
}

TEST_CASE("ema_update rejects invalid measurements")
{
  const auto s = ema_new(0.2);
  CHECK_THROWS_AS(ema_update(s, -0.1), MeasurementError);
  CHECK_THROWS_AS(ema_update(s, std::nan("")), MeasurementError);
  CHECK_THROWS_AS(ema_update(s, std::numeric_limits<double>::infinity()), MeasurementError);
}

TEST_CASE("ema_reset clears history and keeps alpha")
{
  EmaState<double> s{0.2, 3.1};
  const auto once = ema_reset(s);
  CHECK(once.alpha == 0.2);
  CHECK_FALSE(once.last.has_value());
  CHECK(ema_reset(once) == once);
  CHECK(ema_update(once, 4.2).second == 4.2);
}

TEST_CASE("property: output stays within the span of inputs since reset")
{
  std::mt19937_64 rng(1234);
  std::uniform_real_distribution<double> alpha_dist(1e-3, 1.0);
  std::uniform_real_distribution<double> x_dist(0.0, 8.0);
  for (int trial = 0; trial < 200; ++trial) {
    EmaFilter<double> f(alpha_dist(rng));
    double lo = INFINITY;
    double hi = -INFINITY;
    for (int i = 0; i < 200; ++i) {
      const double x = x_dist(rng);
      lo = std::min(lo, x);
      hi = std::max(hi, x);
      const double y = f.update(x);
      REQUIRE(y >= lo);
      REQUIRE(y <= hi);
    }
  }
}

TEST_CASE("property: alpha 1 is the identity")
{
  std::mt19937_64 rng(99);
  std::uniform_real_distribution<double> x_dist(0.0, 100.0);
  EmaFilter<double> f(1.0);
  for (int i = 0; i < 1000; ++i) {
    const double x = x_dist(rng);
    REQUIRE(f.update(x) == x);
  }
}

TEST_CASE("step response follows (1 - alpha)^n")
{
  const double a = 1.0;
  const double b = 3.0;
  for (double alpha : {0.05, 0.2, 0.5, 0.9}) {
    EmaFilter<double> f(alpha);
    f.update(a);
    // brute-force unrolled reference
    double ref = a;
    for (int n = 1; n <= 60; ++n) {
      const double y = f.update(b);
      ref = alpha * b + (1.0 - alpha) * ref;
      const double closed = b - (b - a) * std::pow(1.0 - alpha, n);
      CHECK(y == doctest::Approx(closed).epsilon(1e-12));
      CHECK(y == doctest::Approx(ref).epsilon(1e-12));
    }
  }
}

TEST_CASE("variance reduction on i.i.d. noise")
{
  // Steady-state ratio is alpha / (2 - alpha) = 0.111 for alpha = 0.2.
  std::mt19937_64 rng(2024);
  std::normal_distribution<double> noise(0.0, 0.1);
  EmaFilter<double> f(0.2);
  std::vector<double> in;
  std::vector<double> out;
  for (int i = 0; i < 2050; ++i) {
    const double x = 1.5 + noise(rng);
    const double y = f.update(x);
    if (i >= 50) {
      in.push_back(x);
      out.push_back(y);
    }
  }
  auto var = [](const std::vector<double>& v) {
    double m = 0.0;
    for (double x : v) m += x;
    m /= static_cast<double>(v.size());
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return s / static_cast<double>(v.size() - 1);
  };
  const double ratio = var(out) / var(in);
  CHECK(ratio < 0.25);
  CHECK(ratio == doctest::Approx(0.2 / 1.8).epsilon(0.3));
}

TEST_CASE("single precision instantiation")
{
  EmaFilter<float> f(0.5f);
  CHECK(f.update(2.0f) == 2.0f);
  CHECK(f.update(4.0f) == 3.0f);
}
