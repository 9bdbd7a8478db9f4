// Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any failure.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "followme/ema.hpp"
#include "followme/guidance_fsm.hpp"
#include "followme/runner.hpp"
#include "followme/scenario.hpp"
#include "followme/trace_io.hpp"

using namespace followme;

namespace {

const std::vector<std::string> kScenarios{"happy_path", "gesture_refused", "intermittent_lag",
                                          "walk_away", "noisy_constant"};

ScenarioConfig bundled(const std::string& name)
{
  return load_scenario_file(std::string(FOLLOWME_SCENARIO_DIR) + "/" + name + ".toml");
}

double elapsed_s(std::chrono::steady_clock::time_point since)
{
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - since).count();
}

bool guided(GuidancePhase p) { return p == GuidancePhase::Guiding || p == GuidancePhase::Paused; }

struct Verdict
{
  bool pass;
  std::string detail;
};

// 1 -------------------------------------------------------------------------
Verdict threshold_safety()
{
  const auto t0 = std::chrono::steady_clock::now();
  std::mt19937_64 seeds(20240601);
  std::vector<std::uint64_t> seed_list(100);
  for (auto& s : seed_list) s = seeds();

  long violations = 0;
  long ticks = 0;
  for (const auto& name : kScenarios) {
    auto cfg = bundled(name);
    const double d_des = cfg.controller.d_des;
    if (d_des != 2.0) return {false, name + " does not use the 2.0 m threshold"};
    for (const auto seed : seed_list) {
      cfg.noise.seed = seed;
      const auto r = run(cfg);
      for (const auto& rec : r.trace) {
        ++ticks;
        if (guided(rec.phase) && rec.filtered_distance_m && *rec.filtered_distance_m > 2.0 &&
            rec.robot_speed_mps > 0.0) {
          ++violations;
        }
      }
    }
  }
  const double secs = elapsed_s(t0);
  std::ostringstream d;
  d << violations << " violating ticks of " << ticks << " (500 runs) in " << secs << " s (< 10 s)";
  return {violations == 0 && secs < 10.0, d.str()};
}

// 2 -------------------------------------------------------------------------
Verdict stop_resume()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = bundled("intermittent_lag");
  const auto r = run(cfg);
  const double secs = elapsed_s(t0);

  std::vector<ScriptSegment> holds;
  for (const auto& seg : cfg.user_script.segments()) {
    if (seg.behavior.kind == UserBehaviorKind::Hold) holds.push_back(seg);
  }
  const auto& stops = r.summary.stop_intervals;
  std::ostringstream d;
  d << stops.size() << " stop intervals for " << holds.size() << " holds";
  bool ok = holds.size() == 2 && stops.size() == 2;
  for (std::size_t i = 0; ok && i < 2; ++i) {
    const double start_lag = static_cast<double>(stops[i].first) * cfg.dt - holds[i].start;
    // first tick after the hold at which the user is back within d_resume
    std::optional<double> reclose;
    for (std::size_t k = 0; k < r.trace.size(); ++k) {
      if (r.trace[k].time_s >= holds[i].end && r.true_distance_m[k] <= cfg.controller.d_resume) {
        reclose = r.trace[k].time_s;
        break;
      }
    }
    const double end_time = static_cast<double>(stops[i].second) * cfg.dt;
    const double end_lag = reclose ? end_time - *reclose : 1e9;
    d << "; stop " << i + 1 << " starts +" << start_lag << " s after hold, ends +" << end_lag
      << " s after re-close";
    ok = ok && start_lag >= 0.0 && start_lag <= 1.0 && reclose && end_lag >= 0.0 && end_lag <= 1.0;
  }
  d << "; " << secs << " s (< 1 s)";
  return {ok && secs < 1.0, d.str()};
}

// 3 -------------------------------------------------------------------------
Verdict ema_effectiveness()
{
  const auto t0 = std::chrono::steady_clock::now();
  const auto cfg = bundled("noisy_constant");
  const auto r = run(cfg);
  const double secs = elapsed_s(t0);

  std::vector<double> raw;
  std::vector<double> filt;
  double worst_truth = 0.0;
  int valid = 0;
  for (std::size_t k = 0; k < r.trace.size(); ++k) {
    const auto& rec = r.trace[k];
    if (!rec.raw_distance_m) continue;
    ++valid;
    worst_truth = std::max(worst_truth, std::abs(r.true_distance_m[k] - 1.5));
    if (valid > 50) {  // burn-in
      raw.push_back(*rec.raw_distance_m);
      filt.push_back(*rec.filtered_distance_m);
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
  const double ratio = raw.size() > 1 ? var(filt) / var(raw) : 1.0;
  std::ostringstream d;
  d << valid << " valid samples, var ratio " << ratio << " (< 0.25; analytic "
    << cfg.alpha / (2.0 - cfg.alpha) << "), sigma " << cfg.noise.sigma << ", alpha " << cfg.alpha
    << ", max |true - 1.5| " << worst_truth << ", " << secs << " s (< 1 s)";
  const bool ok = valid >= 2000 && ratio < 0.25 && cfg.noise.sigma == 0.1 && cfg.alpha == 0.2 &&
                  worst_truth < 1e-6 && secs < 1.0;
  return {ok, d.str()};
}

// 4 -------------------------------------------------------------------------
Verdict abort_paths()
{
  const auto refused = run(bundled("gesture_refused"));
  const auto away = run(bundled("walk_away"));
  bool returned = false;
  for (const auto& rec : away.trace) returned |= rec.phase == GuidancePhase::ReturningHome;
  int home_calls = 0;
  for (const auto& c : away.service_calls) home_calls += c.service == services::home_base ? 1 : 0;

  std::ostringstream d;
  d << "gesture_refused " << to_string(refused.summary.final_phase) << " displacement "
    << refused.final_path_position_m << "; walk_away " << to_string(away.summary.final_phase)
    << " via ReturningHome=" << returned << " final s " << away.final_path_position_m
    << " home_base calls " << home_calls;
  const bool ok = refused.summary.final_phase == GuidancePhase::Aborted &&
                  std::abs(refused.final_path_position_m) <= 1e-6 &&
                  away.summary.final_phase == GuidancePhase::Aborted && returned &&
                  std::abs(away.final_path_position_m) <= 1e-6 && home_calls == 1;
  return {ok, d.str()};
}

// 5 -------------------------------------------------------------------------
Verdict fsm_coverage()
{
  using A = GuidanceAction;
  using P = GuidancePhase;
  using Actions = std::vector<GuidanceAction>;
  struct Row
  {
    const char* name;
    std::vector<EventPayload> prefix;  // after start()
    EventPayload event;
    int attempts;
    P expect_phase;
    Actions expect_actions;
  };
  const events::GestureResult yes{true};
  const events::GestureResult no{false};
  const events::IdentityLocked locked{"user"};
  const std::vector<Row> rows{
      {"AwaitingGesture+GestureResult(true)", {}, yes, 1, P::Identifying, {A::EnableTracker, A::CallFaceId}},
      {"AwaitingGesture+GestureResult(false) retry", {}, no, 2, P::AwaitingGesture, {A::CallTryGesture}},
      {"AwaitingGesture+GestureResult(false) exhausted", {}, no, 1, P::ReturningHome, {A::CallHomeBase}},
      {"Identifying+IdentityLocked", {yes}, locked, 1, P::Guiding, {A::CommandFollow}},
      {"Identifying+IdentityFailed", {yes}, events::IdentityFailed{}, 1, P::ReturningHome, {A::CallHomeBase}},
      {"Guiding+DistanceUpdate(>d_des)", {yes, locked}, events::DistanceUpdate{2.5, true}, 1, P::Paused, {A::CommandPause}},
      {"Paused+DistanceUpdate(<=d_resume)", {yes, locked, events::DistanceUpdate{2.5, true}}, events::DistanceUpdate{1.5, true}, 1, P::Guiding, {A::CommandFollow}},
      {"Guiding+LostTimeout", {yes, locked}, events::LostTimeout{}, 1, P::ReturningHome, {A::CallHomeBase}},
      {"Paused+LostTimeout", {yes, locked, events::DistanceUpdate{2.5, true}}, events::LostTimeout{}, 1, P::ReturningHome, {A::CallHomeBase}},
      {"Guiding+PathCompleted", {yes, locked}, events::PathCompleted{}, 1, P::Arrived, {A::Halt}},
      {"ReturningHome+HomeReached", {no}, events::HomeReached{}, 1, P::Aborted, {A::Halt}},
  };
  const std::vector<EventPayload> alphabet{
      yes, no, locked, events::IdentityFailed{}, events::DistanceUpdate{2.5, true},
      events::DistanceUpdate{1.5, true}, events::LostTimeout{}, events::PathCompleted{},
      events::HomeReached{}, events::Tick{}};

  int passed = 0;
  std::string failures;
  for (const auto& row : rows) {
    GuidanceFsm fsm(FsmConfig{row.attempts, 2.0}, 2.0, 1.8);
    bool ok = fsm.start() == Actions{A::CallTryGesture};
    Tick t = 0;
    for (const auto& e : row.prefix) fsm.step(GuidanceEvent{t++, e});
    const auto res = fsm.step(GuidanceEvent{t++, row.event});
    ok = ok && res.phase == row.expect_phase && res.actions == row.expect_actions;
    if (is_terminal(res.phase)) {
      for (const auto& e : alphabet) {
        const auto after = fsm.step(GuidanceEvent{t++, e});
        ok = ok && after.actions.empty() && after.phase == res.phase && after.ignored_terminal;
      }
    }
    passed += ok ? 1 : 0;
    if (!ok) failures += std::string(" ") + row.name;
  }
  std::ostringstream d;
  d << passed << "/" << rows.size() << " transition rows verified verbatim" << failures;
  return {passed == static_cast<int>(rows.size()), d.str()};
}

// 6 -------------------------------------------------------------------------
Verdict determinism()
{
  auto render = [](const ScenarioConfig& cfg) {
    const auto r = run(cfg);
    std::ostringstream csv;
    std::ostringstream json;
    write_trace_csv(r.trace, csv);
    write_summary_json(r.summary, json);
    return std::make_pair(csv.str(), json.str());
  };
  bool identical = true;
  for (const auto& name : kScenarios) {
    const auto cfg = bundled(name);
    identical = identical && render(cfg) == render(cfg);
  }
  auto raw_column = [](const ScenarioConfig& cfg) {
    std::vector<std::optional<double>> col;
    for (const auto& rec : run(cfg).trace) col.push_back(rec.raw_distance_m);
    return col;
  };
  auto a = bundled("noisy_constant");
  auto b = a;
  b.noise.seed = a.noise.seed + 1;
  const bool differ = raw_column(a) != raw_column(b);
  std::ostringstream d;
  d << "identical reruns: " << (identical ? "yes" : "no")
    << "; different seeds change raw column: " << (differ ? "yes" : "no");
  return {identical && differ, d.str()};
}

// 7 -------------------------------------------------------------------------
Verdict filter_oracle()
{
  std::mt19937_64 rng(777);
  std::uniform_real_distribution<double> alpha_dist(0.01, 1.0);
  std::uniform_real_distribution<double> x_dist(0.1, 10.0);
  std::uniform_int_distribution<int> len_dist(1, 200);
  double worst = 0.0;
  for (int seq = 0; seq < 1000; ++seq) {
    const double alpha = alpha_dist(rng);
    std::vector<double> x(static_cast<std::size_t>(len_dist(rng)));
    for (auto& v : x) v = x_dist(rng);

    EmaFilter<double> f(alpha);
    for (std::size_t n = 0; n < x.size(); ++n) {
      const double y = f.update(x[n]);
      // Explicit weighted sum: (1-a)^n x_0 + sum_k a (1-a)^(n-k) x_k.
      double ref = std::pow(1.0 - alpha, static_cast<double>(n)) * x[0];
      for (std::size_t k = 1; k <= n; ++k) {
        ref += alpha * std::pow(1.0 - alpha, static_cast<double>(n - k)) * x[k];
      }
      worst = std::max(worst, std::abs(y - ref) / std::abs(ref));
    }
  }
  double worst_step = 0.0;
  for (double alpha : {0.05, 0.2, 0.5, 0.8, 1.0}) {
    const double a = 0.5;
    const double b = 3.5;
    EmaFilter<double> f(alpha);
    f.update(a);
    for (int n = 1; n <= 100; ++n) {
      const double y = f.update(b);
      const double closed = b - (b - a) * std::pow(1.0 - alpha, n);
      worst_step = std::max(worst_step, std::abs(y - closed) / std::abs(closed));
    }
  }
  std::ostringstream d;
  d << "max rel err vs weighted sum " << worst << ", vs step closed form " << worst_step
    << " (<= 1e-12)";
  return {worst <= 1e-12 && worst_step <= 1e-12, d.str()};
}

// 8 -------------------------------------------------------------------------
Verdict interval_oracle()
{
  std::mt19937_64 rng(4242);
  std::uniform_int_distribution<int> len_dist(1, 60);
  std::uniform_int_distribution<int> phase_dist(0, 7);
  std::bernoulli_distribution zero(0.5);
  int mismatches = 0;
  for (int trial = 0; trial < 1000; ++trial) {
    Trace trace(static_cast<std::size_t>(len_dist(rng)));
    for (std::size_t i = 0; i < trace.size(); ++i) {
      trace[i].tick = static_cast<Tick>(i);
      trace[i].phase = static_cast<GuidancePhase>(phase_dist(rng) % 3 == 0 ? phase_dist(rng)
                                                                           : 3 + (phase_dist(rng) % 2));
      trace[i].robot_speed_mps = zero(rng) ? 0.0 : 0.5;
    }
    auto stopped = [&](long i) {
      return guided(trace[static_cast<std::size_t>(i)].phase) &&
             trace[static_cast<std::size_t>(i)].robot_speed_mps == 0.0;
    };
    // every (a, b) whose interior is stopped and whose neighbours are not
    std::vector<StopInterval> brute;
    const long n = static_cast<long>(trace.size());
    for (long a = 0; a < n; ++a) {
      for (long b = a; b < n; ++b) {
        bool all = true;
        for (long k = a; k <= b; ++k) all = all && stopped(k);
        const bool left_max = a == 0 || !stopped(a - 1);
        const bool right_max = b == n - 1 || !stopped(b + 1);
        if (all && left_max && right_max) brute.emplace_back(a, b);
      }
    }
    mismatches += compute_stop_intervals(trace) == brute ? 0 : 1;
  }
  std::ostringstream d;
  d << mismatches << " mismatches over 1000 randomized traces";
  return {mismatches == 0, d.str()};
}

}  // namespace

int main()
{
  struct Criterion
  {
    const char* name;
    std::function<Verdict()> check;
  };
  const std::vector<Criterion> criteria{
      {"1 threshold safety", threshold_safety},
      {"2 stop/resume reproduction", stop_resume},
      {"3 EMA effectiveness", ema_effectiveness},
      {"4 abort paths", abort_paths},
      {"5 FSM coverage", fsm_coverage},
      {"6 determinism", determinism},
      {"7 filter oracle", filter_oracle},
      {"8 interval extraction oracle", interval_oracle},
  };
  int failed = 0;
  for (const auto& c : criteria) {
    Verdict v{false, ""};
    try {
      v = c.check();
    } catch (const std::exception& e) {
      v = {false, std::string("exception: ") + e.what()};
    }
    std::printf("[%s] %s: %s\n", v.pass ? "PASS" : "FAIL", c.name, v.detail.c_str());
    failed += v.pass ? 0 : 1;
  }
  std::printf("%d/%zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
