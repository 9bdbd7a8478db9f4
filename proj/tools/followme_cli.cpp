#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "followme/errors.hpp"
#include "followme/plot.hpp"
#include "followme/runner.hpp"
#include "followme/scenario.hpp"
#include "followme/trace_io.hpp"

namespace fs = std::filesystem;
using namespace followme;

namespace {

int exit_code_for(TerminationReason reason)
{
  switch (reason) {
    case TerminationReason::Arrived: return 0;
    case TerminationReason::Aborted: return 2;
    case TerminationReason::MaxTicks: return 3;
  }
  return 1;
}

std::optional<std::uint64_t> env_seed()
{
  const char* raw = std::getenv("FOLLOWME_SEED");
  if (raw == nullptr || *raw == '\0') return std::nullopt;
  try {
    std::size_t used = 0;
    const auto v = std::stoull(raw, &used);
    if (used != std::string(raw).size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("FOLLOWME_SEED", std::string("not an unsigned integer: '") + raw + "'");
  }
}

}  // namespace

int main(int argc, char** argv)
{
  CLI::App app{"followme: guided-walk robot simulator"};
  app.require_subcommand(1);

  std::string scenario_path;
  std::string out_dir;
  std::optional<std::uint64_t> seed;
  std::optional<Tick> max_ticks;
  auto* run_cmd = app.add_subcommand("run", "Simulate a scenario and write trace.csv, summary.json, plot.svg");
  run_cmd->add_option("--scenario", scenario_path, "Scenario file")->required()->check(CLI::ExistingFile);
  run_cmd->add_option("--out", out_dir, "Output directory")->required();
  run_cmd->add_option("--seed", seed, "RNG seed (overrides FOLLOWME_SEED and the file)");
  run_cmd->add_option("--max-ticks", max_ticks, "Tick budget")->check(CLI::PositiveNumber);

  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("--scenario", scenario_path, "Scenario file")->required();

  std::string trace_path;
  std::string svg_path;
  double d_des = 2.0;
  auto* plot_cmd = app.add_subcommand("plot", "Render a saved trace as SVG");
  plot_cmd->add_option("--trace", trace_path, "trace.csv")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("--out", svg_path, "Output SVG")->required();
  plot_cmd->add_option("--d-des", d_des, "Threshold line position [m]")->capture_default_str();

  auto* report_cmd = app.add_subcommand("report", "Print stop intervals and totals of a saved trace");
  report_cmd->add_option("--trace", trace_path, "trace.csv")->required()->check(CLI::ExistingFile);

  app.add_subcommand("defaults", "Print a scenario with every field at its default value");

  CLI11_PARSE(app, argc, argv);

  try {
    if (run_cmd->parsed()) {
      ScenarioConfig cfg = load_scenario_file(scenario_path);
      if (seed) {
        cfg.noise.seed = *seed;
      } else if (auto s = env_seed()) {
        cfg.noise.seed = *s;
      }
      if (max_ticks) cfg.max_ticks = *max_ticks;

      const RunResult result = run(cfg);
      fs::create_directories(out_dir);
      const fs::path dir(out_dir);
      write_trace_csv_file(result.trace, (dir / "trace.csv").string());
      write_summary_json_file(result.summary, (dir / "summary.json").string());
      emit_plot_file(result.trace, cfg.controller.d_des, (dir / "plot.svg").string());
      std::cerr << cfg.name << ": " << to_string(result.summary.termination_reason) << " after "
                << result.trace.size() << " ticks, " << result.summary.stop_intervals.size()
                << " stop interval(s)\n";
      return exit_code_for(result.summary.termination_reason);
    }
    if (validate_cmd->parsed()) {
      try {
        const ScenarioConfig cfg = load_scenario_file(scenario_path);
        std::cout << scenario_path << ": ok (" << cfg.name << ")\n";
        return 0;
      } catch (const std::exception& e) {
        std::cerr << scenario_path << ": " << e.what() << "\n";
        return 1;
      }
    }
    if (plot_cmd->parsed()) {
      const Trace trace = read_trace_csv_file(trace_path);
      emit_plot_file(trace, d_des, svg_path);
      return 0;
    }
    if (report_cmd->parsed()) {
      const Trace trace = read_trace_csv_file(trace_path);
      std::cout << report_json(trace, infer_dt(trace)) << "\n";
      return 0;
    }
    ScenarioConfig reference;
    reference.name = "reference";
    reference.path_waypoints = {Point2(0.0, 0.0), Point2(10.0, 0.0)};
    reference.user_start = Point2(-1.2, 0.0);
    reference.user_script = UserScript({ScriptSegment{0.0, 600.0, UserBehavior::follow(1.2)}});
    std::cout << write_scenario(reference);
    return 0;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
