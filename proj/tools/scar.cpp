/*
 * Copyright (C) 2026 The scar-sched Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 *
*/

#include <scar/scar.hpp>

#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <unistd.h>
#include <string>
#include <vector>

namespace {

constexpr int exit_ok = 0;
constexpr int exit_invalid = 1;
constexpr int exit_runtime = 2;

std::string read_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw scar::ConfigError("cannot open '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::vector<scar::ObjectiveKind> parse_objectives(const std::vector<std::string>& names)
{
  std::vector<scar::ObjectiveKind> kinds;
  for (const auto& name : names)
    kinds.push_back(scar::parse_objective(name));
  if (kinds.empty())
    kinds.assign(scar::all_objectives.begin(), scar::all_objectives.end());
  return kinds;
}

//==============================================================================
struct RunArgs
{
  std::string scenario;
  std::vector<std::string> objectives;
  std::vector<std::size_t> horizons;
  std::size_t repeats = 40;
  std::uint64_t seed = 0;
  double duration = 0.0;
  std::string out = "results";
  std::vector<std::string> formats;
  std::size_t workers = 0;
};

int run(const RunArgs& args)
{
  const auto config = scar::load_config_file(args.scenario);

  scar::ExperimentPlan plan;
  plan.scenario_path = args.scenario;
  plan.kinds = parse_objectives(args.objectives);
  plan.horizons = args.horizons.empty()
    ? scar::default_horizons(config.user_count())
    : args.horizons;
  plan.repeats = args.repeats;
  plan.base_seed = args.seed;
  plan.sim_duration = args.duration > 0.0 ? args.duration : config.sim_duration;
  plan.workers = args.workers;
  plan.validate();

  std::vector<scar::ResultFormat> formats;
  for (const auto& f : args.formats)
    formats.push_back(scar::parse_format(f));
  if (formats.empty())
    formats = {scar::ResultFormat::Csv, scar::ResultFormat::Json};

  // Rows land here as they finish so an interrupted sweep keeps its work.
  const std::filesystem::path dir(args.out);
  std::filesystem::create_directories(dir);
  const auto partial_path = dir / "runs.partial.csv";
  std::ofstream partial(partial_path);
  if (!partial)
    throw std::runtime_error("cannot write " + partial_path.string());
  scar::write_csv_header(partial, config.user_count());
  partial.flush();

  const bool progress = ::isatty(STDERR_FILENO) != 0;
  std::size_t done = 0;
  const std::size_t total = plan.kinds.size() * plan.horizons.size() * plan.repeats;
  const auto result = scar::run_experiment(config, plan, [&](const scar::RunRow& row) {
    scar::write_csv_row(partial, row);
    partial.flush();
    ++done;
    if (progress)
      std::cerr << "\r" << done << "/" << total << " runs" << std::flush;
  });
  if (progress)
    std::cerr << "\n";
  partial.close();
  std::filesystem::remove(partial_path);

  for (const auto format : formats)
    for (const auto& path : scar::emit_results(result, format, dir))
      std::cout << "wrote " << path.string() << "\n";

  std::size_t violations = 0;
  for (const auto& row : result.rows)
    violations += row.violations.size();

  std::printf("%-4s %4s %9s %9s %9s %9s %9s %7s\n",
    "obj", "h", "min", "q1", "median", "q3", "max", "full%");
  for (const auto& a : result.aggregates)
  {
    std::printf("%-4s %4zu %9.4f %9.4f %9.4f %9.4f %9.4f %7.1f\n",
      scar::to_string(a.kind), a.horizon, a.min, a.q1, a.median, a.q3, a.max,
      a.full_uptime_percent);
  }
  if (violations > 0)
  {
    std::cerr << violations << " invariant violations recorded in runs.csv\n";
    return exit_runtime;
  }
  return exit_ok;
}

//==============================================================================
struct PlanArgs
{
  std::string scenario;
  std::string state;
  std::string objective = "sr";
  std::size_t horizon = 0;
};

int plan_once(const PlanArgs& args)
{
  const auto config = scar::load_config_file(args.scenario);
  const auto state = args.state.empty()
    ? scar::full_state(config)
    : scar::parse_fleet_state(read_file(args.state), config);
  const auto kind = scar::parse_objective(args.objective);
  const std::size_t h = args.horizon > 0
    ? args.horizon
    : scar::default_horizons(config.user_count()).front();

  const auto result = scar::astar_schedule(config, state, h, kind);
  std::cout << "objective: " << scar::to_string(kind) << "\n"
            << "horizon: " << h << "\n"
            << "schedule: " << scar::to_string(result.schedule) << "\n"
            << "cost: " << scar::detail::format_double(result.cost.value) << "\n"
            << "nodes_expanded: " << result.nodes_expanded << "\n";
  return exit_ok;
}

//==============================================================================
struct SimulateArgs
{
  std::string scenario;
  std::string objective = "sr";
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  std::string events;
};

int simulate(const SimulateArgs& args)
{
  const auto config = scar::load_config_file(args.scenario);
  const auto kind = scar::parse_objective(args.objective);
  const std::size_t h = args.horizon > 0
    ? args.horizon
    : scar::default_horizons(config.user_count()).front();

  const auto record = scar::run_simulation(config, kind, h, args.seed);
  if (args.events.empty() || args.events == "-")
  {
    scar::write_event_log(record, std::cout);
  }
  else
  {
    std::ofstream out(args.events);
    if (!out)
      throw std::runtime_error("cannot write " + args.events);
    scar::write_event_log(record, out);
  }

  const auto m = scar::compute_metrics(record, config.user_count(), config.sim_duration);
  std::cerr << "percent_uptime " << m.percent_uptime
            << " full_uptime " << (m.full_uptime ? "yes" : "no")
            << " tasks " << record.executed.size() << "\n";
  for (const auto& v : record.violations)
    std::cerr << "violation: " << v << "\n";
  return record.violations.empty() ? exit_ok : exit_runtime;
}

int validate_scenario(const std::string& path)
{
  const auto config = scar::load_config_file(path);
  std::cout << path << ": ok, " << config.user_count() << " users, "
            << config.network.size() << " nodes, "
            << config.sim_duration << " s\n";
  return exit_ok;
}

} // namespace

//==============================================================================
int main(int argc, char** argv)
{
  CLI::App app{"Schedule a replenishment agent serving a fleet of user agents"};
  app.require_subcommand(1);

  RunArgs run_args;
  auto* run_cmd = app.add_subcommand("run", "Sweep objectives, horizons and seeds");
  run_cmd->add_option("--scenario", run_args.scenario, "Scenario file")->required();
  run_cmd->add_option("--objective", run_args.objectives, "dt, st, dr, sr (default all)");
  run_cmd->add_option("--horizon", run_args.horizons, "Tasks per plan (default by fleet size)")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--repeats", run_args.repeats, "Runs per objective and horizon")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--seed", run_args.seed, "Seed of run 0");
  run_cmd->add_option("--duration-s", run_args.duration, "Simulated seconds per run")
    ->check(CLI::PositiveNumber);
  run_cmd->add_option("--out", run_args.out, "Output directory");
  run_cmd->add_option("--format", run_args.formats, "csv, json (default both)");
  run_cmd->add_option("--workers", run_args.workers, "Threads (0 = all cores)");

  PlanArgs plan_args;
  auto* plan_cmd = app.add_subcommand("plan-once", "Print the optimal schedule for one state");
  plan_cmd->add_option("--scenario", plan_args.scenario, "Scenario file")->required();
  plan_cmd->add_option("--state", plan_args.state, "Fleet state file (default all full)");
  plan_cmd->add_option("--objective", plan_args.objective, "dt, st, dr or sr");
  plan_cmd->add_option("--horizon", plan_args.horizon, "Tasks per plan")
    ->check(CLI::PositiveNumber);

  SimulateArgs sim_args;
  auto* sim_cmd = app.add_subcommand("simulate", "Run one simulation and print its event log");
  sim_cmd->add_option("--scenario", sim_args.scenario, "Scenario file")->required();
  sim_cmd->add_option("--objective", sim_args.objective, "dt, st, dr or sr");
  sim_cmd->add_option("--horizon", sim_args.horizon, "Tasks per plan")
    ->check(CLI::PositiveNumber);
  sim_cmd->add_option("--seed", sim_args.seed, "Run seed");
  sim_cmd->add_option("--events", sim_args.events, "Event log file (default stdout)");

  std::string validate_path;
  auto* validate_cmd = app.add_subcommand("validate", "Check a scenario file");
  validate_cmd->add_option("scenario,--scenario", validate_path, "Scenario file")->required();

  try
  {
    app.parse(argc, argv);
  }
  catch (const CLI::ParseError& e)
  {
    const int code = app.exit(e);
    return code == 0 ? exit_ok : exit_invalid;
  }

  try
  {
    if (*run_cmd)
      return run(run_args);
    if (*plan_cmd)
      return plan_once(plan_args);
    if (*sim_cmd)
      return simulate(sim_args);
    return validate_scenario(validate_path);
  }
  catch (const scar::ConfigError& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  catch (const std::invalid_argument& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_invalid;
  }
  catch (const std::exception& e)
  {
    std::cerr << "error: " << e.what() << "\n";
    return exit_runtime;
  }
}
