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

#ifndef SCAR__EXPERIMENT_HPP
#define SCAR__EXPERIMENT_HPP

#include <scar/objectives.hpp>
#include <scar/scenario.hpp>
#include <scar/simulator.hpp>

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdint>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

namespace scar {

//==============================================================================
struct ExperimentPlan
{
  std::string scenario_path;
  std::vector<ObjectiveKind> kinds{all_objectives.begin(), all_objectives.end()};
  std::vector<std::size_t> horizons;
  std::size_t repeats = 40;
  std::uint64_t base_seed = 0;
  double sim_duration = 18000.0;

  /// Number of threads running cells; 0 picks the hardware concurrency.
  std::size_t workers = 1;

  void validate() const
  {
    if (repeats < 1)
      throw ConfigError("repeats must be at least 1");
    if (kinds.empty())
      throw ConfigError("at least one objective is required");
    if (horizons.empty())
      throw ConfigError("at least one horizon is required");
    for (const auto h : horizons)
      if (h < 1)
        throw ConfigError("horizons must be at least 1");
    if (!(sim_duration > 0.0))
      throw ConfigError("simulation duration must be positive");
  }
};

/// Horizons swept by default for a fleet of the given size.
inline std::vector<std::size_t> default_horizons(std::size_t user_count)
{
  if (user_count <= 4)
    return {5, 7, 12};
  return {7, 8, 9};
}

/// One simulation run.
struct RunRow
{
  std::string scenario;
  ObjectiveKind kind = ObjectiveKind::DT;
  std::size_t horizon = 0;
  std::uint64_t seed = 0;
  RunMetrics metrics;
  std::size_t nodes_expanded = 0;
  std::size_t replans = 0;
  FleetState initial_state;
  std::vector<std::string> violations;
  double wall_time = 0.0;

  double mean_nodes_expanded() const
  {
    return replans > 0
      ? static_cast<double>(nodes_expanded) / static_cast<double>(replans)
      : 0.0;
  }
};

struct AggregateResult
{
  ObjectiveKind kind = ObjectiveKind::DT;
  std::size_t horizon = 0;
  std::size_t runs = 0;
  double median = 0.0;
  double q1 = 0.0;
  double q3 = 0.0;
  double min = 0.0;
  double max = 0.0;
  double full_uptime_percent = 0.0;
  double mean_nodes_expanded = 0.0;
  double wall_time = 0.0;

  friend bool operator==(const AggregateResult&, const AggregateResult&) = default;
};

struct ExperimentResult
{
  std::string scenario;
  std::uint64_t base_seed = 0;
  std::size_t repeats = 0;
  double sim_duration = 0.0;

  /// Ordered by kind, then horizon, then seed, whatever order the runs
  /// finished in.
  std::vector<RunRow> rows;
  std::vector<AggregateResult> aggregates;
};

//==============================================================================
/// Linear interpolation between order statistics (R type 7, numpy default).
inline double quantile(std::vector<double> values, double p)
{
  if (values.empty())
    throw std::invalid_argument("quantile of an empty sample");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const auto lo = static_cast<std::size_t>(pos);
  const auto hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] + frac * (values[hi] - values[lo]);
}

inline AggregateResult aggregate(
  ObjectiveKind kind, std::size_t horizon, const std::vector<const RunRow*>& rows)
{
  if (rows.empty())
    throw std::invalid_argument("cannot aggregate zero runs");
  AggregateResult a;
  a.kind = kind;
  a.horizon = horizon;
  a.runs = rows.size();

  std::vector<double> uptime;
  std::size_t full = 0;
  double nodes = 0.0;
  for (const auto* r : rows)
  {
    uptime.push_back(r->metrics.percent_uptime);
    full += r->metrics.full_uptime ? 1 : 0;
    nodes += r->mean_nodes_expanded();
    a.wall_time += r->wall_time;
  }
  const double count = static_cast<double>(rows.size());
  a.min = *std::min_element(uptime.begin(), uptime.end());
  a.max = *std::max_element(uptime.begin(), uptime.end());
  a.q1 = quantile(uptime, 0.25);
  a.median = quantile(uptime, 0.5);
  a.q3 = quantile(uptime, 0.75);
  a.full_uptime_percent = 100.0 * static_cast<double>(full) / count;
  a.mean_nodes_expanded = nodes / count;
  return a;
}

//==============================================================================
/// A single (kind, horizon, seed) cell. Reproduces its row on its own.
inline RunRow run_cell(
  const ScenarioConfig& config,
  const std::string& scenario,
  ObjectiveKind kind,
  std::size_t horizon,
  std::uint64_t seed,
  double sim_duration)
{
  const auto start = std::chrono::steady_clock::now();
  SimulationOptions options;
  options.sim_duration = sim_duration;
  SimRecord record = run_simulation(config, kind, horizon, seed, options);

  RunRow row;
  row.scenario = scenario;
  row.kind = kind;
  row.horizon = horizon;
  row.seed = seed;
  row.metrics = compute_metrics(record, config.user_count(), sim_duration);
  row.nodes_expanded = record.nodes_expanded;
  row.replans = record.replans;
  row.initial_state = std::move(record.initial_state);
  row.violations = std::move(record.violations);
  row.wall_time = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return row;
}

using RowCallback = std::function<void(const RunRow&)>;

/// Runs every (kind, horizon, repeat) cell. Run r uses seed base_seed + r for
/// every kind and horizon, so paired cells share their initial fleet state.
/// The callback sees each row as soon as it finishes, one call at a time.
inline ExperimentResult run_experiment(
  const ScenarioConfig& config,
  const ExperimentPlan& plan,
  const RowCallback& on_row = {})
{
  plan.validate();
  validate(config);

  ExperimentResult result;
  result.scenario = plan.scenario_path.empty()
    ? std::string("scenario")
    : std::filesystem::path(plan.scenario_path).stem().string();
  result.base_seed = plan.base_seed;
  result.repeats = plan.repeats;
  result.sim_duration = plan.sim_duration;

  struct Cell
  {
    ObjectiveKind kind;
    std::size_t horizon;
    std::uint64_t seed;
  };
  std::vector<Cell> cells;
  for (const auto kind : plan.kinds)
    for (const auto h : plan.horizons)
      for (std::size_t r = 0; r < plan.repeats; ++r)
        cells.push_back({kind, h, plan.base_seed + r});

  result.rows.resize(cells.size());
  std::atomic<std::size_t> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;

  const auto work = [&]() {
    while (!failed)
    {
      const std::size_t i = next++;
      if (i >= cells.size())
        return;
      try
      {
        const auto& c = cells[i];
        RunRow row = run_cell(config, result.scenario, c.kind, c.horizon, c.seed,
          plan.sim_duration);
        std::lock_guard<std::mutex> lock(mutex);
        result.rows[i] = std::move(row);
        if (on_row)
          on_row(result.rows[i]);
      }
      catch (...)
      {
        std::lock_guard<std::mutex> lock(mutex);
        if (!error)
          error = std::current_exception();
        failed = true;
      }
    }
  };

  std::size_t workers = plan.workers;
  if (workers == 0)
    workers = std::max(1u, std::thread::hardware_concurrency());
  workers = std::min(workers, cells.size());
  if (workers <= 1)
  {
    work();
  }
  else
  {
    std::vector<std::thread> threads;
    for (std::size_t w = 0; w < workers; ++w)
      threads.emplace_back(work);
    for (auto& t : threads)
      t.join();
  }
  if (error)
    std::rethrow_exception(error);

  for (const auto kind : plan.kinds)
  {
    for (const auto h : plan.horizons)
    {
      std::vector<const RunRow*> group;
      for (const auto& row : result.rows)
        if (row.kind == kind && row.horizon == h)
          group.push_back(&row);
      result.aggregates.push_back(aggregate(kind, h, group));
    }
  }
  return result;
}

inline ExperimentResult run_experiment(
  const ExperimentPlan& plan, const RowCallback& on_row = {})
{
  return run_experiment(load_config_file(plan.scenario_path), plan, on_row);
}

//==============================================================================
/// Fleet state document:
/// {"clock": s, "user_levels": [L...], "replenisher_level": L,
///  "replenisher_location": node id, "last_task": "r" | user index}.
/// clock defaults to 0, the location to the depot, last_task to none.
inline FleetState parse_fleet_state(const std::string& text, const ScenarioConfig& config)
{
  using nlohmann::json;
  FleetState state;
  try
  {
    const json doc = json::parse(text);
    if (!doc.is_object())
      throw ConfigError("state: top level must be an object");
    state.clock = doc.value("clock", 0.0);
    state.user_levels = doc.at("user_levels").get<std::vector<double>>();
    state.replenisher_level = doc.at("replenisher_level").get<double>();
    state.replenisher_location = doc.contains("replenisher_location")
      ? config.network.index_of(doc.at("replenisher_location").get<std::string>())
      : config.depot.location;
    if (doc.contains("last_task") && !doc.at("last_task").is_null())
    {
      const auto& jt = doc.at("last_task");
      state.last_task = parse_task(
        jt.is_string() ? jt.get<std::string>() : std::to_string(jt.get<long long>()));
    }
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("state: ") + e.what());
  }

  const std::size_t n = config.user_count();
  if (state.user_levels.size() != n)
    throw ConfigError("state: expected " + std::to_string(n) + " user levels");
  for (std::size_t i = 0; i < n; ++i)
  {
    const double level = state.user_levels[i];
    if (!(level >= 0.0 && level <= config.users[i].capacity))
      throw ConfigError("state: user " + std::to_string(i) + " level out of range");
  }
  if (!(state.replenisher_level >= 0.0
        && state.replenisher_level <= config.replenisher.capacity))
    throw ConfigError("state: replenisher level out of range");
  if (state.last_task && !state.last_task->is_depot() && state.last_task->user_index() >= n)
    throw ConfigError("state: last_task names an unknown user");
  return state;
}

//==============================================================================
namespace detail {

/// Shortest text that reads back to the same double.
inline std::string format_double(double value)
{
  char buffer[64];
  const auto res = std::to_chars(buffer, buffer + sizeof(buffer), value);
  return std::string(buffer, res.ptr);
}

} // namespace detail

inline void write_csv_header(std::ostream& out, std::size_t user_count)
{
  out << "scenario,objective,horizon,seed,percent_uptime,full_uptime";
  for (std::size_t i = 0; i < user_count; ++i)
    out << ",uptime_" << i;
  out << ",nodes_expanded,replans";
  for (std::size_t i = 0; i < user_count; ++i)
    out << ",initial_level_" << i;
  out << ",initial_replenisher_level,violations\n";
}

inline void write_csv_row(std::ostream& out, const RunRow& row)
{
  using detail::format_double;
  out << row.scenario << ',' << to_string(row.kind) << ',' << row.horizon << ','
      << row.seed << ',' << format_double(row.metrics.percent_uptime) << ','
      << (row.metrics.full_uptime ? 1 : 0);
  for (const double u : row.metrics.per_agent_uptime)
    out << ',' << format_double(u);
  out << ',' << row.nodes_expanded << ',' << row.replans;
  for (const double level : row.initial_state.user_levels)
    out << ',' << format_double(level);
  out << ',' << format_double(row.initial_state.replenisher_level) << ','
      << row.violations.size() << '\n';
}

inline void write_csv(std::ostream& out, const ExperimentResult& result)
{
  if (result.rows.empty())
    throw std::invalid_argument("no runs to write");
  write_csv_header(out, result.rows.front().metrics.per_agent_uptime.size());
  for (const auto& row : result.rows)
    write_csv_row(out, row);
}

inline nlohmann::json results_to_json(const ExperimentResult& result)
{
  nlohmann::json j;
  j["metadata"] = {
    {"scenario", result.scenario},
    {"base_seed", result.base_seed},
    {"repeats", result.repeats},
    {"sim_duration_s", result.sim_duration},
    {"paired_seeds", true},
    {"seed_rule", "run r of every objective and horizon uses base_seed + r"},
    {"quantile_method", "linear interpolation (type 7)"},
    {"uptime", "mean of per-agent uptime percentages"}};
  auto& list = j["aggregates"];
  list = nlohmann::json::array();
  for (const auto& a : result.aggregates)
  {
    list.push_back({
      {"objective", to_string(a.kind)},
      {"horizon", a.horizon},
      {"runs", a.runs},
      {"median", a.median},
      {"q1", a.q1},
      {"q3", a.q3},
      {"min", a.min},
      {"max", a.max},
      {"full_uptime_percent", a.full_uptime_percent},
      {"mean_nodes_expanded", a.mean_nodes_expanded}});
  }
  return j;
}

inline nlohmann::json timing_to_json(const ExperimentResult& result)
{
  nlohmann::json j = nlohmann::json::array();
  for (const auto& a : result.aggregates)
    j.push_back({{"objective", to_string(a.kind)}, {"horizon", a.horizon},
                 {"wall_time_s", a.wall_time}});
  return j;
}

/// Reads results.json text back, plus wall times from timing.json text when
/// given.
inline std::vector<AggregateResult> parse_results(
  const std::string& results_text, const std::string& timing_text = {})
{
  std::vector<AggregateResult> out;
  try
  {
    const auto j = nlohmann::json::parse(results_text);
    for (const auto& e : j.at("aggregates"))
    {
      AggregateResult a;
      a.kind = parse_objective(e.at("objective").get<std::string>());
      a.horizon = e.at("horizon").get<std::size_t>();
      a.runs = e.at("runs").get<std::size_t>();
      a.median = e.at("median").get<double>();
      a.q1 = e.at("q1").get<double>();
      a.q3 = e.at("q3").get<double>();
      a.min = e.at("min").get<double>();
      a.max = e.at("max").get<double>();
      a.full_uptime_percent = e.at("full_uptime_percent").get<double>();
      a.mean_nodes_expanded = e.at("mean_nodes_expanded").get<double>();
      out.push_back(a);
    }
    if (!timing_text.empty())
    {
      for (const auto& e : nlohmann::json::parse(timing_text))
      {
        const auto kind = parse_objective(e.at("objective").get<std::string>());
        const auto h = e.at("horizon").get<std::size_t>();
        for (auto& a : out)
          if (a.kind == kind && a.horizon == h)
            a.wall_time = e.at("wall_time_s").get<double>();
      }
    }
  }
  catch (const nlohmann::json::exception& e)
  {
    throw ConfigError(std::string("malformed results: ") + e.what());
  }
  return out;
}

enum class ResultFormat { Csv, Json };

inline ResultFormat parse_format(std::string text)
{
  for (auto& c : text)
    c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  if (text == "csv")
    return ResultFormat::Csv;
  if (text == "json")
    return ResultFormat::Json;
  throw std::invalid_argument("unknown format '" + text + "'");
}

/// Csv writes runs.csv. Json writes results.json, which depends only on the
/// plan, and timing.json with wall-clock times. Returns the files written.
inline std::vector<std::filesystem::path> emit_results(
  const ExperimentResult& result,
  ResultFormat format,
  const std::filesystem::path& dir)
{
  if (result.rows.empty() || result.aggregates.empty())
    throw std::invalid_argument("no results to write");
  std::filesystem::create_directories(dir);

  const auto open = [](const std::filesystem::path& p) {
    std::ofstream out(p);
    if (!out)
      throw std::runtime_error("cannot write " + p.string());
    return out;
  };

  std::vector<std::filesystem::path> written;
  if (format == ResultFormat::Csv)
  {
    const auto path = dir / "runs.csv";
    auto out = open(path);
    write_csv(out, result);
    written.push_back(path);
  }
  else
  {
    const auto path = dir / "results.json";
    auto out = open(path);
    out << results_to_json(result).dump(2) << '\n';
    const auto timing = dir / "timing.json";
    auto tout = open(timing);
    tout << timing_to_json(result).dump(2) << '\n';
    written.push_back(path);
    written.push_back(timing);
  }
  return written;
}

} // namespace scar

#endif // SCAR__EXPERIMENT_HPP
