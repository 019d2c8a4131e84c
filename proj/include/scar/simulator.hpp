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

#ifndef SCAR__SIMULATOR_HPP
#define SCAR__SIMULATOR_HPP

#include <scar/objectives.hpp>
#include <scar/prediction.hpp>
#include <scar/scenario.hpp>
#include <scar/search.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

namespace scar {

//==============================================================================
struct SimEvent
{
  double time = 0.0;
  EventKind kind = EventKind::TravelStart;
  Task task;
  std::size_t agent = replenisher_agent;
  double level = 0.0;

  friend bool operator==(const SimEvent&, const SimEvent&) = default;
};

struct EmptyInterval
{
  double start = 0.0;
  double end = 0.0;

  double length() const { return end - start; }

  friend bool operator==(const EmptyInterval&, const EmptyInterval&) = default;
};

struct SimRecord
{
  std::vector<SimEvent> events;
  std::vector<std::vector<EmptyInterval>> empty_intervals;
  FleetState initial_state;
  FleetState final_state;
  std::uint64_t seed = 0;

  /// Tasks in execution order; the last one may have been cut short.
  Schedule executed;
  std::size_t replans = 0;
  std::size_t nodes_expanded = 0;

  /// Per-user resource ledger: liters received from the replenisher and
  /// liters consumed by the user agent.
  std::vector<double> received;
  std::vector<double> consumed;

  /// Inline invariant checks that failed, one message each.
  std::vector<std::string> violations;
};

struct RunMetrics
{
  double percent_uptime = 100.0;
  bool full_uptime = true;
  std::vector<double> per_agent_uptime;
};

struct SimulationOptions
{
  /// Replaces the random 50-100% initial levels. The seed still drives every
  /// sampled activity.
  std::optional<FleetState> initial_state;

  /// Overrides the scenario's duration when set.
  std::optional<double> sim_duration;
};

/// Levels of every tank drawn uniformly from [50%, 100%] of capacity, users
/// first and then the replenisher, which starts at the depot.
inline FleetState random_initial_state(const ScenarioConfig& config, ParameterSampler& sampler)
{
  FleetState state;
  for (const auto& u : config.users)
    state.user_levels.push_back(sampler.uniform(0.5, 1.0) * u.capacity);
  state.replenisher_level = sampler.uniform(0.5, 1.0) * config.replenisher.capacity;
  state.replenisher_location = config.depot.location;
  return state;
}

//==============================================================================
/// Closed-loop run: plan with A*, execute the first task with freshly sampled
/// parameters, observe, replan. Stops at the simulation duration, cutting the
/// task in progress short.
inline SimRecord run_simulation(
  const ScenarioConfig& config,
  ObjectiveKind kind,
  std::size_t horizon,
  std::uint64_t seed,
  const SimulationOptions& options = {})
{
  if (horizon == 0)
    throw SearchError("horizon must be at least one task");
  const double duration = options.sim_duration.value_or(config.sim_duration);
  if (!(duration > 0.0))
    throw std::invalid_argument("simulation duration must be positive");

  const std::size_t n = config.user_count();
  ParameterSampler sampler(seed);

  SimRecord record;
  record.seed = seed;
  record.initial_state = options.initial_state
    ? *options.initial_state
    : random_initial_state(config, sampler);
  record.empty_intervals.resize(n);

  const MaxTimeTable table = build_max_time_table(config, horizon);
  const RolloutContext context(config);
  DeterministicCursor world(context, record.initial_state);

  std::vector<std::optional<double>> empty_since(n);
  for (std::size_t i = 0; i < n; ++i)
    if (world.user_empty(i))
      empty_since[i] = world.clock();

  std::vector<SimEvent> buffer;
  const auto observe = [&](double t, EventKind kind_, Task task, std::size_t agent, double level) {
    buffer.push_back({t, kind_, task, agent, level});
    if (kind_ == EventKind::AgentEmpty)
    {
      if (!empty_since[agent])
        empty_since[agent] = t;
    }
    else if (kind_ == EventKind::TransferStart && !task.is_depot())
    {
      auto& since = empty_since[task.user_index()];
      if (since)
      {
        if (t > *since)
          record.empty_intervals[task.user_index()].push_back({*since, t});
        since.reset();
      }
    }
  };

  const auto check_bounds = [&]() {
    for (std::size_t i = 0; i < n; ++i)
    {
      const double level = world.user_level(i);
      if (!(level >= 0.0 && level <= config.users[i].capacity))
        record.violations.push_back("user " + std::to_string(i) + " level out of bounds");
    }
    const double s = world.replenisher_level();
    if (!(s >= 0.0 && s <= config.replenisher.capacity))
      record.violations.push_back("replenisher level out of bounds");
  };

  while (world.clock() < duration && !world.truncated())
  {
    const FleetState current = world.state();
    const SearchResult plan = astar_schedule(config, current, horizon, kind, table);
    ++record.replans;
    record.nodes_expanded += plan.nodes_expanded;

    const Task next = plan.schedule.front();
    buffer.clear();
    buffer.push_back({world.clock(), EventKind::Replan, next, replenisher_agent,
                      world.replenisher_level()});

    if (!is_valid_schedule(plan.schedule, n) || plan.schedule.size() != horizon)
      record.violations.push_back("plan " + to_string(plan.schedule) + " is not valid");
    if (current.last_task && *current.last_task == next && !world.depot_forced())
      record.violations.push_back("plan repeats the previous task " + to_string(next));
    if (world.depot_forced() && !next.is_depot())
      record.violations.push_back("user task planned while the replenisher is below threshold");

    world.apply(next, sampler.draw(config, next), observe, duration);
    record.executed.push_back(next);
    check_bounds();

    std::stable_sort(buffer.begin(), buffer.end(),
      [](const SimEvent& a, const SimEvent& b) { return a.time < b.time; });
    record.events.insert(record.events.end(), buffer.begin(), buffer.end());
  }

  const double end = std::min(world.clock(), duration);
  for (std::size_t i = 0; i < n; ++i)
  {
    if (empty_since[i] && end > *empty_since[i])
      record.empty_intervals[i].push_back({*empty_since[i], end});
  }

  record.final_state = world.state();
  for (std::size_t i = 0; i < n; ++i)
  {
    record.received.push_back(world.received(i));
    record.consumed.push_back(world.consumed(i));
    const double expected =
      record.initial_state.user_levels[i] + world.received(i) - world.consumed(i);
    const double scale = std::max(1.0, config.users[i].capacity);
    if (std::abs(expected - world.user_level(i)) > 1e-6 * scale)
      record.violations.push_back("user " + std::to_string(i) + " resource not conserved");
  }
  return record;
}

//==============================================================================
inline RunMetrics compute_metrics(const SimRecord& record, std::size_t user_count, double sim_duration)
{
  if (!(sim_duration > 0.0))
    throw std::invalid_argument("simulation duration must be positive");
  RunMetrics m;
  m.per_agent_uptime.assign(user_count, 100.0);
  double sum = 0.0;
  for (std::size_t i = 0; i < user_count; ++i)
  {
    double empty = 0.0;
    if (i < record.empty_intervals.size())
    {
      for (const auto& interval : record.empty_intervals[i])
      {
        empty += interval.length();
        m.full_uptime = false;
      }
    }
    m.per_agent_uptime[i] = std::clamp(100.0 * (1.0 - empty / sim_duration), 0.0, 100.0);
    sum += m.per_agent_uptime[i];
  }
  m.percent_uptime = user_count > 0 ? sum / static_cast<double>(user_count) : 100.0;
  if (m.full_uptime)
    m.percent_uptime = 100.0;
  return m;
}

//==============================================================================
/// One line per event: time,event,task,agent,level. The task column is "r"
/// for depot visits; the agent column is "replenisher" for events about the
/// replenisher itself.
inline void write_event_log(const SimRecord& record, std::ostream& out)
{
  out << "time,event,task,agent,level\n";
  char buffer[64];
  for (const auto& e : record.events)
  {
    std::snprintf(buffer, sizeof(buffer), "%.6f", e.time);
    out << buffer << ',' << to_string(e.kind) << ',' << to_string(e.task) << ',';
    if (e.agent == replenisher_agent)
      out << "replenisher";
    else
      out << e.agent;
    std::snprintf(buffer, sizeof(buffer), "%.6f", e.level);
    out << ',' << buffer << '\n';
  }
}

} // namespace scar

#endif // SCAR__SIMULATOR_HPP
