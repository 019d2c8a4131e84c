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

#ifndef SCAR__SEARCH_HPP
#define SCAR__SEARCH_HPP

#include <scar/errors.hpp>
#include <scar/objectives.hpp>
#include <scar/prediction.hpp>
#include <scar/scenario.hpp>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <queue>
#include <vector>

namespace scar {

//==============================================================================
/// Upper bound on the mean time needed to run `next` right after `prev`: mean
/// travel between the two task locations, mean set-up and pack-up, and the
/// transfer time for a completely empty tank.
inline double max_task_duration(const ScenarioConfig& config, Task prev, Task next)
{
  const auto& rep = config.replenisher;
  const NodeIndex from = config.location_of(prev);
  const NodeIndex to = config.location_of(next);
  const double travel = travel_time(config.network, from, to, rep.speed.mean);

  if (next.is_depot())
  {
    const auto& depot = config.depot;
    return travel + depot.setup_time.mean
      + rep.capacity / depot.replenish_rate.mean
      + depot.packup_time.mean;
  }

  const auto& user = config.users.at(next.user_index());
  return travel + rep.setup_time.mean
    + user.capacity / (rep.replenish_rate.mean - user.usage_rate.mean)
    + rep.packup_time.mean;
}

//==============================================================================
/// max_remaining[last][k]: longest mean time that k further tasks can take
/// after `last`, over every sequence without consecutive repeats. Tasks are
/// indexed by slot (users, then the depot).
class MaxTimeTable
{
public:
  MaxTimeTable() = default;

  MaxTimeTable(std::size_t user_count, std::size_t horizon)
  : _slots(user_count + 1),
    _horizon(horizon),
    _entries((user_count + 1) * (horizon + 1), 0.0)
  {
  }

  std::size_t user_count() const { return _slots - 1; }
  std::size_t horizon() const { return _horizon; }

  double at(Task last, std::size_t remaining) const
  {
    return at_slot(last.slot(user_count()), remaining);
  }

  double at_slot(std::size_t slot, std::size_t remaining) const
  {
    return _entries.at(remaining * _slots + slot);
  }

  double& at_slot(std::size_t slot, std::size_t remaining)
  {
    return _entries.at(remaining * _slots + slot);
  }

private:
  std::size_t _slots = 1;
  std::size_t _horizon = 0;
  std::vector<double> _entries;
};

/// Backward recursion over the number of remaining tasks.
inline MaxTimeTable build_max_time_table(const ScenarioConfig& config, std::size_t horizon)
{
  if (horizon == 0)
    throw SearchError("max time table needs a horizon of at least one task");

  const std::size_t n = config.user_count();
  const std::size_t slots = n + 1;

  std::vector<double> step(slots * slots, 0.0);
  for (std::size_t p = 0; p < slots; ++p)
    for (std::size_t t = 0; t < slots; ++t)
      if (p != t)
      {
        step[p * slots + t] =
          max_task_duration(config, Task::from_slot(p, n), Task::from_slot(t, n));
      }

  MaxTimeTable table(n, horizon);
  for (std::size_t k = 1; k <= horizon; ++k)
  {
    for (std::size_t p = 0; p < slots; ++p)
    {
      double best = 0.0;
      for (std::size_t t = 0; t < slots; ++t)
      {
        if (t == p)
          continue;
        best = std::max(best, step[p * slots + t] + table.at_slot(t, k - 1));
      }
      table.at_slot(p, k) = best;
    }
  }
  return table;
}

//==============================================================================
namespace detail {

/// f-value of a node at `depth` whose prefix has accrued `accrued` weighted
/// tardiness in `elapsed` mean seconds. Future tardiness is taken as zero; the
/// ratio denominator uses the table's upper bound on the remaining time.
inline double heuristic_value(
  ObjectiveKind kind,
  double accrued,
  double elapsed,
  std::size_t last_slot,
  std::size_t depth,
  const MaxTimeTable& table,
  std::size_t horizon)
{
  if (depth == 0)
    return 0.0;
  if (!is_ratio(kind))
    return accrued;
  const std::size_t remaining = depth >= horizon ? 0 : horizon - depth;
  const double bound = elapsed + table.at_slot(last_slot, remaining);
  if (!(bound > 0.0))
    return 0.0;
  return detail::ratio(accrued, table.user_count(), bound);
}

/// Tasks that may follow `last` when the replenisher holds `level`.
inline void allowed_successors(
  const ScenarioConfig& config,
  double replenisher_level,
  const std::optional<Task>& last,
  std::vector<Task>& out)
{
  out.clear();
  const auto& rep = config.replenisher;
  if (replenisher_level <= 0.0 || replenisher_level < rep.depot_threshold())
  {
    out.push_back(Task::depot());
    return;
  }
  for (std::size_t i = 0; i < config.user_count(); ++i)
    if (!last || *last != Task::user(i))
      out.push_back(Task::user(i));
  if (!last || !last->is_depot())
    out.push_back(Task::depot());
}

} // namespace detail

//==============================================================================
/// A node of the schedule tree, materialized for inspection and testing. The
/// search itself stores only compact path links.
struct SearchNode
{
  Schedule partial_schedule;
  std::size_t depth = 0;
  FleetState end_state;
  double accrued_tardiness = 0.0;
  double elapsed = 0.0;
  double f_value = 0.0;
};

/// Rolls out a prefix in the objective's mode and fills in everything but
/// f_value.
inline SearchNode make_search_node(
  const ScenarioConfig& config,
  const FleetState& state,
  const Schedule& prefix,
  ObjectiveKind kind)
{
  SearchNode node;
  node.partial_schedule = prefix;
  node.depth = prefix.size();
  const RolloutContext context(config);
  const auto weights = config.weights();
  const auto fill = [&](auto cursor) {
    for (const Task t : prefix)
      cursor.apply(t);
    node.end_state = cursor.state();
    node.accrued_tardiness = cursor.weighted_empty_time(weights);
    node.elapsed = cursor.elapsed();
  };
  if (is_stochastic(kind))
    fill(StochasticCursor(context, state));
  else
    fill(DeterministicCursor(context, state));
  return node;
}

inline double heuristic(
  const SearchNode& node,
  ObjectiveKind kind,
  const MaxTimeTable& table,
  std::size_t horizon)
{
  if (node.depth > horizon)
    throw SearchError("heuristic: node is deeper than the horizon");
  const std::size_t last = node.partial_schedule.empty()
    ? 0
    : node.partial_schedule.back().slot(table.user_count());
  return detail::heuristic_value(
    kind, node.accrued_tardiness, node.elapsed, last, node.depth, table, horizon);
}

//==============================================================================
struct SearchResult
{
  Schedule schedule;
  Cost cost;
  std::size_t nodes_expanded = 0;
  std::size_t nodes_generated = 0;

  /// Parent-to-child edges along which f decreased.
  std::size_t consistency_violations = 0;

  /// Largest f over expanded nodes; never above cost for an admissible
  /// heuristic.
  double max_expanded_f = 0.0;
};

namespace detail {

template<RolloutMode Mode>
SearchResult astar(
  const ScenarioConfig& config,
  const FleetState& state,
  std::size_t horizon,
  ObjectiveKind kind,
  const MaxTimeTable& table)
{
  const std::size_t n = config.user_count();
  const unsigned bits = static_cast<unsigned>(std::bit_width(n));
  if (static_cast<std::size_t>(bits) * horizon > 63)
    throw SearchError("horizon too long for the search key");
  if (table.user_count() != n || table.horizon() < horizon)
    throw SearchError("max time table does not match the search");

  const RolloutContext context(config);
  const auto weights = config.weights();
  const RolloutCursor<Mode> root(context, state);

  struct Node
  {
    std::uint32_t parent;
    std::uint16_t slot;
    std::uint16_t depth;
  };

  struct Entry
  {
    double f;
    std::uint64_t key;
    std::uint32_t node;
    std::uint16_t depth;
  };

  // Lower f first, then deeper, then lexicographically smaller prefix.
  struct After
  {
    bool operator()(const Entry& a, const Entry& b) const
    {
      if (a.f != b.f)
        return a.f > b.f;
      if (a.depth != b.depth)
        return a.depth < b.depth;
      return a.key > b.key;
    }
  };

  std::vector<Node> nodes;
  nodes.push_back({0, 0, 0});
  std::vector<double> node_f{0.0};
  std::priority_queue<Entry, std::vector<Entry>, After> frontier;
  frontier.push({0.0, 0, 0, 0});

  SearchResult result;
  std::vector<std::uint16_t> path;
  std::vector<Task> successors;
  const std::uint16_t phantom_depth = static_cast<std::uint16_t>(horizon + 1);

  while (!frontier.empty())
  {
    const Entry top = frontier.top();
    frontier.pop();

    if (top.depth == phantom_depth)
    {
      path.clear();
      for (std::uint32_t i = top.node; i != 0; i = nodes[i].parent)
        path.push_back(nodes[i].slot);
      std::reverse(path.begin(), path.end());
      for (const auto slot : path)
        result.schedule.push_back(Task::from_slot(slot, n));
      result.cost = {top.f, kind};
      result.nodes_generated = nodes.size() - 1;
      return result;
    }

    result.max_expanded_f = std::max(result.max_expanded_f, top.f);

    if (top.depth == horizon)
    {
      frontier.push({top.f, top.key, top.node, phantom_depth});
      continue;
    }

    ++result.nodes_expanded;

    path.clear();
    for (std::uint32_t i = top.node; i != 0; i = nodes[i].parent)
      path.push_back(nodes[i].slot);
    std::reverse(path.begin(), path.end());

    RolloutCursor<Mode> cursor = root;
    for (const auto slot : path)
      cursor.apply(Task::from_slot(slot, n));

    detail::allowed_successors(config, cursor.replenisher_level(), cursor.last_task(), successors);

    const std::size_t child_depth = top.depth + 1;
    const unsigned shift = bits * static_cast<unsigned>(horizon - child_depth);
    for (const Task task : successors)
    {
      RolloutCursor<Mode> child = cursor;
      child.apply(task);
      const std::size_t slot = task.slot(n);
      const double f = heuristic_value(
        kind, child.weighted_empty_time(weights), child.elapsed(), slot,
        child_depth, table, horizon);
      if (f < top.f)
        ++result.consistency_violations;

      if (nodes.size() >= std::numeric_limits<std::uint32_t>::max())
        throw SearchError("search tree exceeded the node store");
      const auto index = static_cast<std::uint32_t>(nodes.size());
      nodes.push_back(
        {top.node, static_cast<std::uint16_t>(slot), static_cast<std::uint16_t>(child_depth)});
      frontier.push(
        {f, top.key | (static_cast<std::uint64_t>(slot) << shift), index,
         static_cast<std::uint16_t>(child_depth)});
    }
  }

  throw SearchError("no feasible schedule");
}

} // namespace detail

/// Minimum-cost schedule of exactly `horizon` tasks. The first node to reach
/// the phantom goal below the last layer is optimal for an admissible
/// heuristic.
inline SearchResult astar_schedule(
  const ScenarioConfig& config,
  const FleetState& state,
  std::size_t horizon,
  ObjectiveKind kind,
  const MaxTimeTable& table)
{
  if (horizon == 0)
    throw SearchError("horizon must be at least one task");
  if (is_stochastic(kind))
    return detail::astar<RolloutMode::Stochastic>(config, state, horizon, kind, table);
  return detail::astar<RolloutMode::Deterministic>(config, state, horizon, kind, table);
}

inline SearchResult astar_schedule(
  const ScenarioConfig& config,
  const FleetState& state,
  std::size_t horizon,
  ObjectiveKind kind)
{
  if (horizon == 0)
    throw SearchError("horizon must be at least one task");
  return astar_schedule(config, state, horizon, kind, build_max_time_table(config, horizon));
}

//==============================================================================
struct BruteForceResult
{
  Schedule schedule;
  Cost cost;
  std::size_t schedules_enumerated = 0;
};

inline constexpr double brute_force_guard = 1e6;

/// Scores every valid schedule with `evaluate` and keeps the first minimum in
/// lexicographic task order.
inline BruteForceResult brute_force_schedule(
  const ScenarioConfig& config,
  const FleetState& state,
  std::size_t horizon,
  ObjectiveKind kind)
{
  if (horizon == 0)
    throw SearchError("horizon must be at least one task");
  const double space = std::pow(static_cast<double>(config.user_count() + 1),
    static_cast<double>(horizon));
  if (space > brute_force_guard)
    throw SearchError("brute force enumeration guard exceeded");

  BruteForceResult best;
  bool found = false;
  Schedule prefix;

  const auto recurse = [&](const auto& self) -> void {
    if (prefix.size() == horizon)
    {
      ++best.schedules_enumerated;
      const Cost c = evaluate(kind, config, state, prefix);
      if (!found || c.value < best.cost.value)
      {
        best.schedule = prefix;
        best.cost = c;
        found = true;
      }
      return;
    }

    double level = state.replenisher_level;
    std::optional<Task> last = state.last_task;
    if (!prefix.empty())
    {
      level = rollout_deterministic(config, state, prefix).end_state.replenisher_level;
      last = prefix.back();
    }
    std::vector<Task> next;
    detail::allowed_successors(config, level, last, next);
    for (const Task t : next)
    {
      prefix.push_back(t);
      self(self);
      prefix.pop_back();
    }
  };
  recurse(recurse);

  if (!found)
    throw SearchError("no feasible schedule");
  return best;
}

} // namespace scar

#endif // SCAR__SEARCH_HPP
