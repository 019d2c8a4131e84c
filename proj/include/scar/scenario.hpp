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

#ifndef SCAR__SCENARIO_HPP
#define SCAR__SCENARIO_HPP

#include <scar/errors.hpp>
#include <scar/gaussian.hpp>
#include <scar/road_network.hpp>

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <cmath>
#include <compare>
#include <cstddef>
#include <fstream>
#include <limits>
#include <numeric>
#include <sstream>
#include <string>
#include <unordered_map>
#include <vector>

namespace scar {

//==============================================================================
struct UserAgentSpec
{
  std::size_t id = 0;
  double capacity = 0.0;   // L
  GaussianParam usage_rate; // L/s
  double weight = 0.0;
  NodeIndex location = 0;
};

//==============================================================================
struct ReplenisherSpec
{
  double capacity = 0.0;          // L
  GaussianParam replenish_rate;   // L/s
  GaussianParam setup_time;       // s
  GaussianParam packup_time;      // s
  GaussianParam speed;            // m/s
  double depot_threshold_fraction = 0.05;

  /// Below this level the only task the replenisher may take is a depot visit.
  double depot_threshold() const { return depot_threshold_fraction * capacity; }
};

//==============================================================================
struct DepotSpec
{
  NodeIndex location = 0;
  GaussianParam setup_time;     // s
  GaussianParam packup_time;    // s
  GaussianParam replenish_rate; // L/s
};

//==============================================================================
/// One entry of a replenishment schedule: replenish a user agent, or send the
/// replenisher back to the depot (written "r").
class Task
{
public:
  static constexpr std::size_t depot_index =
    std::numeric_limits<std::size_t>::max();

  constexpr Task() = default;

  static constexpr Task user(std::size_t index) { return Task(index); }
  static constexpr Task depot() { return Task(depot_index); }

  constexpr bool is_depot() const { return _target == depot_index; }
  constexpr std::size_t user_index() const { return _target; }

  /// Position in the search tables: users keep their index, the depot is n.
  constexpr std::size_t slot(std::size_t user_count) const
  {
    return is_depot() ? user_count : _target;
  }

  static constexpr Task from_slot(std::size_t slot, std::size_t user_count)
  {
    return slot == user_count ? depot() : user(slot);
  }

  // Users in index order, then the depot.
  constexpr auto operator<=>(const Task&) const = default;

private:
  constexpr explicit Task(std::size_t target)
  : _target(target)
  {
  }

  std::size_t _target = depot_index;
};

using Schedule = std::vector<Task>;

inline std::string to_string(Task task)
{
  return task.is_depot() ? std::string("r") : std::to_string(task.user_index());
}

inline std::string to_string(const Schedule& schedule)
{
  std::string out = "(";
  for (std::size_t i = 0; i < schedule.size(); ++i)
  {
    if (i > 0)
      out += ",";
    out += to_string(schedule[i]);
  }
  return out + ")";
}

/// Parses "r", "0", "3", ... into a task.
inline Task parse_task(const std::string& text)
{
  if (text == "r" || text == "R" || text == "depot")
    return Task::depot();
  std::size_t used = 0;
  unsigned long long value = 0;
  try
  {
    value = std::stoull(text, &used);
  }
  catch (const std::exception&)
  {
    throw ConfigError("bad task '" + text + "'");
  }
  if (used != text.size())
    throw ConfigError("bad task '" + text + "'");
  return Task::user(static_cast<std::size_t>(value));
}

/// True when no two consecutive tasks are equal and every user index is
/// below user_count.
inline bool is_valid_schedule(const Schedule& schedule, std::size_t user_count)
{
  for (std::size_t i = 0; i < schedule.size(); ++i)
  {
    if (!schedule[i].is_depot() && schedule[i].user_index() >= user_count)
      return false;
    if (i > 0 && schedule[i] == schedule[i - 1])
      return false;
  }
  return true;
}

//==============================================================================
struct ScenarioConfig
{
  std::vector<UserAgentSpec> users;
  ReplenisherSpec replenisher;
  DepotSpec depot;
  RoadNetwork network;
  double sim_duration = 18000.0; // s

  std::size_t user_count() const { return users.size(); }

  std::vector<double> weights() const
  {
    std::vector<double> w;
    w.reserve(users.size());
    for (const auto& u : users)
      w.push_back(u.weight);
    return w;
  }

  NodeIndex location_of(Task task) const
  {
    return task.is_depot() ? depot.location : users.at(task.user_index()).location;
  }
};

//==============================================================================
namespace detail {

inline void require_param(
  const GaussianParam& p, const std::string& what, bool positive_mean)
{
  if (!std::isfinite(p.mean) || !std::isfinite(p.std_dev))
    throw ConfigError(what + ": values must be finite");
  if (p.std_dev < 0.0)
    throw ConfigError(what + ": std_dev must be non-negative");
  if (positive_mean ? !(p.mean > 0.0) : p.mean < 0.0)
  {
    throw ConfigError(
      what + (positive_mean ? ": mean must be positive" : ": mean must be non-negative"));
  }
}

} // namespace detail

/// Checks every invariant of a scenario. Throws ConfigError naming the
/// offending field.
inline void validate(const ScenarioConfig& config)
{
  if (config.users.empty())
    throw ConfigError("users: at least one user agent is required");

  const auto& net = config.network;
  double max_usage = 0.0;
  for (std::size_t i = 0; i < config.users.size(); ++i)
  {
    const auto& u = config.users[i];
    const std::string name = "user " + std::to_string(i);
    if (!(u.capacity > 0.0) || !std::isfinite(u.capacity))
      throw ConfigError(name + ": capacity must be positive");
    detail::require_param(u.usage_rate, name + " usage_rate", true);
    if (!(u.weight >= 0.0) || !std::isfinite(u.weight))
      throw ConfigError(name + ": weight must be non-negative");
    if (u.location >= net.size())
      throw ConfigError(name + ": location is not a network node");
    max_usage = std::max(max_usage, u.usage_rate.mean);
  }

  const auto& rep = config.replenisher;
  if (!(rep.capacity > 0.0) || !std::isfinite(rep.capacity))
    throw ConfigError("replenisher: capacity must be positive");
  detail::require_param(rep.replenish_rate, "replenisher replenish_rate", true);
  detail::require_param(rep.setup_time, "replenisher setup_time", false);
  detail::require_param(rep.packup_time, "replenisher packup_time", false);
  detail::require_param(rep.speed, "replenisher speed", true);
  if (!(rep.depot_threshold_fraction > 0.0 && rep.depot_threshold_fraction < 1.0))
    throw ConfigError("replenisher: depot_threshold_fraction must lie in (0,1)");
  if (!(rep.replenish_rate.mean > max_usage))
  {
    throw ConfigError(
      "replenisher: replenish_rate mean must exceed every user usage_rate mean");
  }

  const auto& depot = config.depot;
  detail::require_param(depot.setup_time, "depot setup_time", false);
  detail::require_param(depot.packup_time, "depot packup_time", false);
  detail::require_param(depot.replenish_rate, "depot replenish_rate", true);
  if (depot.location >= net.size())
    throw ConfigError("depot: location is not a network node");

  for (std::size_t i = 0; i < config.users.size(); ++i)
  {
    if (!net.reachable(depot.location, config.users[i].location))
    {
      throw ConfigError(
        "network: user " + std::to_string(i) + " is not connected to the depot");
    }
  }

  if (!(config.sim_duration > 0.0) || !std::isfinite(config.sim_duration))
    throw ConfigError("sim_duration_s must be positive");

  double total = 0.0;
  for (const auto& u : config.users)
    total += u.weight;
  if (!(total > 0.0))
    throw ConfigError("users: weights must not all be zero");
}

/// Rescales weights to sum to one.
inline void normalize_weights(ScenarioConfig& config)
{
  double total = 0.0;
  for (const auto& u : config.users)
    total += u.weight;
  if (!(total > 0.0))
    throw ConfigError("users: weights must not all be zero");
  for (auto& u : config.users)
    u.weight /= total;
}

//==============================================================================
namespace detail {

using nlohmann::json;

inline const json& field(const json& j, const char* key, const std::string& where)
{
  if (!j.is_object() || !j.contains(key))
    throw ConfigError(where + ": missing '" + key + "'");
  return j.at(key);
}

inline double number(const json& j, const std::string& where)
{
  if (!j.is_number())
    throw ConfigError(where + ": expected a number");
  return j.get<double>();
}

inline GaussianParam gaussian(const json& j, const std::string& where)
{
  if (j.is_number())
    return GaussianParam{j.get<double>(), 0.0};
  GaussianParam p;
  p.mean = number(field(j, "mean", where), where + ".mean");
  p.std_dev = j.contains("std_dev") ? number(j.at("std_dev"), where + ".std_dev") : 0.0;
  return p;
}

inline json to_json(const GaussianParam& p)
{
  return json{{"mean", p.mean}, {"std_dev", p.std_dev}};
}

inline std::string node_name(const json& j, const std::string& where)
{
  if (j.is_string())
    return j.get<std::string>();
  if (j.is_number_integer())
    return std::to_string(j.get<long long>());
  throw ConfigError(where + ": node ids must be strings");
}

} // namespace detail

//==============================================================================
/// Parses a scenario document, validates it, and normalizes the user weights.
/// Missing weights default to uniform; a missing depot threshold defaults to
/// 5% and a missing duration to five hours.
inline ScenarioConfig load_config(const std::string& text)
{
  using detail::field;
  using detail::gaussian;
  using detail::number;
  using nlohmann::json;

  json doc;
  try
  {
    doc = json::parse(text);
  }
  catch (const json::parse_error& e)
  {
    throw ConfigError(std::string("parse error: ") + e.what());
  }
  if (!doc.is_object())
    throw ConfigError("scenario: top level must be an object");

  try
  {
    // Network first; everything else refers to its node ids.
    const json& jnet = field(doc, "network", "scenario");
    std::vector<RoadNetwork::Node> nodes;
    for (const auto& jn : field(jnet, "nodes", "network"))
    {
      RoadNetwork::Node node;
      node.id = detail::node_name(field(jn, "id", "network node"), "network node");
      node.x = jn.contains("x") ? number(jn.at("x"), "node " + node.id + ".x") : 0.0;
      node.y = jn.contains("y") ? number(jn.at("y"), "node " + node.id + ".y") : 0.0;
      nodes.push_back(std::move(node));
    }

    std::unordered_map<std::string, NodeIndex> ids;
    for (std::size_t i = 0; i < nodes.size(); ++i)
      ids.emplace(nodes[i].id, i);
    const auto lookup = [&](const std::string& id, const std::string& where) {
      const auto it = ids.find(id);
      if (it == ids.end())
        throw ConfigError(where + ": unknown node '" + id + "'");
      return it->second;
    };

    std::vector<RoadNetwork::Edge> edges;
    for (const auto& je : field(jnet, "edges", "network"))
    {
      if (!je.is_array() || je.size() != 3)
        throw ConfigError("network: edges must be [node_a, node_b, length_m] triples");
      RoadNetwork::Edge edge;
      edge.a = lookup(detail::node_name(je[0], "edge"), "edge");
      edge.b = lookup(detail::node_name(je[1], "edge"), "edge");
      edge.length = number(je[2], "edge length");
      edges.push_back(edge);
    }

    ScenarioConfig config;
    config.network = RoadNetwork(std::move(nodes), std::move(edges));

    const json& jusers = field(doc, "users", "scenario");
    if (!jusers.is_array())
      throw ConfigError("users: expected a list");
    bool any_weight = false;
    bool all_weight = true;
    for (std::size_t i = 0; i < jusers.size(); ++i)
    {
      const json& ju = jusers[i];
      const std::string where = "user " + std::to_string(i);
      UserAgentSpec u;
      u.id = ju.contains("id") ? ju.at("id").get<std::size_t>() : i;
      u.capacity = number(field(ju, "capacity", where), where + " capacity");
      if (!(u.capacity > 0.0))
        throw ConfigError(where + ": capacity must be positive");
      u.usage_rate = gaussian(field(ju, "usage_rate", where), where + " usage_rate");
      u.location = lookup(
        detail::node_name(field(ju, "location", where), where), where + " location");
      if (ju.contains("weight"))
      {
        u.weight = number(ju.at("weight"), where + " weight");
        any_weight = true;
      }
      else
        all_weight = false;
      config.users.push_back(u);
    }
    if (any_weight && !all_weight)
      throw ConfigError("users: give a weight for every user or for none");
    if (!any_weight)
      for (auto& u : config.users)
        u.weight = 1.0;

    const json& jr = field(doc, "replenisher", "scenario");
    auto& rep = config.replenisher;
    rep.capacity = number(field(jr, "capacity", "replenisher"), "replenisher capacity");
    rep.replenish_rate = gaussian(field(jr, "replenish_rate", "replenisher"), "replenisher replenish_rate");
    rep.setup_time = gaussian(field(jr, "setup_time", "replenisher"), "replenisher setup_time");
    rep.packup_time = gaussian(field(jr, "packup_time", "replenisher"), "replenisher packup_time");
    rep.speed = gaussian(field(jr, "speed", "replenisher"), "replenisher speed");
    if (jr.contains("depot_threshold_fraction"))
    {
      rep.depot_threshold_fraction =
        number(jr.at("depot_threshold_fraction"), "replenisher depot_threshold_fraction");
    }

    const json& jd = field(doc, "depot", "scenario");
    auto& depot = config.depot;
    depot.location = lookup(detail::node_name(field(jd, "location", "depot"), "depot"), "depot location");
    depot.setup_time = gaussian(field(jd, "setup_time", "depot"), "depot setup_time");
    depot.packup_time = gaussian(field(jd, "packup_time", "depot"), "depot packup_time");
    depot.replenish_rate = gaussian(field(jd, "replenish_rate", "depot"), "depot replenish_rate");

    if (doc.contains("sim_duration_s"))
      config.sim_duration = number(doc.at("sim_duration_s"), "sim_duration_s");

    validate(config);
    normalize_weights(config);
    return config;
  }
  catch (const json::exception& e)
  {
    throw ConfigError(std::string("scenario: ") + e.what());
  }
}

inline ScenarioConfig load_config_file(const std::string& path)
{
  std::ifstream in(path);
  if (!in)
    throw ConfigError("cannot open scenario file '" + path + "'");
  std::stringstream buffer;
  buffer << in.rdbuf();
  return load_config(buffer.str());
}

/// Writes a scenario in the same schema load_config reads.
inline std::string serialize_config(const ScenarioConfig& config)
{
  using detail::to_json;
  using nlohmann::json;

  const auto& net = config.network;
  json jnodes = json::array();
  for (const auto& n : net.nodes())
    jnodes.push_back(json{{"id", n.id}, {"x", n.x}, {"y", n.y}});
  json jedges = json::array();
  for (const auto& e : net.edges())
    jedges.push_back(json::array({net.nodes()[e.a].id, net.nodes()[e.b].id, e.length}));

  json jusers = json::array();
  for (const auto& u : config.users)
  {
    jusers.push_back(json{
      {"id", u.id},
      {"capacity", u.capacity},
      {"usage_rate", to_json(u.usage_rate)},
      {"weight", u.weight},
      {"location", net.nodes()[u.location].id}});
  }

  const auto& rep = config.replenisher;
  const auto& depot = config.depot;
  json doc{
    {"users", jusers},
    {"replenisher",
     json{
       {"capacity", rep.capacity},
       {"replenish_rate", to_json(rep.replenish_rate)},
       {"setup_time", to_json(rep.setup_time)},
       {"packup_time", to_json(rep.packup_time)},
       {"speed", to_json(rep.speed)},
       {"depot_threshold_fraction", rep.depot_threshold_fraction}}},
    {"depot",
     json{
       {"location", net.nodes()[depot.location].id},
       {"setup_time", to_json(depot.setup_time)},
       {"packup_time", to_json(depot.packup_time)},
       {"replenish_rate", to_json(depot.replenish_rate)}}},
    {"network", json{{"nodes", jnodes}, {"edges", jedges}}},
    {"sim_duration_s", config.sim_duration}};
  return doc.dump(2);
}

//==============================================================================
/// Copy of a scenario with every standard deviation set to zero.
inline ScenarioConfig with_zero_spread(ScenarioConfig config)
{
  for (auto& u : config.users)
    u.usage_rate.std_dev = 0.0;
  auto& rep = config.replenisher;
  for (auto* p : {&rep.replenish_rate, &rep.setup_time, &rep.packup_time, &rep.speed})
    p->std_dev = 0.0;
  auto& depot = config.depot;
  for (auto* p : {&depot.setup_time, &depot.packup_time, &depot.replenish_rate})
    p->std_dev = 0.0;
  return config;
}

} // namespace scar

#endif // SCAR__SCENARIO_HPP
