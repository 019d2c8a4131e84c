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

#ifndef SCAR_TESTS__SUPPORT_HPP
#define SCAR_TESTS__SUPPORT_HPP

#include <scar/scar.hpp>

#include <json.hpp>

#include <random>
#include <string>
#include <vector>

namespace scar::test {

using nlohmann::json;

inline std::string data_path(const std::string& name)
{
  return std::string(SCAR_TEST_DATA_DIR) + "/" + name;
}

inline ScenarioConfig default_scenario(std::size_t users)
{
  return load_config_file(data_path("default_" + std::to_string(users) + "users.json"));
}

inline json gaussian(double mean, double std_dev = 0.0)
{
  return json{{"mean", mean}, {"std_dev", std_dev}};
}

/// Star network: depot "rp" at the origin and user i at node "u<i>", joined to
/// the depot by a road of length `spokes[i]`. Replenisher and depot use the
/// usual parameter values with no spread unless changed by the caller.
inline json star_json(const std::vector<double>& spokes)
{
  json nodes = json::array({json{{"id", "rp"}, {"x", 0.0}, {"y", 0.0}}});
  json edges = json::array();
  json users = json::array();
  for (std::size_t i = 0; i < spokes.size(); ++i)
  {
    const std::string id = "u" + std::to_string(i);
    nodes.push_back(json{{"id", id}, {"x", spokes[i]}, {"y", static_cast<double>(i)}});
    edges.push_back(json::array({"rp", id, spokes[i]}));
    users.push_back(json{
      {"id", i}, {"capacity", 1000.0}, {"usage_rate", gaussian(0.5)}, {"location", id}});
  }
  return json{
    {"users", users},
    {"replenisher",
     json{
       {"capacity", 5000.0},
       {"replenish_rate", gaussian(10.0)},
       {"setup_time", gaussian(60.0)},
       {"packup_time", gaussian(20.0)},
       {"speed", gaussian(15.0)},
       {"depot_threshold_fraction", 0.05}}},
    {"depot",
     json{
       {"location", "rp"},
       {"setup_time", gaussian(30.0)},
       {"packup_time", gaussian(10.0)},
       {"replenish_rate", gaussian(20.0)}}},
    {"network", json{{"nodes", nodes}, {"edges", edges}}}};
}

inline ScenarioConfig load(const json& j)
{
  return load_config(j.dump());
}

/// First `users` users of the default layout.
inline ScenarioConfig default_subset(std::size_t users)
{
  auto j = json::parse(serialize_config(default_scenario(6)));
  auto& list = j["users"];
  list.erase(list.begin() + static_cast<std::ptrdiff_t>(users), list.end());
  for (auto& u : list)
    u.erase("weight");
  return load(j);
}

/// Random fleet state. Users are drawn in [0, high_fraction] of capacity and
/// the replenisher is parked at the depot or at one of the users, with
/// last_task matching its position.
inline FleetState random_state(
  const ScenarioConfig& config, std::mt19937_64& rng, double high_fraction = 1.0)
{
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  FleetState s;
  for (const auto& u : config.users)
    s.user_levels.push_back(unit(rng) * high_fraction * u.capacity);
  s.replenisher_level = unit(rng) * config.replenisher.capacity;
  const std::size_t n = config.user_count();
  const std::size_t where = rng() % (n + 2);
  if (where == n + 1)
  {
    s.replenisher_location = config.depot.location;
  }
  else
  {
    const Task t = Task::from_slot(where, n);
    s.last_task = t;
    s.replenisher_location = config.location_of(t);
  }
  return s;
}

/// Random schedule with no consecutive repeats that also avoids the state's
/// last task at the root.
inline Schedule random_schedule(
  std::size_t n, std::size_t h, std::mt19937_64& rng, std::optional<Task> last = std::nullopt)
{
  Schedule s;
  while (s.size() < h)
  {
    const Task t = Task::from_slot(rng() % (n + 1), n);
    if (last && *last == t)
      continue;
    s.push_back(t);
    last = t;
  }
  return s;
}

} // namespace scar::test

#endif // SCAR_TESTS__SUPPORT_HPP
