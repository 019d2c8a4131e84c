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

#ifndef SCAR__ROAD_NETWORK_HPP
#define SCAR__ROAD_NETWORK_HPP

#include <scar/errors.hpp>

#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

namespace scar {

using NodeIndex = std::size_t;

//==============================================================================
/// Undirected road graph with all-pairs shortest-path distances precomputed at
/// construction. Immutable afterwards.
class RoadNetwork
{
public:
  struct Node
  {
    std::string id;
    double x = 0.0;
    double y = 0.0;
  };

  struct Edge
  {
    NodeIndex a = 0;
    NodeIndex b = 0;
    double length = 0.0;
  };

  RoadNetwork() = default;

  /// Throws ConfigError on duplicate node ids, unknown edge endpoints, or
  /// non-positive edge lengths.
  RoadNetwork(std::vector<Node> nodes, std::vector<Edge> edges)
  : _nodes(std::move(nodes)),
    _edges(std::move(edges))
  {
    for (std::size_t i = 0; i < _nodes.size(); ++i)
    {
      if (!_index.emplace(_nodes[i].id, i).second)
        throw ConfigError("network: duplicate node id '" + _nodes[i].id + "'");
    }

    for (const auto& e : _edges)
    {
      if (e.a >= _nodes.size() || e.b >= _nodes.size())
        throw ConfigError("network: edge references an unknown node");
      if (!(e.length > 0.0) || !std::isfinite(e.length))
      {
        throw ConfigError(
          "network: edge " + _nodes[e.a].id + "-" + _nodes[e.b].id
          + " must have a positive length");
      }
    }

    _compute_distances();
  }

  std::size_t size() const { return _nodes.size(); }
  const std::vector<Node>& nodes() const { return _nodes; }
  const std::vector<Edge>& edges() const { return _edges; }

  std::optional<NodeIndex> find(const std::string& id) const
  {
    const auto it = _index.find(id);
    if (it == _index.end())
      return std::nullopt;
    return it->second;
  }

  NodeIndex index_of(const std::string& id) const
  {
    if (const auto i = find(id))
      return *i;
    throw ConfigError("network: unknown node '" + id + "'");
  }

  bool reachable(NodeIndex from, NodeIndex to) const
  {
    return std::isfinite(_distance.at(from * _nodes.size() + to));
  }

  /// Shortest-path length in meters.
  double distance(NodeIndex from, NodeIndex to) const
  {
    const double d = _distance.at(from * _nodes.size() + to);
    if (!std::isfinite(d))
    {
      throw UnreachableError(
        "no road between '" + _nodes[from].id + "' and '" + _nodes[to].id + "'");
    }
    return d;
  }

private:
  void _compute_distances()
  {
    const std::size_t n = _nodes.size();
    constexpr double inf = std::numeric_limits<double>::infinity();

    std::vector<std::vector<std::pair<NodeIndex, double>>> adjacency(n);
    for (const auto& e : _edges)
    {
      adjacency[e.a].emplace_back(e.b, e.length);
      adjacency[e.b].emplace_back(e.a, e.length);
    }

    _distance.assign(n * n, inf);
    using Entry = std::pair<double, NodeIndex>;
    for (NodeIndex source = 0; source < n; ++source)
    {
      double* row = _distance.data() + source * n;
      std::priority_queue<Entry, std::vector<Entry>, std::greater<>> queue;
      row[source] = 0.0;
      queue.emplace(0.0, source);
      while (!queue.empty())
      {
        const auto [d, u] = queue.top();
        queue.pop();
        if (d > row[u])
          continue;
        for (const auto& [v, length] : adjacency[u])
        {
          if (d + length < row[v])
          {
            row[v] = d + length;
            queue.emplace(row[v], v);
          }
        }
      }
    }

    // Dijkstra from each side can disagree in the last bit; pin symmetry.
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j)
      {
        const double d = std::min(_distance[i * n + j], _distance[j * n + i]);
        _distance[i * n + j] = d;
        _distance[j * n + i] = d;
      }
  }

  std::vector<Node> _nodes;
  std::vector<Edge> _edges;
  std::unordered_map<std::string, NodeIndex> _index;
  std::vector<double> _distance;
};

//==============================================================================
/// Seconds to drive from one node to another at a constant speed.
inline double travel_time(
  const RoadNetwork& network, NodeIndex from, NodeIndex to, double speed)
{
  if (!(speed > 0.0))
    throw std::invalid_argument("travel_time: speed must be positive");
  if (from >= network.size() || to >= network.size())
    throw std::out_of_range("travel_time: node index out of range");
  if (from == to)
    return 0.0;
  return network.distance(from, to) / speed;
}

} // namespace scar

#endif // SCAR__ROAD_NETWORK_HPP
