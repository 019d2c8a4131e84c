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

#ifndef SCAR__OBJECTIVES_HPP
#define SCAR__OBJECTIVES_HPP

#include <scar/prediction.hpp>
#include <scar/scenario.hpp>

#include <array>
#include <cctype>
#include <span>
#include <stdexcept>
#include <string>

namespace scar {

//==============================================================================
enum class ObjectiveKind
{
  DT, ///< deterministic total weighted tardiness
  ST, ///< stochastic total weighted tardiness
  DR, ///< deterministic ratio
  SR  ///< stochastic ratio
};

inline constexpr std::array<ObjectiveKind, 4> all_objectives{
  ObjectiveKind::DT, ObjectiveKind::ST, ObjectiveKind::DR, ObjectiveKind::SR};

inline constexpr bool is_stochastic(ObjectiveKind kind)
{
  return kind == ObjectiveKind::ST || kind == ObjectiveKind::SR;
}

inline constexpr bool is_ratio(ObjectiveKind kind)
{
  return kind == ObjectiveKind::DR || kind == ObjectiveKind::SR;
}

inline const char* to_string(ObjectiveKind kind)
{
  switch (kind)
  {
    case ObjectiveKind::DT: return "DT";
    case ObjectiveKind::ST: return "ST";
    case ObjectiveKind::DR: return "DR";
    case ObjectiveKind::SR: return "SR";
  }
  return "?";
}

/// Accepts "dt", "DT", ... .
inline ObjectiveKind parse_objective(std::string text)
{
  for (auto& c : text)
    c = static_cast<char>(std::toupper(static_cast<unsigned char>(c)));
  for (const auto kind : all_objectives)
    if (text == to_string(kind))
      return kind;
  throw std::invalid_argument("unknown objective '" + text + "'");
}

//==============================================================================
struct Cost
{
  double value = 0.0;
  ObjectiveKind kind = ObjectiveKind::DT;
};

namespace detail {

inline double weighted_sum(const Prediction& prediction, std::span<const double> weights)
{
  if (weights.size() != prediction.empty_time.size())
    throw std::invalid_argument("weights and prediction disagree on the number of users");
  double total = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i)
    total += weights[i] * prediction.empty_time[i].mean;
  return total;
}

/// Shared by ratio_cost and the search so both divide identically.
inline double ratio(double weighted_tardiness, std::size_t user_count, double total_time)
{
  return weighted_tardiness / (static_cast<double>(user_count) * total_time);
}

} // namespace detail

/// Expected total weighted tardiness: sum of w_i * E[T_i].
inline Cost tardiness_cost(
  const Prediction& prediction,
  std::span<const double> weights,
  ObjectiveKind kind = ObjectiveKind::DT)
{
  return {detail::weighted_sum(prediction, weights), kind};
}

/// Weighted tardiness normalized by n * E[T_max].
inline Cost ratio_cost(
  const Prediction& prediction,
  std::span<const double> weights,
  std::size_t user_count,
  ObjectiveKind kind = ObjectiveKind::DR)
{
  if (!(prediction.total_time.mean > 0.0))
    throw std::domain_error("ratio cost needs a positive total schedule time");
  if (user_count == 0)
    throw std::invalid_argument("ratio cost needs at least one user");
  return {
    detail::ratio(detail::weighted_sum(prediction, weights), user_count,
      prediction.total_time.mean),
    kind};
}

/// Rolls the schedule out in the mode the objective calls for and scores it.
inline Cost evaluate(
  ObjectiveKind kind,
  const ScenarioConfig& config,
  const FleetState& state,
  const Schedule& schedule)
{
  const Prediction p = is_stochastic(kind)
    ? rollout_stochastic(config, state, schedule)
    : rollout_deterministic(config, state, schedule);
  const auto weights = config.weights();
  if (is_ratio(kind))
    return ratio_cost(p, weights, config.user_count(), kind);
  return tardiness_cost(p, weights, kind);
}

} // namespace scar

#endif // SCAR__OBJECTIVES_HPP
