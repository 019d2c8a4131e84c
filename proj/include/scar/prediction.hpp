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

#ifndef SCAR__PREDICTION_HPP
#define SCAR__PREDICTION_HPP

#include <scar/errors.hpp>
#include <scar/gaussian.hpp>
#include <scar/scenario.hpp>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <span>
#include <vector>

namespace scar {

//==============================================================================
/// Mean and variance of a time quantity. The variance is zero in
/// deterministic mode.
struct TimeMoment
{
  double mean = 0.0;
  double variance = 0.0;

  friend bool operator==(const TimeMoment&, const TimeMoment&) = default;
};

//==============================================================================
struct FleetState
{
  double clock = 0.0;
  std::vector<double> user_levels;
  double replenisher_level = 0.0;
  NodeIndex replenisher_location = 0;

  /// The task the replenisher completed most recently, if any. The first task
  /// of a new schedule may not repeat it.
  std::optional<Task> last_task;

  friend bool operator==(const FleetState&, const FleetState&) = default;
};

/// Replenisher parked at the depot with every tank full.
inline FleetState full_state(const ScenarioConfig& config)
{
  FleetState state;
  for (const auto& u : config.users)
    state.user_levels.push_back(u.capacity);
  state.replenisher_level = config.replenisher.capacity;
  state.replenisher_location = config.depot.location;
  return state;
}

//==============================================================================
struct TaskDuration
{
  TimeMoment travel;
  TimeMoment setup;
  TimeMoment transfer;
  TimeMoment packup;
  double transferred_liters = 0.0;

  double total_mean() const
  {
    return travel.mean + setup.mean + transfer.mean + packup.mean;
  }

  friend bool operator==(const TaskDuration&, const TaskDuration&) = default;
};

struct TaskRecord
{
  Task task;
  TimeMoment start;
  TimeMoment transfer_start;
  TimeMoment end;
  double transferred = 0.0;
  TaskDuration duration;

  friend bool operator==(const TaskRecord&, const TaskRecord&) = default;
};

//==============================================================================
struct Prediction
{
  std::vector<TaskRecord> per_task;

  /// Expected time each user agent spends empty during the schedule.
  std::vector<TimeMoment> empty_time;

  /// Expected duration of the whole schedule.
  TimeMoment total_time;

  FleetState end_state;

  friend bool operator==(const Prediction&, const Prediction&) = default;
};

//==============================================================================
/// Concrete parameter values used to execute one task. `usage` holds one rate
/// per user agent, applied for the whole task.
struct TaskDraw
{
  double speed = 0.0;
  double setup = 0.0;
  double rate = 0.0;
  double packup = 0.0;
  std::span<const double> usage;
};

enum class EventKind
{
  TravelStart,
  TransferStart,
  TransferEnd,
  TaskEnd,
  AgentEmpty,
  AgentReplenished,
  Replan
};

inline const char* to_string(EventKind kind)
{
  switch (kind)
  {
    case EventKind::TravelStart: return "travel-start";
    case EventKind::TransferStart: return "transfer-start";
    case EventKind::TransferEnd: return "transfer-end";
    case EventKind::TaskEnd: return "task-end";
    case EventKind::AgentEmpty: return "agent-empty";
    case EventKind::AgentReplenished: return "agent-replenished";
    case EventKind::Replan: return "replan";
  }
  return "unknown";
}

/// Agent index used in events that concern the replenisher itself.
inline constexpr std::size_t replenisher_agent = std::numeric_limits<std::size_t>::max();

struct NullObserver
{
  void operator()(double, EventKind, Task, std::size_t, double) const {}
};

//==============================================================================
/// Per-scenario data shared by every cursor: mean parameters and usage-rate
/// coefficients of variation. Must outlive the cursors built from it.
class RolloutContext
{
public:
  explicit RolloutContext(const ScenarioConfig& config)
  : _config(&config)
  {
    for (const auto& u : config.users)
    {
      _usage_means.push_back(u.usage_rate.mean);
      const double cv = u.usage_rate.std_dev / u.usage_rate.mean;
      _usage_cv2.push_back(cv * cv);
    }
  }

  const ScenarioConfig& config() const { return *_config; }
  std::span<const double> usage_means() const { return _usage_means; }
  double usage_cv2(std::size_t user) const { return _usage_cv2[user]; }

  TaskDraw mean_draw(Task task) const
  {
    const auto& rep = _config->replenisher;
    const auto& depot = _config->depot;
    TaskDraw draw;
    draw.speed = rep.speed.mean;
    if (task.is_depot())
    {
      draw.setup = depot.setup_time.mean;
      draw.rate = depot.replenish_rate.mean;
      draw.packup = depot.packup_time.mean;
    }
    else
    {
      draw.setup = rep.setup_time.mean;
      draw.rate = rep.replenish_rate.mean;
      draw.packup = rep.packup_time.mean;
    }
    draw.usage = _usage_means;
    return draw;
  }

private:
  const ScenarioConfig* _config;
  std::vector<double> _usage_means;
  std::vector<double> _usage_cv2;
};

//==============================================================================
/// Samples task parameters from their truncated Gaussians. Draw order per
/// task is fixed: speed, set-up, transfer rate, pack-up, then one usage rate
/// per user.
class ParameterSampler
{
public:
  explicit ParameterSampler(std::uint64_t seed)
  : _engine(seed)
  {
  }

  TaskDraw draw(const ScenarioConfig& config, Task task)
  {
    const auto& rep = config.replenisher;
    const auto& depot = config.depot;
    TaskDraw d;
    d.speed = sample_truncated(rep.speed, _engine, _unit);
    if (task.is_depot())
    {
      d.setup = sample_truncated(depot.setup_time, _engine, _unit);
      d.rate = sample_truncated(depot.replenish_rate, _engine, _unit);
      d.packup = sample_truncated(depot.packup_time, _engine, _unit);
    }
    else
    {
      d.setup = sample_truncated(rep.setup_time, _engine, _unit);
      d.rate = sample_truncated(rep.replenish_rate, _engine, _unit);
      d.packup = sample_truncated(rep.packup_time, _engine, _unit);
    }
    _usage.resize(config.users.size());
    for (std::size_t i = 0; i < _usage.size(); ++i)
      _usage[i] = sample_truncated(config.users[i].usage_rate, _engine, _unit);
    d.usage = _usage;
    return d;
  }

  double uniform(double low, double high)
  {
    return std::uniform_real_distribution<double>(low, high)(_engine);
  }

  std::mt19937_64& engine() { return _engine; }

private:
  std::mt19937_64 _engine;
  std::normal_distribution<double> _unit{0.0, 1.0};
  std::vector<double> _usage;
};

//==============================================================================
enum class RolloutMode
{
  /// Every quantity is a point value; variances stay zero.
  Deterministic,

  /// First-order Gaussian moment propagation around the mean trajectory.
  Stochastic
};

/// Incremental schedule rollout from a fleet state.
///
/// The mean trajectory is always exact arithmetic on the supplied parameters.
/// In Stochastic mode each activity also carries a variance, and each user's
/// empty time is the expected positive part of (evaluation time - depletion
/// time), with the depletion-time spread taken from per-task usage-rate
/// variation.
///
/// A user's emptiness ends when a transfer to it begins. Usage pauses while a
/// tank is empty.
template<RolloutMode Mode>
class RolloutCursor
{
public:
  static constexpr bool moments = Mode == RolloutMode::Stochastic;

  RolloutCursor(const RolloutContext& context, const FleetState& state)
  : _context(&context),
    _origin(state.clock),
    _clock(state.clock),
    _replenisher_level(state.replenisher_level),
    _location(state.replenisher_location),
    _last_task(state.last_task)
  {
    const auto& config = context.config();
    if (state.user_levels.size() != config.users.size())
      throw RolloutError("fleet state has the wrong number of user levels");
    if (!(state.clock >= 0.0))
      throw RolloutError("fleet state clock must be non-negative");
    if (state.replenisher_location >= config.network.size())
      throw RolloutError("fleet state replenisher location is not a network node");
    if (!(state.replenisher_level >= 0.0
          && state.replenisher_level <= config.replenisher.capacity))
      throw RolloutError("replenisher level outside [0, capacity]");

    _users.resize(state.user_levels.size());
    for (std::size_t i = 0; i < _users.size(); ++i)
    {
      const double level = state.user_levels[i];
      if (!(level >= 0.0 && level <= config.users[i].capacity))
      {
        throw RolloutError(
          "user " + std::to_string(i) + " level outside [0, capacity]");
      }
      auto& u = _users[i];
      u.level = level;
      u.window_from = _clock;
      if (level <= 0.0)
      {
        u.empty = true;
        u.empty_since = _clock;
      }
    }
  }

  /// Executes one task with mean parameters.
  TaskRecord apply(Task task)
  {
    return apply(task, _context->mean_draw(task), NullObserver{});
  }

  /// Executes one task with the given parameter values. Activities that would
  /// run past `cutoff` are cut short there and the cursor is marked truncated.
  template<class Observer>
  TaskRecord apply(
    Task task,
    const TaskDraw& draw,
    Observer&& observe,
    double cutoff = std::numeric_limits<double>::infinity())
  {
    const auto& config = _context->config();
    if (_truncated)
      throw RolloutError("rollout already stopped at its cutoff");
    if (!task.is_depot() && task.user_index() >= _users.size())
      throw RolloutError("task refers to an unknown user agent");

    const auto& rep = config.replenisher;
    const std::size_t agent = task.is_depot() ? replenisher_agent : task.user_index();
    const NodeIndex destination = config.location_of(task);
    const double distance =
      destination == _location ? 0.0 : config.network.distance(_location, destination);

    TaskRecord record;
    record.task = task;
    record.start = {_clock, _cumvar};

    // Travel and set-up.
    const double travel = distance / draw.speed;
    record.duration.travel.mean = travel;
    record.duration.setup.mean = draw.setup;
    if constexpr (moments)
    {
      const auto& speed = rep.speed;
      const double mu2 = speed.mean * speed.mean;
      record.duration.travel.variance =
        distance * distance * speed.std_dev * speed.std_dev / (mu2 * mu2);
      const auto& setup = task.is_depot() ? config.depot.setup_time : rep.setup_time;
      record.duration.setup.variance = setup.std_dev * setup.std_dev;
    }

    observe(_clock, EventKind::TravelStart, task, agent, _replenisher_level);
    const double transfer_start = _clock + travel + draw.setup;
    if (transfer_start > cutoff)
    {
      _drain(_clock, cutoff, draw.usage, _users.size(), task, observe);
      _stop_at(cutoff);
      record.transfer_start = record.end = {cutoff, _cumvar};
      return record;
    }
    _drain(_clock, transfer_start, draw.usage, _users.size(), task, observe);
    _clock = transfer_start;
    _cumvar += record.duration.travel.variance + record.duration.setup.variance;
    record.transfer_start = {_clock, _cumvar};

    // Transfer.
    double tau = 0.0;
    double transferred = 0.0;
    if (task.is_depot())
    {
      observe(_clock, EventKind::TransferStart, task, agent, _replenisher_level);
      const double deficit = rep.capacity - _replenisher_level;
      tau = deficit / draw.rate;
      bool complete = true;
      if (_clock + tau > cutoff)
      {
        tau = cutoff - _clock;
        complete = false;
      }
      if constexpr (moments)
      {
        const auto& r = config.depot.replenish_rate;
        const double mu2 = r.mean * r.mean;
        record.duration.transfer.variance =
          deficit * deficit * r.std_dev * r.std_dev / (mu2 * mu2);
      }
      _drain(_clock, _clock + tau, draw.usage, _users.size(), task, observe);
      transferred = complete ? deficit : std::min(deficit, draw.rate * tau);
      _replenisher_level = complete ? rep.capacity : _replenisher_level + transferred;
    }
    else
    {
      const std::size_t i = task.user_index();
      auto& u = _users[i];
      const double capacity = config.users[i].capacity;
      _close_segment(i);
      observe(_clock, EventKind::TransferStart, task, i, u.level);

      const double usage = draw.usage[i];
      const double net = draw.rate - usage;
      if (!(net > 0.0))
      {
        throw RolloutError(
          "replenish rate does not exceed the usage rate of user " + std::to_string(i));
      }
      const double deficit = capacity - u.level;
      const double fill_time = deficit / net;
      const double exhaust_time = _replenisher_level / draw.rate;
      const bool fills = fill_time <= exhaust_time;
      tau = fills ? fill_time : exhaust_time;
      bool complete = true;
      if (_clock + tau > cutoff)
      {
        tau = cutoff - _clock;
        complete = false;
      }

      if constexpr (moments)
      {
        const auto& r = rep.replenish_rate;
        const auto& rho = config.users[i].usage_rate;
        if (fills)
        {
          const double rate_var = r.std_dev * r.std_dev + rho.std_dev * rho.std_dev;
          const double net2 = net * net;
          record.duration.transfer.variance = deficit * deficit * rate_var / (net2 * net2);
        }
        else
        {
          const double mu2 = r.mean * r.mean;
          record.duration.transfer.variance = _replenisher_level * _replenisher_level
            * r.std_dev * r.std_dev / (mu2 * mu2);
        }
      }

      _drain(_clock, _clock + tau, draw.usage, i, task, observe);

      if (complete && fills)
      {
        transferred = draw.rate * tau;
        u.level = capacity;
        _replenisher_level = std::max(0.0, _replenisher_level - transferred);
      }
      else if (complete)
      {
        transferred = _replenisher_level;
        u.level = std::min(capacity, u.level + net * tau);
        _replenisher_level = 0.0;
      }
      else
      {
        transferred = std::min(_replenisher_level, draw.rate * tau);
        u.level = std::min(capacity, u.level + net * tau);
        _replenisher_level = std::max(0.0, _replenisher_level - transferred);
      }
      u.received += transferred;
      u.consumed += usage * tau;
    }

    record.duration.transfer.mean = tau;
    record.transferred = transferred;
    record.duration.transferred_liters = transferred;
    _clock += tau;
    if (!task.is_depot())
    {
      const std::size_t i = task.user_index();
      _open_segment(i);
      if (_users[i].empty)
        observe(_clock, EventKind::AgentEmpty, task, i, 0.0);
    }

    if (_clock >= cutoff)
    {
      _stop_at(cutoff);
      record.end = {_clock, _cumvar};
      return record;
    }

    _cumvar += record.duration.transfer.variance;
    observe(_clock, EventKind::TransferEnd, task, agent, _replenisher_level);
    if (!task.is_depot())
    {
      observe(
        _clock, EventKind::AgentReplenished, task, task.user_index(),
        _users[task.user_index()].level);
    }

    // Pack-up.
    record.duration.packup.mean = draw.packup;
    if constexpr (moments)
    {
      const auto& packup = task.is_depot() ? config.depot.packup_time : rep.packup_time;
      record.duration.packup.variance = packup.std_dev * packup.std_dev;
    }
    const double end = _clock + draw.packup;
    if (end > cutoff)
    {
      _drain(_clock, cutoff, draw.usage, _users.size(), task, observe);
      _stop_at(cutoff);
      record.end = {_clock, _cumvar};
      return record;
    }
    _drain(_clock, end, draw.usage, _users.size(), task, observe);
    _clock = end;
    _cumvar += record.duration.packup.variance;
    _location = destination;
    _last_task = task;
    _close_window();

    observe(_clock, EventKind::TaskEnd, task, agent, _replenisher_level);
    record.end = {_clock, _cumvar};
    return record;
  }

  double clock() const { return _clock; }
  double origin() const { return _origin; }
  double elapsed() const { return _clock - _origin; }
  TimeMoment total_time() const { return {_clock - _origin, _cumvar}; }
  double replenisher_level() const { return _replenisher_level; }
  NodeIndex location() const { return _location; }
  const std::optional<Task>& last_task() const { return _last_task; }
  bool truncated() const { return _truncated; }
  std::size_t user_count() const { return _users.size(); }
  double user_level(std::size_t i) const { return _users[i].level; }
  bool user_empty(std::size_t i) const { return _users[i].empty; }
  double received(std::size_t i) const { return _users[i].received; }
  double consumed(std::size_t i) const { return _users[i].consumed; }

  /// Predicted depot-only condition: level below the threshold or exhausted.
  bool depot_forced() const
  {
    const auto& rep = _context->config().replenisher;
    return _replenisher_level <= 0.0 || _replenisher_level < rep.depot_threshold();
  }

  /// Expected empty time of user i from the origin up to the current clock.
  TimeMoment empty_time(std::size_t i) const
  {
    const auto& u = _users[i];
    if constexpr (!moments)
    {
      return {u.closed_mean + (u.empty ? _clock - u.empty_since : 0.0), 0.0};
    }
    else
    {
      const auto open = _segment_moment(i, _clock, _cumvar);
      return {u.closed_mean + open.mean, u.closed_var + open.variance};
    }
  }

  std::vector<TimeMoment> empty_times() const
  {
    std::vector<TimeMoment> out;
    out.reserve(_users.size());
    for (std::size_t i = 0; i < _users.size(); ++i)
      out.push_back(empty_time(i));
    return out;
  }

  /// Sum of w_i * E[T_i] so far, accumulated in user order.
  double weighted_empty_time(std::span<const double> weights) const
  {
    double total = 0.0;
    for (std::size_t i = 0; i < _users.size(); ++i)
      total += weights[i] * empty_time(i).mean;
    return total;
  }

  FleetState state() const
  {
    FleetState s;
    s.clock = _clock;
    s.user_levels.reserve(_users.size());
    for (const auto& u : _users)
      s.user_levels.push_back(u.level);
    s.replenisher_level = _replenisher_level;
    s.replenisher_location = _location;
    s.last_task = _last_task;
    return s;
  }

private:
  struct UserTrack
  {
    double level = 0.0;
    bool empty = false;
    double empty_since = 0.0;

    // Closed segments.
    double closed_mean = 0.0;
    double closed_var = 0.0;

    // Open segment, Stochastic mode only: time-variance at its start, start of
    // the current task window, and the sum of squared window lengths already
    // spent draining.
    double seg_cumvar = 0.0;
    double window_from = 0.0;
    double sumsq = 0.0;

    double received = 0.0;
    double consumed = 0.0;
  };

  TimeMoment _segment_moment(std::size_t i, double t, double cumvar) const
  {
    const auto& u = _users[i];
    const double usage = _context->usage_means()[i];
    const double depletion = u.empty ? u.empty_since : t + u.level / usage;
    const double mean = t - depletion;
    double sumsq = u.sumsq;
    if (!u.empty)
    {
      const double partial = t - u.window_from;
      sumsq += partial * partial;
    }
    const double var =
      std::max(0.0, cumvar - u.seg_cumvar) + _context->usage_cv2(i) * sumsq;
    const double sd = std::sqrt(var);
    return {gaussian_positive_part(mean, sd), gaussian_positive_part_variance(mean, sd)};
  }

  void _close_segment(std::size_t i)
  {
    auto& u = _users[i];
    if constexpr (!moments)
    {
      if (u.empty)
        u.closed_mean += _clock - u.empty_since;
    }
    else
    {
      const auto m = _segment_moment(i, _clock, _cumvar);
      u.closed_mean += m.mean;
      u.closed_var += m.variance;
    }
    u.empty = false;
  }

  void _open_segment(std::size_t i)
  {
    auto& u = _users[i];
    u.seg_cumvar = _cumvar;
    u.window_from = _clock;
    u.sumsq = 0.0;
    if (u.level <= 0.0)
    {
      u.empty = true;
      u.empty_since = _clock;
    }
  }

  void _close_window()
  {
    if constexpr (moments)
    {
      for (auto& u : _users)
      {
        if (u.empty)
          continue;
        const double d = _clock - u.window_from;
        u.sumsq += d * d;
        u.window_from = _clock;
      }
    }
  }

  template<class Observer>
  void _drain(
    double from, double to, std::span<const double> usage, std::size_t skip,
    Task task, Observer& observe)
  {
    const double dt = to - from;
    if (!(dt > 0.0))
      return;
    for (std::size_t j = 0; j < _users.size(); ++j)
    {
      auto& u = _users[j];
      if (j == skip || u.empty)
        continue;
      const double used = usage[j] * dt;
      if (used >= u.level)
      {
        const double depletion = from + u.level / usage[j];
        u.consumed += u.level;
        u.level = 0.0;
        u.empty = true;
        u.empty_since = depletion;
        if constexpr (moments)
        {
          const double d = depletion - u.window_from;
          u.sumsq += d * d;
        }
        observe(depletion, EventKind::AgentEmpty, task, j, 0.0);
      }
      else
      {
        u.level -= used;
        u.consumed += used;
      }
    }
  }

  void _stop_at(double cutoff)
  {
    _clock = cutoff;
    _truncated = true;
  }

  const RolloutContext* _context;
  double _origin = 0.0;
  double _clock = 0.0;
  double _cumvar = 0.0;
  double _replenisher_level = 0.0;
  NodeIndex _location = 0;
  std::optional<Task> _last_task;
  bool _truncated = false;
  std::vector<UserTrack> _users;
};

using DeterministicCursor = RolloutCursor<RolloutMode::Deterministic>;
using StochasticCursor = RolloutCursor<RolloutMode::Stochastic>;

//==============================================================================
/// Durations of one task started from `state`, at mean parameter values, with
/// delta-method variances.
inline TaskDuration task_duration(
  const ScenarioConfig& config, const FleetState& state, Task task)
{
  const RolloutContext context(config);
  StochasticCursor cursor(context, state);
  return cursor.apply(task).duration;
}

//==============================================================================
namespace detail {

inline void require_schedule(const ScenarioConfig& config, const Schedule& schedule)
{
  if (schedule.empty())
    throw RolloutError("schedule must not be empty");
  if (!is_valid_schedule(schedule, config.users.size()))
    throw RolloutError("schedule " + to_string(schedule) + " is not valid");
}

template<RolloutMode Mode>
Prediction mean_rollout(
  const ScenarioConfig& config, const FleetState& state, const Schedule& schedule)
{
  require_schedule(config, schedule);
  const RolloutContext context(config);
  RolloutCursor<Mode> cursor(context, state);
  Prediction p;
  p.per_task.reserve(schedule.size());
  for (const Task task : schedule)
    p.per_task.push_back(cursor.apply(task));
  p.empty_time = cursor.empty_times();
  p.total_time = cursor.total_time();
  p.end_state = cursor.state();
  return p;
}

struct RunningMoment
{
  std::size_t count = 0;
  double mean = 0.0;
  double m2 = 0.0;

  void add(double x)
  {
    ++count;
    const double delta = x - mean;
    mean += delta / static_cast<double>(count);
    m2 += delta * (x - mean);
  }

  TimeMoment moment() const
  {
    return {mean, count > 1 ? std::max(0.0, m2 / static_cast<double>(count - 1)) : 0.0};
  }
};

} // namespace detail

/// Rollout at mean parameter values.
inline Prediction rollout_deterministic(
  const ScenarioConfig& config, const FleetState& state, const Schedule& schedule)
{
  return detail::mean_rollout<RolloutMode::Deterministic>(config, state, schedule);
}

/// Rollout with first-order Gaussian moment propagation.
inline Prediction rollout_stochastic(
  const ScenarioConfig& config, const FleetState& state, const Schedule& schedule)
{
  return detail::mean_rollout<RolloutMode::Stochastic>(config, state, schedule);
}

/// Sample means and variances over `samples` rollouts with sampled
/// parameters. Every parameter is drawn once per task per sample.
inline Prediction rollout_monte_carlo(
  const ScenarioConfig& config,
  const FleetState& state,
  const Schedule& schedule,
  std::size_t samples,
  std::uint64_t seed)
{
  using detail::RunningMoment;
  detail::require_schedule(config, schedule);
  if (samples == 0)
    throw RolloutError("monte carlo rollout needs at least one sample");

  const RolloutContext context(config);
  ParameterSampler sampler(seed);
  const std::size_t n = config.users.size();
  const std::size_t h = schedule.size();

  struct TaskStats
  {
    RunningMoment start, transfer_start, end, transferred;
    RunningMoment travel, setup, transfer, packup;
  };
  std::vector<TaskStats> task_stats(h);
  std::vector<RunningMoment> empty(n), levels(n);
  RunningMoment total, replenisher, clock;

  for (std::size_t s = 0; s < samples; ++s)
  {
    DeterministicCursor cursor(context, state);
    for (std::size_t k = 0; k < h; ++k)
    {
      const auto r = cursor.apply(schedule[k], sampler.draw(config, schedule[k]), NullObserver{});
      auto& ts = task_stats[k];
      ts.start.add(r.start.mean);
      ts.transfer_start.add(r.transfer_start.mean);
      ts.end.add(r.end.mean);
      ts.transferred.add(r.transferred);
      ts.travel.add(r.duration.travel.mean);
      ts.setup.add(r.duration.setup.mean);
      ts.transfer.add(r.duration.transfer.mean);
      ts.packup.add(r.duration.packup.mean);
    }
    for (std::size_t i = 0; i < n; ++i)
    {
      empty[i].add(cursor.empty_time(i).mean);
      levels[i].add(cursor.user_level(i));
    }
    total.add(cursor.elapsed());
    replenisher.add(cursor.replenisher_level());
    clock.add(cursor.clock());
  }

  Prediction p;
  for (std::size_t k = 0; k < h; ++k)
  {
    const auto& ts = task_stats[k];
    TaskRecord r;
    r.task = schedule[k];
    r.start = ts.start.moment();
    r.transfer_start = ts.transfer_start.moment();
    r.end = ts.end.moment();
    r.transferred = ts.transferred.mean;
    r.duration.travel = ts.travel.moment();
    r.duration.setup = ts.setup.moment();
    r.duration.transfer = ts.transfer.moment();
    r.duration.packup = ts.packup.moment();
    r.duration.transferred_liters = ts.transferred.mean;
    p.per_task.push_back(r);
  }
  for (std::size_t i = 0; i < n; ++i)
  {
    p.empty_time.push_back(empty[i].moment());
    p.end_state.user_levels.push_back(levels[i].mean);
  }
  p.total_time = total.moment();
  p.end_state.clock = clock.mean;
  p.end_state.replenisher_level = replenisher.mean;
  p.end_state.replenisher_location = config.location_of(schedule.back());
  p.end_state.last_task = schedule.back();
  return p;
}

} // namespace scar

#endif // SCAR__PREDICTION_HPP
