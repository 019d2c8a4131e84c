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

#ifndef SCAR__ERRORS_HPP
#define SCAR__ERRORS_HPP

#include <stdexcept>
#include <string>

namespace scar {

/// A scenario, state, or plan document failed to parse or validate.
class ConfigError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// Two nodes of a road network have no path between them.
class UnreachableError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// A rollout cannot make progress, e.g. a replenish rate that does not exceed
/// the usage rate of the agent being replenished.
class RolloutError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

/// The search was asked for something it cannot do (zero horizon, an
/// enumeration beyond the brute-force guard, ...).
class SearchError : public std::runtime_error
{
public:
  using std::runtime_error::runtime_error;
};

} // namespace scar

#endif // SCAR__ERRORS_HPP
