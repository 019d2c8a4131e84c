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

#ifndef SCAR__GAUSSIAN_HPP
#define SCAR__GAUSSIAN_HPP

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

namespace scar {

//==============================================================================
/// A Gaussian-distributed physical parameter.
struct GaussianParam
{
  double mean = 0.0;
  double std_dev = 0.0;

  friend bool operator==(const GaussianParam&, const GaussianParam&) = default;
};

//==============================================================================
inline double standard_normal_pdf(double x)
{
  return std::exp(-0.5 * x * x) / std::sqrt(2.0 * std::numbers::pi);
}

//==============================================================================
inline double standard_normal_cdf(double x)
{
  return 0.5 * std::erfc(-x / std::numbers::sqrt2);
}

//==============================================================================
/// E[max(0, X)] for X ~ N(mean, std_dev^2).
///
/// For z = mean/std_dev the value is std_dev * (z*Phi(z) + phi(z)). Positive z
/// is folded through E[max(0,X)] = mean + E[max(0,-X)] so that the
/// cancellation only ever happens in the far left tail, where both terms are
/// tiny.
inline double gaussian_positive_part(double mean, double std_dev)
{
  if (!(std_dev > 0.0))
    return std::max(0.0, mean);

  const double z = mean / std_dev;
  const double left = -std::abs(z);
  const double tail = std::max(
    0.0, left * standard_normal_cdf(left) + standard_normal_pdf(left));

  if (z < 0.0)
    return std_dev * tail;

  return mean + std_dev * tail;
}

//==============================================================================
/// Var[max(0, X)] for X ~ N(mean, std_dev^2).
inline double gaussian_positive_part_variance(double mean, double std_dev)
{
  if (!(std_dev > 0.0))
    return 0.0;

  const double z = mean / std_dev;
  const double second_moment =
    (mean * mean + std_dev * std_dev) * standard_normal_cdf(z)
    + mean * std_dev * standard_normal_pdf(z);
  const double first = gaussian_positive_part(mean, std_dev);
  return std::max(0.0, second_moment - first * first);
}

//==============================================================================
/// Draws one value of a physical parameter. Values are clamped from below at
/// 1e-6 of the mean (or at zero for zero-mean durations) so that sampled
/// rates, speeds and durations stay positive.
///
/// A standard normal variate is always consumed, even when std_dev is zero,
/// so the random stream stays aligned across scenarios that differ only in
/// their spreads.
template<class Engine>
double sample_truncated(
  const GaussianParam& param,
  Engine& engine,
  std::normal_distribution<double>& unit)
{
  const double z = unit(engine);
  const double value = param.mean + param.std_dev * z;
  const double floor = param.mean > 0.0 ? 1e-6 * param.mean : 0.0;
  return std::max(value, floor);
}

} // namespace scar

#endif // SCAR__GAUSSIAN_HPP
