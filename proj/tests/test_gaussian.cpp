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

#include <scar/gaussian.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

namespace {

// Composite Simpson rule for E[max(0,X)] over +-12 standard deviations.
double integrate_positive_part(double mean, double std_dev)
{
  const double lo = std::max(0.0, mean - 12.0 * std_dev);
  const double hi = std::max(lo, mean + 12.0 * std_dev);
  const int steps = 20000;
  const double h = (hi - lo) / steps;
  const auto f = [&](double x) {
    const double z = (x - mean) / std_dev;
    return x * std::exp(-0.5 * z * z) / (std_dev * std::sqrt(2.0 * std::numbers::pi));
  };
  double sum = f(lo) + f(hi);
  for (int i = 1; i < steps; ++i)
    sum += f(lo + i * h) * (i % 2 == 1 ? 4.0 : 2.0);
  return sum * h / 3.0;
}

} // namespace

TEST(GaussianPositivePart, DegenerateDistribution)
{
  EXPECT_DOUBLE_EQ(scar::gaussian_positive_part(5.0, 0.0), 5.0);
  EXPECT_DOUBLE_EQ(scar::gaussian_positive_part(-3.0, 0.0), 0.0);
}

TEST(GaussianPositivePart, StandardNormalMatchesQuadrature)
{
  const double oracle = integrate_positive_part(0.0, 1.0);
  EXPECT_NEAR(oracle, 0.398942, 1e-5);
  EXPECT_NEAR(scar::gaussian_positive_part(0.0, 1.0), oracle, 1e-9);
}

TEST(GaussianPositivePart, CenteredSigmaTen)
{
  EXPECT_NEAR(scar::gaussian_positive_part(0.0, 10.0), 3.989, 1e-3);
  EXPECT_NEAR(
    scar::gaussian_positive_part(0.0, 10.0), 10.0 / std::sqrt(2.0 * std::numbers::pi), 1e-12);
}

TEST(GaussianPositivePart, MatchesQuadratureOnRandomInputs)
{
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> mean(-30.0, 30.0);
  std::uniform_real_distribution<double> sd(0.1, 20.0);
  for (int k = 0; k < 50; ++k)
  {
    const double m = mean(rng);
    const double s = sd(rng);
    EXPECT_NEAR(scar::gaussian_positive_part(m, s), integrate_positive_part(m, s), 1e-7)
      << "mean " << m << " sd " << s;
  }
}

TEST(GaussianPositivePart, BoundsAndMonotonicity)
{
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> mean(-50.0, 50.0);
  std::uniform_real_distribution<double> sd(0.0, 30.0);
  for (int k = 0; k < 1000; ++k)
  {
    const double m = mean(rng);
    const double s1 = sd(rng);
    const double s2 = s1 + sd(rng);
    const double a = scar::gaussian_positive_part(m, s1);
    const double b = scar::gaussian_positive_part(m, s2);
    EXPECT_GE(a, std::max(0.0, m));
    EXPECT_GE(b, a - 1e-12 * std::max(1.0, std::abs(a)));
    EXPECT_GE(scar::gaussian_positive_part(m + 1.0, s1), a);
  }
}

TEST(GaussianPositivePart, ConvergesAsSpreadVanishes)
{
  for (const double m : {-4.0, -0.5, 0.0, 0.5, 4.0})
  {
    EXPECT_NEAR(scar::gaussian_positive_part(m, 1e-9), std::max(0.0, m), 1e-9);
  }
}

TEST(GaussianPositivePart, FarTailStaysNonNegative)
{
  for (double m = -1000.0; m <= 0.0; m += 7.0)
  {
    const double v = scar::gaussian_positive_part(m, 1.0);
    EXPECT_GE(v, 0.0);
    EXPECT_TRUE(std::isfinite(v));
  }
}

TEST(GaussianPositivePart, VarianceMatchesSampling)
{
  std::mt19937_64 rng(5);
  const double m = 2.0;
  const double s = 3.0;
  std::normal_distribution<double> x(m, s);
  double sum = 0.0;
  double sum2 = 0.0;
  const int n = 400000;
  for (int i = 0; i < n; ++i)
  {
    const double v = std::max(0.0, x(rng));
    sum += v;
    sum2 += v * v;
  }
  const double mean = sum / n;
  const double var = sum2 / n - mean * mean;
  EXPECT_NEAR(scar::gaussian_positive_part(m, s), mean, 0.02);
  EXPECT_NEAR(scar::gaussian_positive_part_variance(m, s), var, 0.1);
  EXPECT_DOUBLE_EQ(scar::gaussian_positive_part_variance(m, 0.0), 0.0);
}

TEST(SampleTruncated, ClampsAndConsumesOneVariate)
{
  std::mt19937_64 a(9);
  std::mt19937_64 b(9);
  std::normal_distribution<double> ua(0.0, 1.0);
  std::normal_distribution<double> ub(0.0, 1.0);

  // A zero-spread parameter still advances the stream by one variate.
  EXPECT_DOUBLE_EQ(scar::sample_truncated({4.0, 0.0}, a, ua), 4.0);
  ub(b);
  EXPECT_DOUBLE_EQ(
    scar::sample_truncated({4.0, 1.0}, a, ua), scar::sample_truncated({4.0, 1.0}, b, ub));

  std::mt19937_64 rng(1);
  std::normal_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i)
    EXPECT_GE(scar::sample_truncated({1.0, 100.0}, rng, unit), 1e-6);
}
