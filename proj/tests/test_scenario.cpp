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

#include "support.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace scar;
using scar::test::json;

TEST(LoadConfig, DefaultSixUserScenario)
{
  const auto config = test::default_scenario(6);
  ASSERT_EQ(config.user_count(), 6u);
  for (const auto w : config.weights())
    EXPECT_DOUBLE_EQ(w, 1.0 / 6.0);
  EXPECT_DOUBLE_EQ(config.users[2].capacity, 700.0);
  EXPECT_DOUBLE_EQ(config.users[4].usage_rate.std_dev, 0.08);
  EXPECT_DOUBLE_EQ(config.replenisher.capacity, 5000.0);
  EXPECT_DOUBLE_EQ(config.replenisher.depot_threshold(), 250.0);
  EXPECT_DOUBLE_EQ(config.depot.replenish_rate.mean, 20.0);
  EXPECT_DOUBLE_EQ(config.sim_duration, 18000.0);
}

TEST(LoadConfig, DefaultLayoutDistances)
{
  for (const std::size_t n : {4u, 5u, 6u})
  {
    const auto config = test::default_scenario(n);
    std::vector<NodeIndex> agents{config.depot.location};
    for (const auto& u : config.users)
      agents.push_back(u.location);
    for (const auto a : agents)
      for (const auto b : agents)
        if (a != b)
        {
          const double d = config.network.distance(a, b);
          EXPECT_GE(d, 200.0);
          EXPECT_LE(d, 1500.0);
        }
  }
}

TEST(LoadConfig, SingleUserMinimalScenario)
{
  auto j = test::star_json({300.0});
  const auto config = test::load(j);
  ASSERT_EQ(config.user_count(), 1u);
  EXPECT_DOUBLE_EQ(config.weights()[0], 1.0);
  EXPECT_DOUBLE_EQ(config.replenisher.depot_threshold_fraction, 0.05);
  EXPECT_DOUBLE_EQ(config.sim_duration, 18000.0);
}

TEST(LoadConfig, WeightsAreNormalized)
{
  auto j = test::star_json({300.0, 400.0});
  j["users"][0]["weight"] = 3.0;
  j["users"][1]["weight"] = 1.0;
  const auto w = test::load(j).weights();
  EXPECT_DOUBLE_EQ(w[0], 0.75);
  EXPECT_DOUBLE_EQ(w[1], 0.25);
}

TEST(LoadConfig, NegativeCapacityNamesUser)
{
  auto j = test::star_json({300.0, 300.0, 300.0});
  j["users"][2]["capacity"] = -700.0;
  try
  {
    test::load(j);
    FAIL() << "expected a ConfigError";
  }
  catch (const ConfigError& e)
  {
    const std::string msg = e.what();
    EXPECT_NE(msg.find("user 2"), std::string::npos) << msg;
    EXPECT_NE(msg.find("capacity"), std::string::npos) << msg;
  }
}

TEST(LoadConfig, RejectsInvalidDocuments)
{
  EXPECT_THROW(load_config("{not json"), ConfigError);
  EXPECT_THROW(load_config("[]"), ConfigError);

  auto slow = test::star_json({300.0});
  slow["replenisher"]["replenish_rate"] = test::gaussian(0.5);
  EXPECT_THROW(test::load(slow), ConfigError);

  auto edge = test::star_json({300.0});
  edge["network"]["edges"][0][2] = 0.0;
  EXPECT_THROW(test::load(edge), ConfigError);

  auto island = test::star_json({300.0});
  island["network"]["nodes"].push_back(json{{"id", "far"}, {"x", 9.0}, {"y", 9.0}});
  island["users"][0]["location"] = "far";
  EXPECT_THROW(test::load(island), ConfigError);

  auto unknown = test::star_json({300.0});
  unknown["depot"]["location"] = "nowhere";
  EXPECT_THROW(test::load(unknown), ConfigError);

  auto negative_sd = test::star_json({300.0});
  negative_sd["replenisher"]["speed"] = test::gaussian(15.0, -1.0);
  EXPECT_THROW(test::load(negative_sd), ConfigError);

  auto no_users = test::star_json({300.0});
  no_users["users"] = json::array();
  EXPECT_THROW(test::load(no_users), ConfigError);
}

TEST(LoadConfig, SerializeRoundTrip)
{
  const auto config = test::default_scenario(5);
  const auto again = load_config(serialize_config(config));
  EXPECT_EQ(serialize_config(again), serialize_config(config));
  EXPECT_EQ(again.user_count(), 5u);
}

TEST(TravelTime, SingleEdge)
{
  const auto config = test::load(test::star_json({300.0}));
  const auto& net = config.network;
  EXPECT_NEAR(travel_time(net, net.index_of("rp"), net.index_of("u0"), 15.0), 20.0, 1e-12);
  EXPECT_DOUBLE_EQ(travel_time(net, net.index_of("u0"), net.index_of("u0"), 15.0), 0.0);
  EXPECT_THROW(travel_time(net, net.index_of("rp"), net.index_of("u0"), 0.0),
    std::invalid_argument);
}

TEST(TravelTime, TwoHopPath)
{
  // rp - a is 300 m and a - b is 400 m; the direct rp - b road is longer.
  const json network{
    {"nodes",
     json::array({json{{"id", "rp"}, {"x", 0}, {"y", 0}}, json{{"id", "a"}, {"x", 300}, {"y", 0}},
                  json{{"id", "b"}, {"x", 300}, {"y", 400}}})},
    {"edges", json::array({json::array({"rp", "a", 300.0}), json::array({"a", "b", 400.0}),
                           json::array({"rp", "b", 900.0})})}};
  auto j = test::star_json({300.0});
  j["network"] = network;
  j["users"][0]["location"] = "b";
  const auto config = test::load(j);
  const auto& net = config.network;
  EXPECT_NEAR(travel_time(net, net.index_of("rp"), net.index_of("b"), 15.0), 46.666667, 1e-6);
}

TEST(RoadNetwork, MetricProperties)
{
  const auto config = test::default_scenario(6);
  const auto& net = config.network;
  const std::size_t n = net.size();
  for (NodeIndex a = 0; a < n; ++a)
  {
    EXPECT_DOUBLE_EQ(net.distance(a, a), 0.0);
    for (NodeIndex b = 0; b < n; ++b)
    {
      EXPECT_DOUBLE_EQ(net.distance(a, b), net.distance(b, a));
      for (NodeIndex c = 0; c < n; ++c)
        EXPECT_LE(net.distance(a, c), net.distance(a, b) + net.distance(b, c) + 1e-9);
    }
  }
}

TEST(Task, ParsingAndFormatting)
{
  EXPECT_EQ(parse_task("r"), Task::depot());
  EXPECT_EQ(parse_task("3"), Task::user(3));
  EXPECT_THROW(parse_task("x"), ConfigError);
  EXPECT_THROW(parse_task("3a"), ConfigError);

  const Schedule s{Task::user(0), Task::depot(), Task::user(3), Task::user(2), Task::user(0),
                   Task::user(2), Task::depot()};
  EXPECT_EQ(to_string(s), "(0,r,3,2,0,2,r)");
  EXPECT_TRUE(is_valid_schedule(s, 4));
  EXPECT_FALSE(is_valid_schedule({Task::user(1), Task::user(1)}, 4));
  EXPECT_FALSE(is_valid_schedule({Task::depot(), Task::depot()}, 4));
  EXPECT_FALSE(is_valid_schedule({Task::user(4)}, 4));

  EXPECT_LT(Task::user(5), Task::depot());
  EXPECT_EQ(Task::from_slot(4, 4), Task::depot());
  EXPECT_EQ(Task::user(2).slot(4), 2u);
}
