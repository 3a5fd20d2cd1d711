// Copyright 2026 The iontrap Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <gtest/gtest.h>

#include <map>
#include <set>
#include <sstream>

#include "iontrap/device.hpp"
#include "iontrap/error.hpp"
#include "iontrap/routing.hpp"
#include "iontrap/workload.hpp"
#include "json.hpp"

namespace iontrap {
namespace {

RoutingConfig config(int density, double penalty = 0.5) {
  RoutingConfig cfg;
  cfg.density = density;
  cfg.swap_penalty = penalty;
  return cfg;
}

TEST(Engine, NamesRoundTrip) {
  for (Engine e : {Engine::kLanePriority, Engine::kSwapBased, Engine::kLowerBound}) {
    EXPECT_EQ(engine_from_string(to_string(e)), e);
  }
  EXPECT_EQ(engine_from_string("lane"), Engine::kLanePriority);
  EXPECT_EQ(engine_from_string("swap"), Engine::kSwapBased);
  EXPECT_EQ(engine_from_string("lower-bound"), Engine::kLowerBound);
  EXPECT_THROW(engine_from_string("teleport"), Error);
}

class EngineSafety : public ::testing::TestWithParam<Engine> {};

TEST_P(EngineSafety, ConvergesAboveLowerBoundWithoutCollisions) {
  const Engine engine = GetParam();
  for (int m = 2; m <= 6; ++m) {
    const RoutingContext ctx(DeviceLayout(m, 7));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const DepthOneCircuit c = random_matching(2 * m * m, seed);
      const RoutingRun run = run_engine(engine, ctx, c, config(2));
      ASSERT_TRUE(run.converged) << "m=" << m << " seed=" << seed;
      EXPECT_EQ(run.violations, 0);
      EXPECT_GE(run.tau + 1e-12, run.lower_bound_tau);
      EXPECT_EQ(run.round_count, 1);
      EXPECT_EQ(static_cast<int>(run.junction_passes.size()), c.qubit_count);
      EXPECT_DOUBLE_EQ(run.tau, static_cast<double>(run.steps_raw) / 7.0);
      EXPECT_EQ(run.lower_bound_tau, lower_bound(ctx, c,
                                                 assign_pairs(ctx.layout(), ctx.directed(), c,
                                                              initial_positions(ctx.layout(), 2)),
                                                 initial_positions(ctx.layout(), 2)));
    }
  }
}

INSTANTIATE_TEST_SUITE_P(AllEngines, EngineSafety,
                         ::testing::Values(Engine::kLanePriority, Engine::kSwapBased, Engine::kLowerBound),
                         [](const auto& info) {
                           switch (info.param) {
                             case Engine::kLanePriority: return std::string("Lane");
                             case Engine::kSwapBased: return std::string("Swap");
                             default: return std::string("LowerBound");
                           }
                         });

TEST(Routing, LaneEngineNeverSwaps) {
  const RoutingContext ctx(DeviceLayout(4, 7));
  const RoutingRun run = run_lane_priority(ctx, random_matching(32, 11), config(2));
  EXPECT_EQ(run.swap_events, 0);
  for (int s : run.swaps) EXPECT_EQ(s, 0);
}

TEST(Routing, SwapCountersCountBothParticipants) {
  const RoutingContext ctx(DeviceLayout(5, 7));
  long events = 0;
  long counters = 0;
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const RoutingRun run = run_swap_based(ctx, random_matching(50, seed), config(2));
    events += run.swap_events;
    for (int s : run.swaps) counters += s;
  }
  EXPECT_GT(events, 0);
  EXPECT_EQ(counters, 2 * events);
}

TEST(Routing, DensityFourRunsTwoRounds) {
  for (int m : {3, 4, 5}) {
    const RoutingContext ctx(DeviceLayout(m, 7));
    const DepthOneCircuit c = random_matching(4 * m * m, 5);
    for (Engine e : {Engine::kLanePriority, Engine::kSwapBased, Engine::kLowerBound}) {
      const RoutingRun run = run_engine(e, ctx, c, config(4));
      EXPECT_EQ(run.round_count, 2);
      EXPECT_TRUE(run.converged);
      EXPECT_EQ(run.violations, 0);
      EXPECT_GE(run.tau + 1e-12, run.lower_bound_tau);
    }
  }
}

TEST(Routing, DensityFourConvergesOnEveryEngine) {
  // Half the ions are idle in each round, so they crowd the lanes, arms and
  // pockets the active pairs need.
  for (int m = 2; m <= 6; ++m) {
    const RoutingContext ctx(DeviceLayout(m, 7));
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const DepthOneCircuit c = random_matching(4 * m * m, seed);
      for (Engine e : {Engine::kLanePriority, Engine::kSwapBased}) {
        for (double penalty : {0.5, 1.0}) {
          const RoutingRun run = run_engine(e, ctx, c, config(4, penalty));
          EXPECT_TRUE(run.converged) << to_string(e) << " M=" << m << " seed " << seed;
          EXPECT_EQ(run.violations, 0);
          EXPECT_GE(run.tau + 1e-12, run.lower_bound_tau);
        }
      }
    }
  }
}

TEST(Routing, DensitySixRunsThreeRounds) {
  for (int m : {2, 4, 5}) {
    const RoutingContext ctx(DeviceLayout(m, 7));
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const DepthOneCircuit c = random_matching(6 * m * m, seed);
      for (Engine e : {Engine::kLanePriority, Engine::kSwapBased, Engine::kLowerBound}) {
        const RoutingRun run = run_engine(e, ctx, c, config(6));
        EXPECT_EQ(run.round_count, 3);
        EXPECT_TRUE(run.converged) << to_string(e) << " M=" << m << " seed " << seed;
        EXPECT_EQ(run.violations, 0);
        EXPECT_GE(run.tau + 1e-12, run.lower_bound_tau);
      }
    }
  }
}

TEST(Routing, DeterministicForFixedInputs) {
  const RoutingContext ctx(DeviceLayout(5, 7));
  const DepthOneCircuit c = random_matching(50, 77);
  for (Engine e : {Engine::kLanePriority, Engine::kSwapBased}) {
    const RoutingRun a = run_engine(e, ctx, c, config(2));
    const RoutingRun b = run_engine(e, ctx, c, config(2));
    EXPECT_EQ(a.steps_raw, b.steps_raw);
    EXPECT_EQ(a.junction_passes, b.junction_passes);
    EXPECT_EQ(a.swaps, b.swaps);
  }
}

TEST(Routing, RejectsMismatchedCircuit) {
  const RoutingContext ctx(DeviceLayout(3, 7));
  EXPECT_THROW(run_lane_priority(ctx, random_matching(20, 1), config(2)), Error);
  EXPECT_THROW(run_lane_priority(ctx, random_matching(18, 1), config(7)), Error);
  RoutingConfig bad = config(2, -1.0);
  EXPECT_THROW(run_swap_based(ctx, random_matching(18, 1), bad), Error);
}

TEST(Routing, StepCapReportsNonConvergence) {
  const RoutingContext ctx(DeviceLayout(4, 7));
  RoutingConfig cfg = config(2);
  cfg.step_cap = 3;
  const RoutingRun run = run_lane_priority(ctx, random_matching(32, 1), cfg);
  EXPECT_FALSE(run.converged);
  EXPECT_EQ(run.steps_raw, 3);
}

TEST(Routing, TraceIsJsonLinesOfSingleSteps) {
  const RoutingContext ctx(DeviceLayout(3, 7));
  std::ostringstream trace;
  RoutingConfig cfg = config(2);
  cfg.trace = &trace;
  const RoutingRun run = run_lane_priority(ctx, random_matching(18, 3), cfg);
  std::istringstream in(trace.str());
  std::string line;
  std::map<int, Coord> last;
  const auto start = initial_positions(ctx.layout(), 2);
  for (std::size_t i = 0; i < start.size(); ++i) last[static_cast<int>(i)] = ctx.layout().coord(start[i]);
  int lines = 0;
  long max_step = -1;
  while (std::getline(in, line)) {
    const auto j = nlohmann::json::parse(line);
    const int ion = j.at("ion");
    const Coord c{j.at("x").get<int>(), j.at("y").get<int>()};
    // A hop between the two waiting slots of a pocket crosses one corner.
    EXPECT_EQ(manhattan(c, last[ion]), j.at("action") == "hop" ? 2 : 1) << line;
    last[ion] = c;
    max_step = std::max(max_step, j.at("step").get<long>());
    ++lines;
  }
  EXPECT_GT(lines, 0);
  EXPECT_EQ(max_step + 1, run.steps_raw);
}

TEST(World, RejectsSharedStartingPositions) {
  const RoutingContext ctx(DeviceLayout(2, 7));
  const DepthOneCircuit c = random_matching(8, 1);
  auto pos = initial_positions(ctx.layout(), 2);
  pos[1] = pos[0];
  EXPECT_THROW(World(ctx, c, pos), Error);
}

TEST(World, IdleIonsStayOnTheLanes) {
  // Density 2 on a device with only one pair: every other ion is idle and
  // may only step along the lanes to make way.
  const RoutingContext ctx(DeviceLayout(3, 7));
  DepthOneCircuit c;
  c.qubit_count = 18;
  c.pairs = {{0, 17}};
  const auto start = initial_positions(ctx.layout(), 2);
  World world(ctx, c, start);
  world.begin_round(assign_round(ctx.layout(), ctx.directed(), c, {0}, start));
  int guard = 0;
  while (!world.round_complete()) {
    ASSERT_LT(++guard, 1000);
    world.step_lane_priority();
  }
  EXPECT_EQ(world.violations(), 0);
  // Idle ions never end up inside an arm or a pocket.
  for (std::size_t i = 1; i < 17; ++i) {
    EXPECT_TRUE(ctx.layout().on_lanes(world.positions()[i])) << "ion " << i;
  }
}

TEST(World, IdleQueueAdvancesWithTheIonBehindIt) {
  const RoutingContext ctx(DeviceLayout(2, 7));
  const DeviceLayout& layout = ctx.layout();
  DepthOneCircuit c;
  c.qubit_count = 5;
  c.pairs = {{0, 1}};
  std::vector<PositionId> start = {layout.id({2, 0}), layout.id({7, 3}), layout.id({0, 3}),
                                   layout.id({0, 4}), layout.id({0, 5})};

  // First learn where ion 0 steps with nothing in its way.
  PositionId first = kNoPosition;
  {
    World world(ctx, c, start);
    world.begin_round(assign_round(layout, ctx.directed(), c, {0}, start));
    world.step_lane_priority();
    first = world.positions()[0];
    ASSERT_NE(first, start[0]);
  }

  // Then line the idle ions up from that position along the lane.
  PositionId at = first;
  for (std::size_t i = 2; i < start.size(); ++i) {
    start[i] = at;
    PositionId next = kNoPosition;
    for (const Edge& e : layout.out_edges(at)) {
      if (e.kind == EdgeKind::kLane) next = e.to;
    }
    ASSERT_NE(next, kNoPosition);
    ASSERT_FALSE(layout.is_centre(next));
    at = next;
  }
  World world(ctx, c, start);
  world.begin_round(assign_round(layout, ctx.directed(), c, {0}, start));
  world.step_lane_priority();
  EXPECT_EQ(world.positions()[0], first);
  EXPECT_EQ(world.positions()[2], start[3]);
  EXPECT_EQ(world.positions()[3], start[4]);
  EXPECT_EQ(world.positions()[4], at);
  EXPECT_EQ(world.violations(), 0);
}

}  // namespace
}  // namespace iontrap
