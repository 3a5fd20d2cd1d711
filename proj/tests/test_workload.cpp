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

#include <algorithm>
#include <map>
#include <set>

#include "iontrap/device.hpp"
#include "iontrap/error.hpp"
#include "iontrap/workload.hpp"

namespace iontrap {
namespace {

TEST(RandomMatching, IsPerfectSortedAndDeterministic) {
  for (int n : {2, 8, 18, 50, 72}) {
    const DepthOneCircuit c = random_matching(n, 42);
    ASSERT_EQ(static_cast<int>(c.pairs.size()), n / 2);
    std::set<int> seen;
    for (std::size_t k = 0; k < c.pairs.size(); ++k) {
      EXPECT_LT(c.pairs[k].a, c.pairs[k].b);
      if (k > 0) {
        EXPECT_LT(c.pairs[k - 1].a, c.pairs[k].a);
      }
      seen.insert(c.pairs[k].a);
      seen.insert(c.pairs[k].b);
    }
    EXPECT_EQ(static_cast<int>(seen.size()), n);
    EXPECT_EQ(*seen.begin(), 0);
    EXPECT_EQ(*seen.rbegin(), n - 1);
    EXPECT_EQ(c.pairs, random_matching(n, 42).pairs);
  }
  EXPECT_NE(random_matching(50, 1).pairs, random_matching(50, 2).pairs);
}

TEST(RandomMatching, RejectsOddOrEmpty) {
  EXPECT_THROW(random_matching(7, 1), Error);
  EXPECT_THROW(random_matching(0, 1), Error);
}

// All 105 perfect matchings of 8 qubits should be equally likely. With
// 105 * 200 draws the chi-square statistic has 104 degrees of freedom; its
// 0.999 quantile is about 153.
TEST(RandomMatching, UniformOverAllMatchingsOfEight) {
  constexpr int kPerCell = 200;
  constexpr int kCells = 105;
  std::map<std::vector<IonPair>, int> counts;
  for (std::uint64_t s = 0; s < static_cast<std::uint64_t>(kCells * kPerCell); ++s) {
    ++counts[random_matching(8, 1000 + s).pairs];
  }
  ASSERT_EQ(static_cast<int>(counts.size()), kCells);
  double chi2 = 0.0;
  for (const auto& [pairs, count] : counts) {
    const double d = count - kPerCell;
    chi2 += d * d / kPerCell;
  }
  EXPECT_LT(chi2, 153.0);
}

TEST(Circuit, JsonRoundTripAndValidation) {
  const DepthOneCircuit c = random_matching(18, 9);
  const DepthOneCircuit back = circuit_from_json(to_json(c));
  EXPECT_EQ(back.qubit_count, 18);
  EXPECT_EQ(back.pairs, c.pairs);
  EXPECT_THROW(circuit_from_json(R"({"n": 4, "pairs": [[0, 1], [1, 2]]})"), Error);
  EXPECT_THROW(circuit_from_json(R"({"n": 4, "pairs": [[0, 5]]})"), Error);
  EXPECT_THROW(circuit_from_json("not json"), Error);
}

TEST(InitialPositions, DensityIonsNextToEachJunction) {
  const DeviceLayout l(4, 7);
  for (int density = 1; density <= max_density(l); ++density) {
    const auto pos = initial_positions(l, density);
    ASSERT_EQ(static_cast<int>(pos.size()), density * 16);
    std::set<PositionId> unique(pos.begin(), pos.end());
    EXPECT_EQ(unique.size(), pos.size());
    for (std::size_t k = 0; k < pos.size(); ++k) {
      const Coord junction = l.junction_centres()[k / static_cast<std::size_t>(density)];
      EXPECT_EQ(l.kind(pos[k]), PositionKind::kLane);
      EXPECT_LE(manhattan(l.coord(pos[k]), junction), l.arm_length());
    }
  }
  EXPECT_THROW(initial_positions(l, max_density(l) + 1), Error);
  EXPECT_THROW(initial_positions(l, 0), Error);
}

TEST(Rounds, CeilingOfPairsOverZones) {
  EXPECT_EQ(round_count(8, 16), 1);
  EXPECT_EQ(round_count(16, 16), 1);
  EXPECT_EQ(round_count(32, 16), 2);
  EXPECT_EQ(round_count(17, 16), 2);
  EXPECT_THROW(round_count(4, 0), Error);
}

// Independent greedy: scan pairs in order, take the unclaimed zone with the
// smallest summed BFS distance, lowest id on ties.
TEST(AssignRound, MatchesBruteForceGreedy) {
  for (int m : {2, 3, 4, 5}) {
    const DeviceLayout l(m, 7);
    const ZoneDistances dist(l, Metric::kDirected);
    const auto pos = initial_positions(l, 2);
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
      const DepthOneCircuit c = random_matching(2 * m * m, seed);
      std::vector<int> indices(c.pairs.size());
      for (std::size_t k = 0; k < indices.size(); ++k) indices[k] = static_cast<int>(k);
      const RoundAssignment got = assign_round(l, dist, c, indices, pos);

      std::vector<bool> claimed(static_cast<std::size_t>(l.zone_count()), false);
      for (std::size_t k = 0; k < c.pairs.size(); ++k) {
        int best = -1;
        int best_cost = 0;
        for (int z = 0; z < l.zone_count(); ++z) {
          if (claimed[static_cast<std::size_t>(z)]) continue;
          const PositionId target = l.zone_position(z);
          const int cost = shortest_distance(l, pos[static_cast<std::size_t>(c.pairs[k].a)], target, Metric::kDirected) +
                           shortest_distance(l, pos[static_cast<std::size_t>(c.pairs[k].b)], target, Metric::kDirected);
          if (best < 0 || cost < best_cost) {
            best = z;
            best_cost = cost;
          }
        }
        claimed[static_cast<std::size_t>(best)] = true;
        ASSERT_EQ(got.zones[k], best) << "m=" << m << " seed=" << seed << " pair " << k;
        EXPECT_EQ(got.zone_of_ion[static_cast<std::size_t>(c.pairs[k].a)], best);
        EXPECT_EQ(got.zone_of_ion[static_cast<std::size_t>(c.pairs[k].b)], best);
      }
    }
  }
}

TEST(AssignPairs, DensityFourNeedsTwoRounds) {
  const DeviceLayout l(4, 7);
  const ZoneDistances dist(l, Metric::kDirected);
  const auto pos = initial_positions(l, 4);
  const DepthOneCircuit c = random_matching(64, 3);
  const Assignment a = assign_pairs(l, dist, c, pos);
  ASSERT_EQ(a.rounds.size(), 2u);
  std::set<int> done;
  for (const RoundAssignment& r : a.rounds) {
    EXPECT_EQ(r.pair_indices.size(), 16u);
    std::set<int> zones(r.zones.begin(), r.zones.end());
    EXPECT_EQ(zones.size(), r.zones.size());
    done.insert(r.pair_indices.begin(), r.pair_indices.end());
  }
  EXPECT_EQ(done.size(), 32u);
}

TEST(Rng, ReproducibleAndBounded) {
  Rng a(5);
  Rng b(5);
  for (int i = 0; i < 1000; ++i) {
    const auto x = a.below(7);
    EXPECT_EQ(x, b.below(7));
    EXPECT_LT(x, 7u);
    const double u = a.uniform();
    EXPECT_EQ(u, b.uniform());
    EXPECT_GE(u, 0.0);
    EXPECT_LT(u, 1.0);
  }
}

}  // namespace
}  // namespace iontrap
