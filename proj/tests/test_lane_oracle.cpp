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

// A second, deliberately naive implementation of lane-priority routing on a
// 2x2 device, where every zone sits at the tip of a perimeter arm. It works on
// raw coordinates and never touches the layout's graph or distance tables.
// The library must reproduce its trajectory move for move.

#include <gtest/gtest.h>

#include <deque>
#include <map>
#include <optional>
#include <vector>

#include "iontrap/device.hpp"
#include "iontrap/routing.hpp"
#include "iontrap/workload.hpp"

namespace iontrap {
namespace {

class NaiveLaneRouter {
 public:
  NaiveLaneRouter(int r, const std::vector<GateZone>& zones, const DepthOneCircuit& circuit)
      : r_(r), zones_(zones), circuit_(circuit) {
    seat_ions();
    assign();
  }

  std::vector<Coord> positions() const { return pos_; }
  const std::vector<int>& passes() const { return passes_; }
  const std::vector<int>& zone_of_ion() const { return zone_; }
  long time() const { return now_; }

  bool done() const {
    for (bool c : combined_) {
      if (!c) return false;
    }
    return true;
  }

  void step() {
    moved_.assign(pos_.size(), false);
    std::vector<bool> acted(pos_.size(), false);
    for (std::size_t i = 0; i < pos_.size(); ++i) {
      if (acted[i] || combined_[i]) continue;
      acted[i] = true;
      if (try_combine(static_cast<int>(i))) {
        acted[static_cast<std::size_t>(partner_[i])] = true;
        continue;
      }
      advance(static_cast<int>(i));
    }
    ++now_;
  }

 private:
  bool is_centre(Coord c) const { return (c.x == 0 || c.x == r_) && (c.y == 0 || c.y == r_); }
  bool on_grid(Coord c) const {
    const bool on_row = (c.y == 0 || c.y == r_) && c.x >= 0 && c.x <= r_;
    const bool on_col = (c.x == 0 || c.x == r_) && c.y >= 0 && c.y <= r_;
    return on_row || on_col;
  }
  // Row 0 runs right, row 1 (the last) left; column 0 runs up, column 1 (the
  // last) down. Together they form a clockwise loop.
  Coord lane_step_row(Coord c) const { return {c.x + (c.y == 0 ? 1 : -1), c.y}; }
  Coord lane_step_col(Coord c) const { return {c.x, c.y + (c.x == 0 ? -1 : 1)}; }

  int arm_index(Coord c, int* zone) const {
    for (const GateZone& z : zones_) {
      for (std::size_t k = 0; k < z.arm.size(); ++k) {
        if (z.arm[k] == c) {
          *zone = z.id;
          return static_cast<int>(k) + 1;
        }
      }
    }
    return 0;
  }

  // Successors usable by an ion heading for `zone`.
  std::vector<Coord> exits(Coord c, int zone) const {
    std::vector<Coord> out;
    int owner = -1;
    const int k = arm_index(c, &owner);
    if (k > 0) {
      const GateZone& z = zones_[static_cast<std::size_t>(owner)];
      out.push_back(k == 1 ? z.junction : z.arm[static_cast<std::size_t>(k - 2)]);
      if (owner == zone && k < static_cast<int>(z.arm.size())) out.push_back(z.arm[static_cast<std::size_t>(k)]);
      return out;
    }
    if (is_centre(c)) {
      for (Coord n : {lane_step_row(c), lane_step_col(c)}) {
        if (on_grid(n)) out.push_back(n);
      }
      const GateZone& z = zones_[static_cast<std::size_t>(zone)];
      if (z.junction == c) out.push_back(z.arm.front());
      return out;
    }
    out.push_back(c.y == 0 || c.y == r_ ? lane_step_row(c) : lane_step_col(c));
    return out;
  }

  int distance(Coord from, int zone) const {
    const Coord target = zones_[static_cast<std::size_t>(zone)].coord;
    std::map<Coord, int> seen{{from, 0}};
    std::deque<Coord> q{from};
    while (!q.empty()) {
      const Coord c = q.front();
      q.pop_front();
      if (c == target) return seen[c];
      for (Coord n : exits(c, zone)) {
        if (seen.emplace(n, seen[c] + 1).second) q.push_back(n);
      }
    }
    return -1;
  }

  void seat_ions() {
    const int n = circuit_.qubit_count;
    const int density = n / 4;
    for (Coord j : {Coord{0, 0}, Coord{r_, 0}, Coord{0, r_}, Coord{r_, r_}}) {
      int placed = 0;
      for (int d = 1; placed < density; ++d) {
        for (Coord off : {Coord{d, 0}, Coord{0, d}, Coord{-d, 0}, Coord{0, -d}}) {
          const Coord c{j.x + off.x, j.y + off.y};
          if (placed < density && on_grid(c) && !is_centre(c)) {
            pos_.push_back(c);
            ++placed;
          }
        }
      }
    }
    for (Coord c : pos_) ++occ_[c];
    passes_.assign(pos_.size(), 0);
    combined_.assign(pos_.size(), false);
    blocked_.assign(pos_.size(), 0);
    entered_from_.assign(pos_.size(), std::nullopt);
  }

  void assign() {
    zone_.assign(pos_.size(), -1);
    partner_.assign(pos_.size(), -1);
    std::vector<bool> claimed(zones_.size(), false);
    for (const IonPair& p : circuit_.pairs) {
      int best = -1;
      int best_cost = 0;
      for (std::size_t z = 0; z < zones_.size(); ++z) {
        if (claimed[z]) continue;
        const int cost = distance(pos_[static_cast<std::size_t>(p.a)], static_cast<int>(z)) +
                         distance(pos_[static_cast<std::size_t>(p.b)], static_cast<int>(z));
        if (best < 0 || cost < best_cost) {
          best = static_cast<int>(z);
          best_cost = cost;
        }
      }
      claimed[static_cast<std::size_t>(best)] = true;
      zone_[static_cast<std::size_t>(p.a)] = zone_[static_cast<std::size_t>(p.b)] = best;
      partner_[static_cast<std::size_t>(p.a)] = p.b;
      partner_[static_cast<std::size_t>(p.b)] = p.a;
    }
  }

  void move(int i, Coord to) {
    const auto k = static_cast<std::size_t>(i);
    const Coord from = pos_[k];
    if (is_centre(from) && !(entered_from_[k] && *entered_from_[k] == to)) ++passes_[k];
    if (is_centre(to)) entered_from_[k] = from;
    --occ_[from];
    ++occ_[to];
    pos_[k] = to;
    blocked_[k] = 0;
    moved_[k] = true;
  }

  // The partner may only be pulled in if it has not moved this step.
  bool try_combine(int i) {
    const auto a = static_cast<std::size_t>(i);
    const auto b = static_cast<std::size_t>(partner_[a]);
    const GateZone& z = zones_[static_cast<std::size_t>(zone_[a])];
    const Coord before_tip = z.arm.size() >= 2 ? z.arm[z.arm.size() - 2] : z.junction;
    std::size_t mover;
    if (pos_[a] == z.coord && occ_[z.coord] == 1 && pos_[b] == before_tip && !moved_[b]) {
      mover = b;
    } else if (pos_[b] == z.coord && occ_[z.coord] == 1 && pos_[a] == before_tip) {
      mover = a;
    } else {
      return false;
    }
    move(static_cast<int>(mover), z.coord);
    combined_[a] = combined_[b] = true;
    return true;
  }

  bool enterable(int i, Coord to) const {
    const auto k = static_cast<std::size_t>(i);
    if (occ_.count(to) && occ_.at(to) > 0) return false;
    int owner = -1;
    if (!is_centre(pos_[k]) || arm_index(to, &owner) == 0) return true;
    for (std::size_t j = 0; j < pos_.size(); ++j) {
      if (static_cast<int>(j) == partner_[k] || static_cast<int>(j) == i) continue;
      int other_owner = -1;
      if (arm_index(pos_[j], &other_owner) > 0 && other_owner == owner) return false;
    }
    return true;
  }

  void advance(int i) {
    const auto k = static_cast<std::size_t>(i);
    const int zone = zone_[k];
    if (pos_[k] == zones_[static_cast<std::size_t>(zone)].coord) return;
    std::optional<Coord> best;
    int best_d = 0;
    for (Coord n : exits(pos_[k], zone)) {
      const int d = distance(n, zone);
      if (d >= 0 && (!best || d < best_d)) {
        best = n;
        best_d = d;
      }
    }
    if (!best) return;
    if (enterable(i, *best)) {
      move(i, *best);
      return;
    }
    if (!is_centre(pos_[k])) return;
    if (++blocked_[k] < 2) return;
    std::optional<Coord> alt;
    int alt_d = 0;
    for (Coord n : exits(pos_[k], zone)) {
      const int d = distance(n, zone);
      if (d < 0 || !enterable(i, n)) continue;
      if (!alt || d < alt_d) {
        alt = n;
        alt_d = d;
      }
    }
    if (alt) move(i, *alt);
  }

  int r_;
  std::vector<GateZone> zones_;
  const DepthOneCircuit& circuit_;
  std::vector<Coord> pos_;
  std::map<Coord, int> occ_;
  std::vector<int> zone_;
  std::vector<int> partner_;
  std::vector<int> passes_;
  std::vector<bool> combined_;
  std::vector<bool> moved_;
  std::vector<int> blocked_;
  std::vector<std::optional<Coord>> entered_from_;
  long now_ = 0;
};

class LaneOracle : public ::testing::TestWithParam<std::pair<int, int>> {};

TEST_P(LaneOracle, TrajectoriesMatchMoveForMove) {
  const auto [resolution, density] = GetParam();
  const RoutingContext ctx(DeviceLayout(2, resolution));
  const DeviceLayout& l = ctx.layout();
  for (std::uint64_t seed = 1; seed <= 150; ++seed) {
    const DepthOneCircuit circuit = random_matching(4 * density, seed);
    NaiveLaneRouter oracle(resolution, l.zones(), circuit);

    World world(ctx, circuit, initial_positions(l, density));
    std::vector<int> indices(circuit.pairs.size());
    for (std::size_t k = 0; k < indices.size(); ++k) indices[k] = static_cast<int>(k);
    const RoundAssignment round = assign_round(l, ctx.directed(), circuit, indices, world.positions());
    ASSERT_EQ(round.zone_of_ion, oracle.zone_of_ion()) << "seed " << seed;
    world.begin_round(round);

    const auto coords = [&](const std::vector<PositionId>& ids) {
      std::vector<Coord> out;
      for (PositionId p : ids) out.push_back(l.coord(p));
      return out;
    };
    ASSERT_EQ(coords(world.positions()), oracle.positions());
    int guard = 0;
    while (!oracle.done()) {
      ASSERT_LT(++guard, 10000) << "oracle did not finish, seed " << seed;
      oracle.step();
      world.step_lane_priority();
      ASSERT_EQ(coords(world.positions()), oracle.positions()) << "seed " << seed << " step " << oracle.time();
    }
    EXPECT_TRUE(world.round_complete());
    std::vector<int> passes;
    for (const Ion& ion : world.ions()) passes.push_back(ion.junction_passes);
    EXPECT_EQ(passes, oracle.passes());
    EXPECT_EQ(world.violations(), 0);

    RoutingConfig cfg;
    cfg.density = density;
    const RoutingRun run = run_lane_priority(ctx, circuit, cfg);
    EXPECT_EQ(run.steps_raw, oracle.time());
    EXPECT_EQ(run.junction_passes, oracle.passes());
  }
}

INSTANTIATE_TEST_SUITE_P(TwoByTwo, LaneOracle,
                         ::testing::Values(std::pair{7, 2}, std::pair{5, 2}, std::pair{9, 2}, std::pair{7, 1}),
                         [](const auto& info) {
                           return "R" + std::to_string(info.param.first) + "_density" +
                                  std::to_string(info.param.second);
                         });

}  // namespace
}  // namespace iontrap
