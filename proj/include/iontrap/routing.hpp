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

#pragma once

#include <array>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "iontrap/device.hpp"
#include "iontrap/workload.hpp"

namespace iontrap {

enum class Engine : std::uint8_t { kLanePriority, kSwapBased, kLowerBound };

const char* to_string(Engine e);
// Accepts "lane", "swap", "lower-bound" (and the enum spellings).
Engine engine_from_string(const std::string& name);

// Everything about a layout the engines need, computed once and shared
// read-only between concurrent runs.
class RoutingContext {
 public:
  explicit RoutingContext(DeviceLayout layout);

  const DeviceLayout& layout() const { return layout_; }
  const ZoneDistances& directed() const { return directed_; }
  const ZoneDistances& undirected() const { return undirected_; }
  long default_step_cap() const { return 50L * layout_.resolution() * layout_.device_size(); }

 private:
  DeviceLayout layout_;
  ZoneDistances directed_;
  ZoneDistances undirected_;
};

struct Ion {
  int id = 0;
  PositionId position = kNoPosition;
  // Zone position when the ion has a gate this round, else its own position.
  PositionId destination = kNoPosition;
  bool has_destination = false;
  int zone = -1;
  int paired_with = -1;
  bool is_combined = false;
  bool waiting_interior = false;
  int junction_passes = 0;
  int swaps = 0;

  // Engine bookkeeping.
  PositionId entered_centre_from = kNoPosition;
  int blocked_steps = 0;
  bool pushing = false;
  bool stalled = false;
  long available_at = 0;
};

struct RoutingConfig {
  int density = 2;
  // Swap-based engine: extra time per swap, in junction-to-junction units.
  double swap_penalty = 0.5;
  // 0 selects RoutingContext::default_step_cap().
  long step_cap = 0;
  // Optional JSON-lines trace: {"step","ion","x","y","action"} per move.
  std::ostream* trace = nullptr;
};

struct RoutingRun {
  Engine engine = Engine::kLanePriority;
  long steps_raw = 0;
  double tau = 0.0;
  double lower_bound_tau = 0.0;
  std::vector<int> junction_passes;
  std::vector<int> swaps;
  long swap_events = 0;
  bool converged = false;
  int round_count = 0;
  // Kind of the zone each ion was sent to; -1 for ions without a gate.
  std::vector<int> zone_kind;
  // Safety audit: moves onto occupied positions, multi-position jumps, or
  // lost ions. Always 0 unless an engine is broken.
  long violations = 0;
};

// Discrete-time state of all ions on one device.
class World {
 public:
  World(const RoutingContext& ctx, const DepthOneCircuit& circuit,
        std::vector<PositionId> positions);

  // Install one round: destinations, partners, and which zones are in use.
  void begin_round(const RoundAssignment& round);
  bool round_complete() const;

  // One time step, ions evaluated in ascending id.
  void step_lane_priority();
  void step_swap_based(double swap_penalty);

  long time() const { return now_; }
  const std::vector<Ion>& ions() const { return ions_; }
  std::vector<PositionId> positions() const;
  int occupancy(PositionId p) const { return occ_[static_cast<std::size_t>(p)].count; }
  long violations() const { return violations_; }
  long swap_events() const { return swap_events_; }
  // Undirected lower bound of the current round, in raw steps.
  int round_lower_bound() const;

  void set_trace(std::ostream* trace) { trace_ = trace; }

 private:
  struct Slot {
    std::array<int, 2> ions{-1, -1};
    int count = 0;
  };

  const DeviceLayout& layout() const { return ctx_.layout(); }
  bool active(const Ion& ion) const { return ion.has_destination && !ion.is_combined; }
  bool free(PositionId p) const { return occupancy(p) == 0; }
  int other_occupant(PositionId p, int ion) const;
  bool only_holds(PositionId p, int ion) const;

  void move(int ion, PositionId to, const char* action);
  void place(int ion, PositionId p);
  void remove(int ion, PositionId p);
  void emit(int ion, const char* action) const;

  bool try_combine(int id);
  void combine_into(int mover, PositionId zone_pos);
  bool slot_entry_allowed(const Ion& ion, PositionId to) const;
  bool arm_enterable(const Ion& ion, PositionId to) const;
  bool evict_if_needed(int id);

  // Lane-priority engine.
  std::optional<Edge> preferred_lane_move(const Ion& ion) const;
  bool needed(PositionId p, int by_not) const;
  void lane_active(int id);
  void lane_waiting(int id);
  void lane_idle(int id);
  bool shift_idle_queue(PositionId p);

  // Swap-based engine.
  std::vector<Edge> shortest_moves(const Ion& ion) const;
  bool wanted_by_shortest(PositionId p, int self) const;
  void swap_active(int id, long busy_steps);
  void do_swap(int a, int b, long busy_steps);
  void swap_out_of_pocket(int id, long busy_steps);

  const RoutingContext& ctx_;
  const DepthOneCircuit& circuit_;
  std::vector<Ion> ions_;
  std::vector<Slot> occ_;
  std::vector<char> zone_claimed_;
  std::vector<int> round_pairs_;
  std::vector<long> acted_;
  // Step at which each ion last changed position; an ion moves at most once
  // per step.
  std::vector<long> moved_;
  long now_ = 0;
  long violations_ = 0;
  long swap_events_ = 0;
  std::ostream* trace_ = nullptr;
};

// Free-function forms of one step.
void step_lane_priority(World& world);
void step_swap_based(World& world, double swap_penalty);

// Full runs over all rounds of `circuit` on `density` ions per junction.
// Non-convergence within the step cap is reported, not thrown.
RoutingRun run_lane_priority(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                             const RoutingConfig& config);
RoutingRun run_swap_based(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                          const RoutingConfig& config);
// Lower-bound "engine": assignment as planned by assign_pairs, no motion.
RoutingRun run_lower_bound(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                           const RoutingConfig& config);
RoutingRun run_engine(Engine engine, const RoutingContext& ctx, const DepthOneCircuit& circuit,
                      const RoutingConfig& config);

// Largest undirected distance from any ion to its zone, summed over rounds
// and divided by the resolution. Rounds after the first start from the
// positions the earlier rounds leave (pairs at their zones).
double lower_bound(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                   const Assignment& assignment, const std::vector<PositionId>& positions);

}  // namespace iontrap
