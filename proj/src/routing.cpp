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

#include "iontrap/routing.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>

#include "iontrap/error.hpp"

namespace iontrap {

namespace {

// Steps an ion may sit blocked on a junction centre before it takes any free
// exit instead of its preferred one.
constexpr int kCentreFallbackSteps = 2;

}  // namespace

const char* to_string(Engine e) {
  switch (e) {
    case Engine::kLanePriority: return "lane";
    case Engine::kSwapBased: return "swap";
    case Engine::kLowerBound: return "lower-bound";
  }
  return "?";
}

Engine engine_from_string(const std::string& name) {
  if (name == "lane" || name == "lane_priority" || name == "lane-priority") return Engine::kLanePriority;
  if (name == "swap" || name == "swap_based" || name == "swap-based") return Engine::kSwapBased;
  if (name == "lower-bound" || name == "lower_bound" || name == "lb") return Engine::kLowerBound;
  fail(ErrorCode::kInvalidArgument, "unknown engine '" + name + "'");
}

RoutingContext::RoutingContext(DeviceLayout layout)
    : layout_(std::move(layout)),
      directed_(layout_, Metric::kDirected),
      undirected_(layout_, Metric::kUndirected) {}

World::World(const RoutingContext& ctx, const DepthOneCircuit& circuit,
             std::vector<PositionId> positions)
    : ctx_(ctx), circuit_(circuit) {
  validate(circuit);
  if (static_cast<int>(positions.size()) != circuit.qubit_count) {
    fail(ErrorCode::kInvalidArgument, "need one starting position per qubit");
  }
  occ_.resize(static_cast<std::size_t>(layout().position_count()));
  zone_claimed_.assign(static_cast<std::size_t>(layout().zone_count()), 0);
  ions_.resize(positions.size());
  acted_.assign(positions.size(), -1);
  moved_.assign(positions.size(), -1);
  for (std::size_t i = 0; i < positions.size(); ++i) {
    Ion& ion = ions_[i];
    ion.id = static_cast<int>(i);
    if (positions[i] < 0 || positions[i] >= layout().position_count()) {
      fail(ErrorCode::kOutOfRange, "starting position out of range");
    }
    if (occupancy(positions[i]) != 0) {
      fail(ErrorCode::kInvalidArgument, "two ions share a starting position");
    }
    ion.destination = positions[i];
    place(ion.id, positions[i]);
  }
}

std::vector<PositionId> World::positions() const {
  std::vector<PositionId> out;
  out.reserve(ions_.size());
  for (const Ion& ion : ions_) out.push_back(ion.position);
  return out;
}

void World::begin_round(const RoundAssignment& round) {
  std::fill(zone_claimed_.begin(), zone_claimed_.end(), 0);
  round_pairs_ = round.pair_indices;
  for (Ion& ion : ions_) {
    ion.zone = round.zone_of_ion.at(static_cast<std::size_t>(ion.id));
    ion.has_destination = ion.zone >= 0;
    ion.destination = ion.has_destination ? layout().zone_position(ion.zone) : ion.position;
    ion.paired_with = -1;
    ion.is_combined = false;
    ion.waiting_interior = false;
    ion.blocked_steps = 0;
    ion.pushing = false;
    ion.stalled = false;
    ion.available_at = now_;
  }
  for (std::size_t k = 0; k < round.pair_indices.size(); ++k) {
    const IonPair& p = circuit_.pairs.at(static_cast<std::size_t>(round.pair_indices[k]));
    ions_[p.a].paired_with = p.b;
    ions_[p.b].paired_with = p.a;
    zone_claimed_[static_cast<std::size_t>(round.zones[k])] = 1;
  }
  for (Ion& ion : ions_) {
    ion.waiting_interior = ion.has_destination && layout().slot_zone(ion.position) == ion.zone;
  }
}

bool World::round_complete() const {
  for (int pi : round_pairs_) {
    const IonPair& p = circuit_.pairs[static_cast<std::size_t>(pi)];
    if (!ions_[p.a].is_combined || !ions_[p.b].is_combined) return false;
  }
  return true;
}

int World::round_lower_bound() const {
  int worst = 0;
  for (const Ion& ion : ions_) {
    if (!ion.has_destination) continue;
    worst = std::max(worst, ctx_.undirected()(ion.zone, ion.position));
  }
  return worst;
}

int World::other_occupant(PositionId p, int ion) const {
  const Slot& s = occ_[static_cast<std::size_t>(p)];
  for (int k = 0; k < s.count; ++k) {
    if (s.ions[k] != ion) return s.ions[k];
  }
  return -1;
}

bool World::only_holds(PositionId p, int ion) const {
  const Slot& s = occ_[static_cast<std::size_t>(p)];
  return s.count == 1 && s.ions[0] == ion;
}

void World::place(int ion, PositionId p) {
  Slot& s = occ_[static_cast<std::size_t>(p)];
  if (s.count >= 2) {
    ++violations_;
    return;
  }
  s.ions[s.count++] = ion;
  ions_[ion].position = p;
}

void World::remove(int ion, PositionId p) {
  Slot& s = occ_[static_cast<std::size_t>(p)];
  for (int k = 0; k < s.count; ++k) {
    if (s.ions[k] == ion) {
      s.ions[k] = s.ions[s.count - 1];
      s.ions[s.count - 1] = -1;
      --s.count;
      return;
    }
  }
  ++violations_;
}

void World::emit(int ion, const char* action) const {
  if (trace_ == nullptr) return;
  const Coord c = layout().coord(ions_[ion].position);
  *trace_ << "{\"step\":" << now_ << ",\"ion\":" << ion << ",\"x\":" << c.x << ",\"y\":" << c.y
          << ",\"action\":\"" << action << "\"}\n";
}

void World::move(int id, PositionId to, const char* action) {
  Ion& ion = ions_[id];
  const PositionId from = ion.position;
  bool adjacent = false;
  for (const Edge& e : layout().neighbours(from)) adjacent = adjacent || e.to == to;
  adjacent = adjacent || (layout().slot_zone(from) >= 0 && layout().other_slot(from) == to);
  if (!adjacent) ++violations_;
  const int owner = layout().zone_owning(to);
  const int capacity = (owner >= 0 && layout().zone_position(owner) == to) ? 2 : 1;
  if (occupancy(to) >= capacity) ++violations_;

  if (moved_[static_cast<std::size_t>(id)] == now_) ++violations_;
  moved_[static_cast<std::size_t>(id)] = now_;
  remove(id, from);
  place(id, to);
  if (layout().is_centre(from) && ion.entered_centre_from != to) ++ion.junction_passes;
  if (layout().is_centre(to)) ion.entered_centre_from = from;
  ion.waiting_interior = active(ion) && layout().slot_zone(to) == ion.zone;
  ion.blocked_steps = 0;
  ion.pushing = false;
  ion.stalled = false;
  emit(id, action);
}

void World::combine_into(int mover, PositionId zone_pos) {
  move(mover, zone_pos, "combine");
}

bool World::try_combine(int id) {
  Ion& a = ions_[id];
  if (!active(a) || a.paired_with < 0) return false;
  Ion& b = ions_[a.paired_with];
  if (b.available_at > now_) return false;
  const PositionId zp = a.destination;
  const GateZone& zone = layout().zone(a.zone);
  auto next_to_zone = [&](PositionId p) {
    for (const Edge& e : layout().out_edges(p)) {
      if (e.to == zp && (e.kind == EdgeKind::kArmOut || e.kind == EdgeKind::kPocketIn)) return true;
    }
    return false;
  };

  // Each ion moves at most once per step, the combine included.
  const bool b_can_move = moved_[static_cast<std::size_t>(b.id)] != now_;

  if (zone.kind == ZoneKind::kExterior) {
    if (a.position == zp && only_holds(zp, a.id) && next_to_zone(b.position) && b_can_move) {
      combine_into(b.id, zp);
    } else if (b.position == zp && only_holds(zp, b.id) && next_to_zone(a.position)) {
      combine_into(a.id, zp);
    } else {
      return false;
    }
  } else {
    const bool a_slot = layout().slot_zone(a.position) == a.zone;
    const bool b_slot = layout().slot_zone(b.position) == b.zone;
    if (a.position == zp && b.position == zp) {
      // Both partners already reached the pocket by other routes.
    } else if (a_slot && b_slot && free(zp) && b_can_move) {
      combine_into(a.id, zp);
      combine_into(b.id, zp);
    } else if (b.position == zp && only_holds(zp, b.id) && a_slot) {
      combine_into(a.id, zp);
    } else if (a.position == zp && only_holds(zp, a.id) && b_slot && b_can_move) {
      combine_into(b.id, zp);
    } else {
      return false;
    }
  }
  for (Ion* ion : {&a, &b}) {
    ion->is_combined = true;
    ion->waiting_interior = false;
    acted_[static_cast<std::size_t>(ion->id)] = now_;
  }
  return true;
}

// A pair cannot combine while a stranger still sits in the pocket, and that
// stranger can only leave through a free slot: the second partner holds back.
bool World::slot_entry_allowed(const Ion& ion, PositionId to) const {
  if (layout().slot_zone(to) != ion.zone || ion.zone < 0) return true;
  const PositionId other = layout().other_slot(to);
  const PositionId pocket = layout().zone_position(ion.zone);
  const bool partner_waiting = ion.paired_with >= 0 && occupancy(other) == 1 &&
                               occ_[static_cast<std::size_t>(other)].ions[0] == ion.paired_with;
  if (!partner_waiting) return true;
  const Slot& s = occ_[static_cast<std::size_t>(pocket)];
  for (int k = 0; k < s.count; ++k) {
    if (s.ions[k] != ion.paired_with) return false;
  }
  return true;
}

// Entering an arm from its centre is only allowed once nobody but the partner
// is inside; otherwise the stub could jam head-on.
bool World::arm_enterable(const Ion& ion, PositionId to) const {
  if (layout().kind(to) != PositionKind::kArm || !layout().is_centre(ion.position)) return true;
  const GateZone& zone = layout().zone(layout().zone_owning(to));
  for (const Coord& c : zone.arm) {
    const Slot& s = occ_[static_cast<std::size_t>(layout().id(c))];
    for (int k = 0; k < s.count; ++k) {
      if (s.ions[k] != ion.paired_with) return false;
    }
  }
  return true;
}

// Ions without a gate this round that sit in an arm or pocket some pair needs
// move back out onto the lanes.
bool World::evict_if_needed(int id) {
  Ion& ion = ions_[id];
  const int z = layout().zone_owning(ion.position);
  if (z < 0 || !zone_claimed_[static_cast<std::size_t>(z)] || ion.zone == z) return false;
  for (const Edge& e : layout().out_edges(ion.position)) {
    if ((e.kind == EdgeKind::kArmIn || e.kind == EdgeKind::kPocketOut) && free(e.to)) {
      move(id, e.to, "evict");
      return true;
    }
  }
  ion.stalled = true;
  return true;
}

// --- lane-priority engine --------------------------------------------------

std::optional<Edge> World::preferred_lane_move(const Ion& ion) const {
  if (!active(ion) || ion.waiting_interior || ion.position == ion.destination) return std::nullopt;
  std::optional<Edge> best;
  int best_dist = std::numeric_limits<int>::max();
  for (const Edge& e : layout().out_edges(ion.position)) {
    if (e.kind == EdgeKind::kPocketIn) continue;
    if (!layout().edge_usable(ion.position, e, ion.destination)) continue;
    const int d = ctx_.directed()(ion.zone, e.to);
    if (d == kUnreachable) continue;
    if (d < best_dist) {
      best_dist = d;
      best = e;
    }
  }
  return best;
}

bool World::needed(PositionId p, int self) const {
  // A waiting ion that must clear its slot asks for the other slot.
  if (layout().slot_zone(p) >= 0) {
    const PositionId across = layout().other_slot(p);
    if (across != kNoPosition) {
      const Slot& s = occ_[static_cast<std::size_t>(across)];
      for (int k = 0; k < s.count; ++k) {
        const Ion& other = ions_[s.ions[k]];
        if (other.id != self && other.waiting_interior && other.pushing) return true;
      }
    }
  }
  for (const Edge& e : layout().in_edges(p)) {
    const Slot& s = occ_[static_cast<std::size_t>(e.to)];
    for (int k = 0; k < s.count; ++k) {
      const Ion& other = ions_[s.ions[k]];
      if (other.id == self || other.is_combined) continue;
      if (!other.has_destination) {
        if (other.pushing) return true;
        continue;
      }
      const auto m = preferred_lane_move(other);
      if (m && m->to == p) return true;
      // A centre blocked past the fallback wants any lane exit cleared, so
      // an evicted ion can get out of the arm it holds.
      if (layout().is_centre(other.position) && other.blocked_steps >= kCentreFallbackSteps &&
          layout().kind(p) == PositionKind::kLane) {
        return true;
      }
    }
  }
  return false;
}

void World::lane_active(int id) {
  if (try_combine(id)) return;
  Ion& ion = ions_[id];
  if (ion.waiting_interior) {
    lane_waiting(id);
    return;
  }
  const auto best = preferred_lane_move(ion);
  if (!best) return;
  auto can_take = [&](const Edge& e) {
    return free(e.to) && slot_entry_allowed(ion, e.to) && arm_enterable(ion, e.to);
  };
  if (!free(best->to) && slot_entry_allowed(ion, best->to) && arm_enterable(ion, best->to)) {
    shift_idle_queue(best->to);
  }
  if (can_take(*best)) {
    move(id, best->to, "move");
    return;
  }
  if (!layout().is_centre(ion.position)) return;
  if (++ion.blocked_steps < kCentreFallbackSteps) return;
  // Long-blocked centre: leave by whichever usable exit is free, nearest first.
  std::optional<Edge> alt;
  int alt_dist = std::numeric_limits<int>::max();
  for (const Edge& e : layout().out_edges(ion.position)) {
    if (e.kind == EdgeKind::kPocketIn || !layout().edge_usable(ion.position, e, ion.destination)) continue;
    const int d = ctx_.directed()(ion.zone, e.to);
    if (d == kUnreachable || !can_take(e)) continue;
    if (d < alt_dist) {
      alt_dist = d;
      alt = e;
    }
  }
  if (alt) move(id, alt->to, "detour");
}

// Waiting at a slot of its own interior zone: step across to the other slot
// whenever a travelling ion needs this one.
void World::lane_waiting(int id) {
  Ion& ion = ions_[id];
  const PositionId here = ion.position;
  const PositionId other = layout().other_slot(here);
  ion.pushing = false;
  if (other == kNoPosition || !needed(here, id)) return;
  if (free(other)) {
    move(id, other, "hop");
  } else {
    ion.pushing = true;
  }
}

void World::lane_idle(int id) {
  if (evict_if_needed(id)) return;
  Ion& ion = ions_[id];
  const PositionId here = ion.position;
  const bool must_leave = layout().is_centre(here);
  if (!must_leave && (layout().kind(here) != PositionKind::kLane || !needed(here, id))) {
    ion.pushing = false;
    return;
  }
  for (const Edge& e : layout().out_edges(here)) {
    if (e.kind == EdgeKind::kLane && free(e.to)) {
      move(id, e.to, "yield");
      return;
    }
  }
  for (const Edge& e : layout().out_edges(here)) {
    if (e.kind == EdgeKind::kLane && shift_idle_queue(e.to)) {
      move(id, e.to, "yield");
      return;
    }
  }
  ion.pushing = true;
}

// A queue of idle ions standing on the lanes ahead of `p` advances as one
// train when its far end has room, which frees `p` in a single step.
bool World::shift_idle_queue(PositionId p) {
  std::vector<int> train;
  std::vector<PositionId> targets;
  PositionId at = p;
  while (!free(at)) {
    if (occupancy(at) != 1) return false;
    const Ion& ion = ions_[occ_[static_cast<std::size_t>(at)].ions[0]];
    if (ion.has_destination || moved_[static_cast<std::size_t>(ion.id)] == now_) return false;
    if (std::find(train.begin(), train.end(), ion.id) != train.end()) return false;
    PositionId next = kNoPosition;
    for (const Edge& e : layout().out_edges(at)) {
      if (e.kind != EdgeKind::kLane) continue;
      if (free(e.to)) {
        next = e.to;
        break;
      }
      if (next == kNoPosition) next = e.to;
    }
    if (next == kNoPosition) return false;
    train.push_back(ion.id);
    targets.push_back(next);
    at = next;
  }
  for (std::size_t k = train.size(); k-- > 0;) {
    move(train[k], targets[k], "yield");
    acted_[static_cast<std::size_t>(train[k])] = now_;
  }
  return !train.empty();
}

void World::step_lane_priority() {
  for (Ion& ion : ions_) {
    const auto k = static_cast<std::size_t>(ion.id);
    if (acted_[k] == now_ || ion.is_combined) continue;
    acted_[k] = now_;
    if (ion.has_destination) {
      lane_active(ion.id);
    } else {
      lane_idle(ion.id);
    }
  }
  ++now_;
}

// --- swap-based engine -----------------------------------------------------

std::vector<Edge> World::shortest_moves(const Ion& ion) const {
  std::vector<Edge> out;
  if (!active(ion) || ion.waiting_interior || ion.position == ion.destination) return out;
  const int here = ctx_.undirected()(ion.zone, ion.position);
  for (const Edge& e : layout().neighbours(ion.position)) {
    if (e.kind == EdgeKind::kPocketIn) continue;
    if (!layout().edge_usable(ion.position, e, ion.destination)) continue;
    if (ctx_.undirected()(ion.zone, e.to) == here - 1) out.push_back(e);
  }
  return out;
}

bool World::wanted_by_shortest(PositionId p, int self) const {
  for (const Edge& e : layout().neighbours(p)) {
    const Slot& s = occ_[static_cast<std::size_t>(e.to)];
    for (int k = 0; k < s.count; ++k) {
      const Ion& other = ions_[s.ions[k]];
      if (other.id == self || other.is_combined || other.available_at > now_) continue;
      const auto moves = shortest_moves(other);
      if (std::any_of(moves.begin(), moves.end(), [&](const Edge& m) { return m.to == p; })) {
        return true;
      }
    }
  }
  return false;
}

void World::do_swap(int a, int b, long busy_steps) {
  Ion& x = ions_[a];
  Ion& y = ions_[b];
  const PositionId pa = x.position;
  const PositionId pb = y.position;
  remove(a, pa);
  remove(b, pb);
  place(a, pb);
  place(b, pa);
  for (Ion* ion : {&x, &y}) {
    const PositionId from = ion == &x ? pa : pb;
    const PositionId to = ion == &x ? pb : pa;
    if (layout().is_centre(from) && ion->entered_centre_from != to) ++ion->junction_passes;
    if (layout().is_centre(to)) ion->entered_centre_from = from;
    ion->waiting_interior = active(*ion) && layout().slot_zone(to) == ion->zone;
    if (moved_[static_cast<std::size_t>(ion->id)] == now_) ++violations_;
    moved_[static_cast<std::size_t>(ion->id)] = now_;
    ion->available_at = now_ + 1 + busy_steps;
    ion->stalled = false;
    ++ion->swaps;
    acted_[static_cast<std::size_t>(ion->id)] = now_;
  }
  ++swap_events_;
  emit(a, "swap");
  emit(b, "swap");
}

void World::swap_active(int id, long busy_steps) {
  if (try_combine(id)) return;
  Ion& x = ions_[id];
  if (x.waiting_interior) {
    // Same decongestion step as the lane engine. This is the only way past a
    // partner queued behind on the same lane, since partners never swap.
    // With the other slot held by an ion that never steps aside, the waiting
    // ion moves on into its own pocket and the partner combines from the slot.
    const PositionId other = layout().other_slot(x.position);
    if (other != kNoPosition && wanted_by_shortest(x.position, id)) {
      if (free(other)) {
        move(id, other, "hop");
        return;
      }
      if (free(x.destination)) {
        move(id, x.destination, "enter");
        return;
      }
    }
    x.stalled = true;
    return;
  }
  const auto moves = shortest_moves(x);
  for (const Edge& e : moves) {
    if (free(e.to) && slot_entry_allowed(x, e.to)) {
      move(id, e.to, "move");
      return;
    }
  }
  // Every shortest step is occupied: swap head-on first, else with an ion
  // that has nowhere to go this round.
  for (int pass = 0; pass < 2; ++pass) {
    for (const Edge& e : moves) {
      if (occupancy(e.to) != 1 || !slot_entry_allowed(x, e.to)) continue;
      Ion& y = ions_[occ_[static_cast<std::size_t>(e.to)].ions[0]];
      if (y.id == x.paired_with || y.is_combined || y.available_at > now_) continue;
      if (moved_[static_cast<std::size_t>(y.id)] == now_) continue;
      bool ok;
      if (pass == 0) {
        const auto theirs = shortest_moves(y);
        ok = std::any_of(theirs.begin(), theirs.end(),
                         [&](const Edge& t) { return t.to == x.position; });
      } else {
        // A travelling ion that is merely queued is not stationary; pushing it
        // backwards just sets up the same swap in reverse.
        ok = !y.has_destination || y.waiting_interior || y.position == y.destination;
      }
      if (ok) {
        do_swap(id, y.id, busy_steps);
        return;
      }
    }
  }
  x.stalled = true;
}

// An evicted ion with no free way out of a pocket trades places with an ion
// waiting at a slot for that pocket.
void World::swap_out_of_pocket(int id, long busy_steps) {
  const PositionId here = ions_[id].position;
  const int z = layout().zone_owning(here);
  for (const Edge& e : layout().out_edges(here)) {
    if (e.kind != EdgeKind::kPocketOut || occupancy(e.to) != 1) continue;
    const Ion& y = ions_[occ_[static_cast<std::size_t>(e.to)].ions[0]];
    if (!y.waiting_interior || y.zone != z || y.available_at > now_) continue;
    if (moved_[static_cast<std::size_t>(y.id)] == now_) continue;
    do_swap(id, y.id, busy_steps);
    return;
  }
  ions_[id].stalled = true;
}

void World::step_swap_based(double swap_penalty) {
  const long busy =
      static_cast<long>(std::ceil(swap_penalty * layout().resolution() - 1e-9));
  for (Ion& ion : ions_) {
    const auto k = static_cast<std::size_t>(ion.id);
    if (acted_[k] == now_ || ion.is_combined || ion.available_at > now_) continue;
    acted_[k] = now_;
    if (ion.has_destination) {
      swap_active(ion.id, std::max(0L, busy));
    } else {
      const PositionId before = ion.position;
      if (!evict_if_needed(ion.id)) {
        ion.stalled = true;
      } else if (ion.position == before) {
        swap_out_of_pocket(ion.id, std::max(0L, busy));
      }
    }
  }
  ++now_;
}

void step_lane_priority(World& world) { world.step_lane_priority(); }
void step_swap_based(World& world, double swap_penalty) { world.step_swap_based(swap_penalty); }

// --- full runs -------------------------------------------------------------

namespace {

void check_circuit(const RoutingContext& ctx, const DepthOneCircuit& circuit, int density) {
  const int m = ctx.layout().device_size();
  if (circuit.qubit_count != density * m * m) {
    fail(ErrorCode::kInvalidArgument,
         "circuit has " + std::to_string(circuit.qubit_count) + " qubits but density " +
             std::to_string(density) + " on a " + std::to_string(m) + "x" + std::to_string(m) +
             " device seats " + std::to_string(density * m * m));
  }
}

RoutingRun simulate(Engine engine, const RoutingContext& ctx, const DepthOneCircuit& circuit,
                    const RoutingConfig& config) {
  check_circuit(ctx, circuit, config.density);
  if (engine == Engine::kSwapBased && !(config.swap_penalty >= 0.0)) {
    fail(ErrorCode::kInvalidArgument, "swap penalty must be non-negative");
  }
  const DeviceLayout& layout = ctx.layout();
  const long cap = config.step_cap > 0 ? config.step_cap : ctx.default_step_cap();
  World world(ctx, circuit, initial_positions(layout, config.density));
  world.set_trace(config.trace);

  RoutingRun run;
  run.engine = engine;
  run.zone_kind.assign(static_cast<std::size_t>(circuit.qubit_count), -1);
  const int pairs = static_cast<int>(circuit.pairs.size());
  const int per_round = layout.zone_count();
  run.round_count = round_count(pairs, per_round);
  run.converged = true;
  long lb_raw = 0;
  for (int r = 0; r < run.round_count && run.converged; ++r) {
    std::vector<int> indices;
    for (int i = r * per_round; i < std::min(pairs, (r + 1) * per_round); ++i) indices.push_back(i);
    const RoundAssignment round =
        assign_round(layout, ctx.directed(), circuit, indices, world.positions());
    world.begin_round(round);
    for (std::size_t q = 0; q < round.zone_of_ion.size(); ++q) {
      if (round.zone_of_ion[q] >= 0) {
        run.zone_kind[q] = static_cast<int>(layout.zone(round.zone_of_ion[q]).kind);
      }
    }
    lb_raw += world.round_lower_bound();
    while (!world.round_complete()) {
      if (world.time() >= cap) {
        run.converged = false;
        break;
      }
      if (engine == Engine::kLanePriority) {
        world.step_lane_priority();
      } else {
        world.step_swap_based(config.swap_penalty);
      }
    }
  }

  run.steps_raw = world.time();
  run.tau = static_cast<double>(run.steps_raw) / layout.resolution();
  run.lower_bound_tau = static_cast<double>(lb_raw) / layout.resolution();
  run.swap_events = world.swap_events();
  run.violations = world.violations();
  long seated = 0;
  for (PositionId p = 0; p < layout.position_count(); ++p) seated += world.occupancy(p);
  if (seated != circuit.qubit_count) ++run.violations;
  for (const Ion& ion : world.ions()) {
    run.junction_passes.push_back(ion.junction_passes);
    run.swaps.push_back(ion.swaps);
  }
  return run;
}

}  // namespace

RoutingRun run_lane_priority(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                             const RoutingConfig& config) {
  return simulate(Engine::kLanePriority, ctx, circuit, config);
}

RoutingRun run_swap_based(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                          const RoutingConfig& config) {
  return simulate(Engine::kSwapBased, ctx, circuit, config);
}

RoutingRun run_lower_bound(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                           const RoutingConfig& config) {
  check_circuit(ctx, circuit, config.density);
  const DeviceLayout& layout = ctx.layout();
  const auto positions = initial_positions(layout, config.density);
  const Assignment assignment = assign_pairs(layout, ctx.directed(), circuit, positions);
  RoutingRun run;
  run.engine = Engine::kLowerBound;
  run.round_count = static_cast<int>(assignment.rounds.size());
  run.lower_bound_tau = lower_bound(ctx, circuit, assignment, positions);
  run.tau = run.lower_bound_tau;
  run.steps_raw = std::lround(run.tau * layout.resolution());
  run.converged = true;
  run.junction_passes.assign(static_cast<std::size_t>(circuit.qubit_count), 0);
  run.swaps.assign(static_cast<std::size_t>(circuit.qubit_count), 0);
  run.zone_kind.assign(static_cast<std::size_t>(circuit.qubit_count), -1);
  for (const RoundAssignment& r : assignment.rounds) {
    for (std::size_t q = 0; q < r.zone_of_ion.size(); ++q) {
      if (r.zone_of_ion[q] >= 0) run.zone_kind[q] = static_cast<int>(layout.zone(r.zone_of_ion[q]).kind);
    }
  }
  return run;
}

RoutingRun run_engine(Engine engine, const RoutingContext& ctx, const DepthOneCircuit& circuit,
                      const RoutingConfig& config) {
  switch (engine) {
    case Engine::kLanePriority: return run_lane_priority(ctx, circuit, config);
    case Engine::kSwapBased: return run_swap_based(ctx, circuit, config);
    case Engine::kLowerBound: return run_lower_bound(ctx, circuit, config);
  }
  fail(ErrorCode::kInvalidArgument, "unknown engine");
}

double lower_bound(const RoutingContext& ctx, const DepthOneCircuit& circuit,
                   const Assignment& assignment, const std::vector<PositionId>& positions) {
  if (static_cast<int>(positions.size()) != circuit.qubit_count) {
    fail(ErrorCode::kInvalidArgument, "need one position per qubit");
  }
  std::vector<PositionId> pos = positions;
  long total = 0;
  for (const RoundAssignment& r : assignment.rounds) {
    int worst = 0;
    for (std::size_t q = 0; q < pos.size(); ++q) {
      const int z = r.zone_of_ion.at(q);
      if (z >= 0) worst = std::max(worst, ctx.undirected()(z, pos[q]));
    }
    total += worst;
    for (std::size_t q = 0; q < pos.size(); ++q) {
      if (r.zone_of_ion[q] >= 0) pos[q] = ctx.layout().zone_position(r.zone_of_ion[q]);
    }
  }
  return static_cast<double>(total) / ctx.layout().resolution();
}

}  // namespace iontrap
