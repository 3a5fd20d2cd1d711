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
#include <compare>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace iontrap {

// Tie-break order used everywhere a direction choice is otherwise equal.
enum class Direction : std::uint8_t { kRight = 0, kDown = 1, kLeft = 2, kUp = 3 };

inline constexpr std::array<Direction, 4> kDirectionOrder{
    Direction::kRight, Direction::kDown, Direction::kLeft, Direction::kUp};

// Bit set of directions, bit i <=> Direction(i).
using DirectionSet = std::uint8_t;

inline constexpr DirectionSet bit(Direction d) {
  return static_cast<DirectionSet>(1u << static_cast<unsigned>(d));
}

const char* to_string(Direction d);
Direction opposite(Direction d);

// Lattice coordinate. x grows to the right, y grows downwards; the top-left
// junction centre sits at the origin.
struct Coord {
  int x = 0;
  int y = 0;
  auto operator<=>(const Coord&) const = default;
};

Coord step(Coord c, Direction d);
int manhattan(Coord a, Coord b);

using PositionId = std::int32_t;
inline constexpr PositionId kNoPosition = -1;

enum class PositionKind : std::uint8_t {
  kNone = 0,
  kLane,    // edge position between two junction centres
  kCentre,  // X-junction centre
  kArm,     // outer arm of a perimeter junction (dead-end stub)
  kPocket,  // interior gate zone, off the lanes
};

enum class ZoneKind : std::uint8_t { kInterior, kExterior };

const char* to_string(ZoneKind k);

struct GateZone {
  int id = 0;
  Coord coord;
  ZoneKind kind = ZoneKind::kExterior;
  Coord junction;
  // Interior zones: the two lane positions one off the centre from which the
  // pair combines into the zone. Empty for exterior zones.
  std::vector<Coord> waiting_slots;
  // Exterior zones: arm positions from the centre outwards; back() == coord.
  std::vector<Coord> arm;
};

enum class EdgeKind : std::uint8_t {
  kLane,       // lane-priority move, or centre exit
  kArmOut,     // centre/arm towards the arm tip
  kArmIn,      // arm towards the centre
  kPocketIn,   // waiting slot into an interior zone (combine)
  kPocketOut,  // interior zone back onto a waiting slot
};

struct Edge {
  PositionId to = kNoPosition;
  Direction dir = Direction::kRight;
  EdgeKind kind = EdgeKind::kLane;
};

enum class Metric : std::uint8_t { kDirected, kUndirected };

inline constexpr int kUnreachable = -1;

// The digitised M x M X-junction grid. Immutable once built.
class DeviceLayout {
 public:
  static constexpr int kDefaultResolution = 7;

  // Throws Error(kInvalidArgument) unless device_size >= 2, resolution >= 3.
  DeviceLayout(int device_size, int resolution);

  int device_size() const { return m_; }
  int resolution() const { return r_; }
  int arm_length() const { return arm_; }

  // --- positions -----------------------------------------------------------
  std::optional<PositionId> find(Coord c) const;
  // Throws Error(kOutOfRange) if c is not a device position.
  PositionId id(Coord c) const;
  Coord coord(PositionId p) const { return coords_[static_cast<std::size_t>(p)]; }
  PositionKind kind(PositionId p) const { return kinds_[static_cast<std::size_t>(p)]; }
  int position_count() const { return static_cast<int>(coords_.size()); }

  bool is_centre(PositionId p) const { return kind(p) == PositionKind::kCentre; }
  // Lane positions and centres: the positions of the routing grid proper.
  bool on_lanes(PositionId p) const {
    return kind(p) == PositionKind::kLane || kind(p) == PositionKind::kCentre;
  }

  // --- lanes ---------------------------------------------------------------
  Direction row_direction(int row) const { return rows_[static_cast<std::size_t>(row)]; }
  Direction column_direction(int col) const { return cols_[static_cast<std::size_t>(col)]; }
  // Allowed lane-priority exits at c: one bit on a lane position, one or two
  // bits at a centre (the arm is not a lane and is not reported), inward and
  // outward bits on an arm. Throws Error(kOutOfRange) off the device.
  DirectionSet lane_direction(Coord c) const;

  // --- junctions and zones -------------------------------------------------
  const std::vector<Coord>& junction_centres() const { return centres_; }
  const std::vector<GateZone>& zones() const { return zones_; }
  const GateZone& zone(int id) const { return zones_[static_cast<std::size_t>(id)]; }
  int zone_count() const { return static_cast<int>(zones_.size()); }
  int interior_zone_count() const;
  int exterior_zone_count() const;

  PositionId zone_position(int zone) const { return zone_pos_[static_cast<std::size_t>(zone)]; }
  // Zone whose arm (exterior) or pocket (interior) holds p, or -1.
  int zone_owning(PositionId p) const { return owner_[static_cast<std::size_t>(p)]; }
  // 1-based index along an arm (tip == arm_length()), 0 elsewhere.
  int arm_index(PositionId p) const { return arm_idx_[static_cast<std::size_t>(p)]; }
  // Interior zone for which p is a waiting slot, or -1.
  int slot_zone(PositionId p) const { return slot_of_[static_cast<std::size_t>(p)]; }
  // The other waiting slot of the same interior zone.
  PositionId other_slot(PositionId slot) const;
  // For a pocket or arm position: the owning zone's junction centre.
  PositionId junction_of_zone(int zone) const { return zone_centre_[static_cast<std::size_t>(zone)]; }

  // --- graphs --------------------------------------------------------------
  // Lane-priority graph: lane moves, centre exits, arm and pocket edges.
  std::span<const Edge> out_edges(PositionId p) const { return out_[static_cast<std::size_t>(p)]; }
  // Reverse of out_edges (edge.to is the predecessor).
  std::span<const Edge> in_edges(PositionId p) const { return in_[static_cast<std::size_t>(p)]; }
  // Edges of the direction-free graph (every adjacency both ways).
  std::span<const Edge> neighbours(PositionId p) const { return und_[static_cast<std::size_t>(p)]; }

  // Arms and pockets are only entered on the way to the position they lead
  // to; `edge_usable` encodes that rule for a path ending at `target`.
  bool edge_usable(PositionId from, const Edge& e, PositionId target) const;

  // Lane position directly behind p on its lane (the only lane predecessor),
  // or kNoPosition for centres, arms and pockets.
  PositionId lane_predecessor(PositionId p) const;

  std::string to_json() const;

 private:
  int box_index(Coord c) const;
  PositionId add_position(Coord c, PositionKind k);
  void add_edge(PositionId from, PositionId to, Direction d, EdgeKind k);
  void add_undirected(PositionId a, PositionId b, Direction d_ab, EdgeKind ab, EdgeKind ba);

  int m_;
  int r_;
  int arm_;
  int origin_;  // coordinate offset of the bounding box
  int width_;
  std::vector<PositionId> box_;  // bounding box -> position id
  std::vector<Coord> coords_;
  std::vector<PositionKind> kinds_;
  std::vector<int> owner_;
  std::vector<int> arm_idx_;
  std::vector<int> slot_of_;
  std::vector<Direction> rows_;
  std::vector<Direction> cols_;
  std::vector<Coord> centres_;
  std::vector<GateZone> zones_;
  std::vector<PositionId> zone_pos_;
  std::vector<PositionId> zone_centre_;
  std::vector<std::vector<Edge>> out_;
  std::vector<std::vector<Edge>> in_;
  std::vector<std::vector<Edge>> und_;
};

DeviceLayout build_layout(int device_size, int resolution = DeviceLayout::kDefaultResolution);

// Shortest path length in positions, honouring lane priority (kDirected) or
// ignoring it (kUndirected). Returns kUnreachable if there is no path.
int shortest_distance(const DeviceLayout& layout, PositionId from, PositionId to, Metric metric);
int shortest_distance(const DeviceLayout& layout, Coord from, Coord to, Metric metric);

// Distances from every position to every gate zone, precomputed once per
// layout and metric.
class ZoneDistances {
 public:
  ZoneDistances(const DeviceLayout& layout, Metric metric);

  int operator()(int zone, PositionId from) const {
    return dist_[static_cast<std::size_t>(zone) * stride_ + static_cast<std::size_t>(from)];
  }
  Metric metric() const { return metric_; }

 private:
  Metric metric_;
  std::size_t stride_;
  std::vector<int> dist_;
};

}  // namespace iontrap
