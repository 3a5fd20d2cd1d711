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

#include "iontrap/device.hpp"

#include <algorithm>
#include <deque>

#include "iontrap/error.hpp"
#include "json.hpp"

namespace iontrap {

namespace {

EdgeKind reversed(EdgeKind k) {
  switch (k) {
    case EdgeKind::kArmOut: return EdgeKind::kArmIn;
    case EdgeKind::kArmIn: return EdgeKind::kArmOut;
    case EdgeKind::kPocketIn: return EdgeKind::kPocketOut;
    case EdgeKind::kPocketOut: return EdgeKind::kPocketIn;
    case EdgeKind::kLane: break;
  }
  return EdgeKind::kLane;
}

}  // namespace

const char* to_string(Direction d) {
  switch (d) {
    case Direction::kRight: return "right";
    case Direction::kDown: return "down";
    case Direction::kLeft: return "left";
    case Direction::kUp: return "up";
  }
  return "?";
}

const char* to_string(ZoneKind k) {
  return k == ZoneKind::kInterior ? "interior" : "exterior";
}

Direction opposite(Direction d) {
  return static_cast<Direction>((static_cast<unsigned>(d) + 2) % 4);
}

Coord step(Coord c, Direction d) {
  switch (d) {
    case Direction::kRight: return {c.x + 1, c.y};
    case Direction::kDown: return {c.x, c.y + 1};
    case Direction::kLeft: return {c.x - 1, c.y};
    case Direction::kUp: return {c.x, c.y - 1};
  }
  return c;
}

int manhattan(Coord a, Coord b) { return std::abs(a.x - b.x) + std::abs(a.y - b.y); }

DeviceLayout::DeviceLayout(int device_size, int resolution)
    : m_(device_size), r_(resolution), arm_(resolution / 2) {
  if (device_size < 2) {
    fail(ErrorCode::kInvalidArgument,
         "device size must be at least 2, got " + std::to_string(device_size));
  }
  if (resolution < 3) {
    fail(ErrorCode::kInvalidArgument,
         "resolution must be at least 3, got " + std::to_string(resolution));
  }
  origin_ = arm_;
  width_ = (m_ - 1) * r_ + 2 * arm_ + 1;
  box_.assign(static_cast<std::size_t>(width_) * static_cast<std::size_t>(width_), kNoPosition);

  // The perimeter is a clockwise loop; inside it lanes alternate starting with
  // a right-only top row and an up-only left column.
  rows_.resize(static_cast<std::size_t>(m_));
  cols_.resize(static_cast<std::size_t>(m_));
  for (int k = 0; k < m_; ++k) {
    rows_[k] = (k == m_ - 1 || k % 2 == 1) ? Direction::kLeft : Direction::kRight;
    cols_[k] = (k == m_ - 1 || k % 2 == 1) ? Direction::kDown : Direction::kUp;
  }

  const int extent = (m_ - 1) * r_;
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      centres_.push_back({i * r_, j * r_});
      add_position({i * r_, j * r_}, PositionKind::kCentre);
    }
  }
  for (int j = 0; j < m_; ++j) {
    for (int x = 0; x <= extent; ++x) {
      if (x % r_ != 0) add_position({x, j * r_}, PositionKind::kLane);
    }
  }
  for (int i = 0; i < m_; ++i) {
    for (int y = 0; y <= extent; ++y) {
      if (y % r_ != 0) add_position({i * r_, y}, PositionKind::kLane);
    }
  }

  // One gate zone per junction, on the outer arm wherever the junction has
  // one. Corner arms continue the perimeter lane that runs into the corner.
  for (int j = 0; j < m_; ++j) {
    for (int i = 0; i < m_; ++i) {
      GateZone z;
      z.id = j * m_ + i;
      z.junction = {i * r_, j * r_};
      const bool perimeter = i == 0 || j == 0 || i == m_ - 1 || j == m_ - 1;
      if (perimeter) {
        Direction out;
        if (i == 0 && j == 0) out = Direction::kUp;
        else if (i == m_ - 1 && j == 0) out = Direction::kRight;
        else if (i == m_ - 1 && j == m_ - 1) out = Direction::kDown;
        else if (i == 0 && j == m_ - 1) out = Direction::kLeft;
        else if (j == 0) out = Direction::kUp;
        else if (j == m_ - 1) out = Direction::kDown;
        else if (i == 0) out = Direction::kLeft;
        else out = Direction::kRight;
        z.kind = ZoneKind::kExterior;
        Coord c = z.junction;
        for (int k = 1; k <= arm_; ++k) {
          c = step(c, out);
          z.arm.push_back(c);
        }
        z.coord = c;
      } else {
        const int dh = rows_[j] == Direction::kRight ? 1 : -1;
        const int dv = cols_[i] == Direction::kDown ? 1 : -1;
        z.kind = ZoneKind::kInterior;
        z.coord = {z.junction.x - dh, z.junction.y - dv};
        // Upstream positions of both lanes: every route into the junction
        // passes one of them.
        z.waiting_slots = {{z.junction.x - dh, z.junction.y}, {z.junction.x, z.junction.y - dv}};
      }
      zones_.push_back(std::move(z));
    }
  }

  owner_.assign(coords_.size(), -1);
  arm_idx_.assign(coords_.size(), 0);
  slot_of_.assign(coords_.size(), -1);
  for (const GateZone& z : zones_) {
    zone_centre_.push_back(id(z.junction));
    if (z.kind == ZoneKind::kExterior) {
      for (int k = 0; k < arm_; ++k) {
        const PositionId p = add_position(z.arm[k], PositionKind::kArm);
        owner_.push_back(z.id);
        arm_idx_.push_back(k + 1);
        slot_of_.push_back(-1);
        (void)p;
      }
    } else {
      add_position(z.coord, PositionKind::kPocket);
      owner_.push_back(z.id);
      arm_idx_.push_back(0);
      slot_of_.push_back(-1);
      for (const Coord& s : z.waiting_slots) slot_of_[static_cast<std::size_t>(id(s))] = z.id;
    }
    zone_pos_.push_back(id(z.coord));
  }

  out_.resize(coords_.size());
  in_.resize(coords_.size());
  und_.resize(coords_.size());

  for (PositionId p = 0; p < position_count(); ++p) {
    const Coord c = coord(p);
    if (kind(p) == PositionKind::kLane) {
      const Direction d = (c.y % r_ == 0) ? rows_[c.y / r_] : cols_[c.x / r_];
      add_edge(p, id(step(c, d)), d, EdgeKind::kLane);
    } else if (kind(p) == PositionKind::kCentre) {
      const Direction h = rows_[c.y / r_];
      const Direction v = cols_[c.x / r_];
      for (Direction d : kDirectionOrder) {
        if (d != h && d != v) continue;
        const Coord n = step(c, d);
        if (n.x < 0 || n.y < 0 || n.x > extent || n.y > extent) continue;
        add_edge(p, id(n), d, EdgeKind::kLane);
      }
    }
    if (on_lanes(p)) {
      for (Direction d : {Direction::kRight, Direction::kDown}) {
        const auto n = find(step(c, d));
        if (n && on_lanes(*n)) add_undirected(p, *n, d, EdgeKind::kLane, EdgeKind::kLane);
      }
    }
  }
  for (const GateZone& z : zones_) {
    if (z.kind == ZoneKind::kExterior) {
      Coord prev = z.junction;
      for (const Coord& a : z.arm) {
        Direction d = Direction::kRight;
        for (Direction cand : kDirectionOrder) {
          if (step(prev, cand) == a) d = cand;
        }
        const PositionId pp = id(prev);
        const PositionId pa = id(a);
        add_edge(pp, pa, d, EdgeKind::kArmOut);
        add_edge(pa, pp, opposite(d), EdgeKind::kArmIn);
        add_undirected(pp, pa, d, EdgeKind::kArmOut, EdgeKind::kArmIn);
        prev = a;
      }
    } else {
      const PositionId pocket = id(z.coord);
      for (const Coord& s : z.waiting_slots) {
        Direction d = Direction::kRight;
        for (Direction cand : kDirectionOrder) {
          if (step(s, cand) == z.coord) d = cand;
        }
        const PositionId ps = id(s);
        add_edge(ps, pocket, d, EdgeKind::kPocketIn);
        add_edge(pocket, ps, opposite(d), EdgeKind::kPocketOut);
        add_undirected(ps, pocket, d, EdgeKind::kPocketIn, EdgeKind::kPocketOut);
      }
    }
  }
  // Keep per-position adjacency in the global tie-break order.
  auto by_dir = [](const Edge& a, const Edge& b) { return a.dir < b.dir; };
  for (auto& v : out_) std::stable_sort(v.begin(), v.end(), by_dir);
  for (auto& v : und_) std::stable_sort(v.begin(), v.end(), by_dir);
}

int DeviceLayout::box_index(Coord c) const {
  const int bx = c.x + origin_;
  const int by = c.y + origin_;
  if (bx < 0 || by < 0 || bx >= width_ || by >= width_) return -1;
  return by * width_ + bx;
}

PositionId DeviceLayout::add_position(Coord c, PositionKind k) {
  const int b = box_index(c);
  const auto p = static_cast<PositionId>(coords_.size());
  box_[static_cast<std::size_t>(b)] = p;
  coords_.push_back(c);
  kinds_.push_back(k);
  return p;
}

void DeviceLayout::add_edge(PositionId from, PositionId to, Direction d, EdgeKind k) {
  out_[static_cast<std::size_t>(from)].push_back({to, d, k});
  in_[static_cast<std::size_t>(to)].push_back({from, d, k});
}

void DeviceLayout::add_undirected(PositionId a, PositionId b, Direction d_ab, EdgeKind ab,
                                  EdgeKind ba) {
  und_[static_cast<std::size_t>(a)].push_back({b, d_ab, ab});
  und_[static_cast<std::size_t>(b)].push_back({a, opposite(d_ab), ba});
}

std::optional<PositionId> DeviceLayout::find(Coord c) const {
  const int b = box_index(c);
  if (b < 0) return std::nullopt;
  const PositionId p = box_[static_cast<std::size_t>(b)];
  if (p == kNoPosition) return std::nullopt;
  return p;
}

PositionId DeviceLayout::id(Coord c) const {
  const auto p = find(c);
  if (!p) {
    fail(ErrorCode::kOutOfRange,
         "(" + std::to_string(c.x) + ", " + std::to_string(c.y) + ") is not a device position");
  }
  return *p;
}

DirectionSet DeviceLayout::lane_direction(Coord c) const {
  const PositionId p = id(c);
  DirectionSet s = 0;
  for (const Edge& e : out_edges(p)) {
    if (kind(p) == PositionKind::kCentre && e.kind != EdgeKind::kLane) continue;
    s |= bit(e.dir);
  }
  return s;
}

int DeviceLayout::interior_zone_count() const {
  return static_cast<int>(std::count_if(zones_.begin(), zones_.end(), [](const GateZone& z) {
    return z.kind == ZoneKind::kInterior;
  }));
}

int DeviceLayout::exterior_zone_count() const { return zone_count() - interior_zone_count(); }

PositionId DeviceLayout::other_slot(PositionId slot) const {
  const int z = slot_zone(slot);
  if (z < 0) return kNoPosition;
  for (const Coord& s : zones_[static_cast<std::size_t>(z)].waiting_slots) {
    const PositionId p = id(s);
    if (p != slot) return p;
  }
  return kNoPosition;
}

namespace {

bool kind_usable(const DeviceLayout& layout, EdgeKind k, PositionId to, PositionId target) {
  if (k == EdgeKind::kPocketIn) return to == target;
  if (k == EdgeKind::kArmOut) {
    return layout.kind(target) == PositionKind::kArm &&
           layout.zone_owning(target) == layout.zone_owning(to) &&
           layout.arm_index(to) <= layout.arm_index(target);
  }
  return true;
}

}  // namespace

bool DeviceLayout::edge_usable(PositionId /*from*/, const Edge& e, PositionId target) const {
  return kind_usable(*this, e.kind, e.to, target);
}

PositionId DeviceLayout::lane_predecessor(PositionId p) const {
  if (kind(p) != PositionKind::kLane) return kNoPosition;
  for (const Edge& e : in_edges(p)) {
    if (e.kind == EdgeKind::kLane) return e.to;
  }
  return kNoPosition;
}

std::string DeviceLayout::to_json() const {
  using nlohmann::json;
  auto xy = [](Coord c) { return json::array({c.x, c.y}); };
  json j;
  j["device_size"] = m_;
  j["resolution"] = r_;
  j["arm_length"] = arm_;
  j["rows"] = json::array();
  j["columns"] = json::array();
  for (Direction d : rows_) j["rows"].push_back(to_string(d));
  for (Direction d : cols_) j["columns"].push_back(to_string(d));
  j["junction_centres"] = json::array();
  for (const Coord& c : centres_) j["junction_centres"].push_back(xy(c));
  j["zones"] = json::array();
  for (const GateZone& z : zones_) {
    json jz{{"id", z.id}, {"x", z.coord.x}, {"y", z.coord.y}, {"kind", to_string(z.kind)},
            {"junction", xy(z.junction)}};
    jz["waiting_slots"] = json::array();
    for (const Coord& s : z.waiting_slots) jz["waiting_slots"].push_back(xy(s));
    j["zones"].push_back(std::move(jz));
  }
  static constexpr const char* kKinds[] = {"none", "lane", "centre", "arm", "zone"};
  j["positions"] = json::array();
  for (PositionId p = 0; p < position_count(); ++p) {
    json jp{{"x", coord(p).x}, {"y", coord(p).y},
            {"kind", kKinds[static_cast<int>(kind(p))]}};
    jp["exits"] = json::array();
    for (Direction d : kDirectionOrder) {
      if (lane_direction(coord(p)) & bit(d)) jp["exits"].push_back(to_string(d));
    }
    j["positions"].push_back(std::move(jp));
  }
  return j.dump();
}

DeviceLayout build_layout(int device_size, int resolution) {
  return DeviceLayout(device_size, resolution);
}

int shortest_distance(const DeviceLayout& layout, PositionId from, PositionId to, Metric metric) {
  if (from == to) return 0;
  std::vector<int> dist(static_cast<std::size_t>(layout.position_count()), kUnreachable);
  std::deque<PositionId> queue{from};
  dist[static_cast<std::size_t>(from)] = 0;
  while (!queue.empty()) {
    const PositionId u = queue.front();
    queue.pop_front();
    const auto edges = metric == Metric::kDirected ? layout.out_edges(u) : layout.neighbours(u);
    for (const Edge& e : edges) {
      if (!layout.edge_usable(u, e, to)) continue;
      auto& d = dist[static_cast<std::size_t>(e.to)];
      if (d != kUnreachable) continue;
      d = dist[static_cast<std::size_t>(u)] + 1;
      if (e.to == to) return d;
      // Pockets are never passed through.
      if (layout.kind(e.to) == PositionKind::kPocket) continue;
      queue.push_back(e.to);
    }
  }
  return kUnreachable;
}

int shortest_distance(const DeviceLayout& layout, Coord from, Coord to, Metric metric) {
  return shortest_distance(layout, layout.id(from), layout.id(to), metric);
}

ZoneDistances::ZoneDistances(const DeviceLayout& layout, Metric metric)
    : metric_(metric), stride_(static_cast<std::size_t>(layout.position_count())) {
  dist_.assign(stride_ * static_cast<std::size_t>(layout.zone_count()), kUnreachable);
  std::vector<PositionId> queue;
  queue.reserve(stride_);
  for (int z = 0; z < layout.zone_count(); ++z) {
    int* dist = dist_.data() + static_cast<std::size_t>(z) * stride_;
    const PositionId target = layout.zone_position(z);
    queue.clear();
    queue.push_back(target);
    dist[target] = 0;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      const PositionId v = queue[head];
      if (layout.kind(v) == PositionKind::kPocket && v != target) continue;
      // Walk edges u -> v backwards.
      if (metric == Metric::kDirected) {
        for (const Edge& e : layout.in_edges(v)) {
          if (!kind_usable(layout, e.kind, v, target)) continue;
          if (dist[e.to] != kUnreachable) continue;
          dist[e.to] = dist[v] + 1;
          queue.push_back(e.to);
        }
      } else {
        for (const Edge& e : layout.neighbours(v)) {
          if (!kind_usable(layout, reversed(e.kind), v, target)) continue;
          if (dist[e.to] != kUnreachable) continue;
          dist[e.to] = dist[v] + 1;
          queue.push_back(e.to);
        }
      }
    }
  }
}

}  // namespace iontrap
