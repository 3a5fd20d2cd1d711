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

#include <deque>
#include <map>
#include <set>

#include "iontrap/device.hpp"
#include "iontrap/error.hpp"

namespace iontrap {
namespace {

// Direction of row j and column i from the alternating lane rule, written
// out independently of the layout code.
Direction expected_row(int j, int m) { return (j == m - 1 || j % 2 == 1) ? Direction::kLeft : Direction::kRight; }
Direction expected_column(int i, int m) { return (i == m - 1 || i % 2 == 1) ? Direction::kDown : Direction::kUp; }

// Junction-level directed distance (in junction hops) from a BFS over the
// M x M junction grid with one-way rows and columns.
std::map<std::pair<int, int>, int> junction_bfs(int m, int si, int sj) {
  std::map<std::pair<int, int>, int> dist;
  std::deque<std::pair<int, int>> q;
  dist[{si, sj}] = 0;
  q.push_back({si, sj});
  while (!q.empty()) {
    auto [i, j] = q.front();
    q.pop_front();
    const int dx = expected_row(j, m) == Direction::kRight ? 1 : -1;
    const int dy = expected_column(i, m) == Direction::kDown ? 1 : -1;
    for (auto [ni, nj] : {std::pair{i + dx, j}, std::pair{i, j + dy}}) {
      if (ni < 0 || nj < 0 || ni >= m || nj >= m || dist.count({ni, nj})) continue;
      dist[{ni, nj}] = dist[{i, j}] + 1;
      q.push_back({ni, nj});
    }
  }
  return dist;
}

TEST(DeviceLayout, RejectsTooSmallDevices) {
  EXPECT_THROW(DeviceLayout(1, 7), Error);
  EXPECT_THROW(DeviceLayout(3, 2), Error);
}

TEST(DeviceLayout, OneZonePerJunctionSplitByPerimeter) {
  for (int m = 2; m <= 9; ++m) {
    const DeviceLayout l(m, 7);
    EXPECT_EQ(l.zone_count(), m * m);
    EXPECT_EQ(l.exterior_zone_count(), 4 * (m - 1));
    EXPECT_EQ(l.interior_zone_count(), (m - 2) * (m - 2));
    EXPECT_EQ(static_cast<int>(l.junction_centres().size()), m * m);
  }
}

TEST(DeviceLayout, PositionCountMatchesGeometry) {
  for (int m = 2; m <= 8; ++m) {
    for (int r : {5, 7, 9}) {
      const DeviceLayout l(m, r);
      const int lanes = 2 * m * (m - 1) * (r - 1);
      const int arms = 4 * (m - 1) * (r / 2);
      const int pockets = (m - 2) * (m - 2);
      EXPECT_EQ(l.position_count(), m * m + lanes + arms + pockets) << "m=" << m << " r=" << r;
      EXPECT_EQ(l.arm_length(), r / 2);
    }
  }
}

TEST(DeviceLayout, LaneDirectionsAlternate) {
  const int m = 6;
  const DeviceLayout l(m, 7);
  for (int j = 0; j < m; ++j) EXPECT_EQ(l.row_direction(j), expected_row(j, m));
  for (int i = 0; i < m; ++i) EXPECT_EQ(l.column_direction(i), expected_column(i, m));
  // A position strictly between two centres carries exactly its lane's bit.
  EXPECT_EQ(l.lane_direction({3, 0}), bit(Direction::kRight));
  EXPECT_EQ(l.lane_direction({3, 7}), bit(Direction::kLeft));
  EXPECT_EQ(l.lane_direction({0, 3}), bit(Direction::kUp));
  EXPECT_EQ(l.lane_direction({7, 3}), bit(Direction::kDown));
  EXPECT_THROW(l.lane_direction({3, 3}), Error);
}

TEST(DeviceLayout, PerimeterIsClockwiseLoop) {
  for (int m = 2; m <= 7; ++m) {
    const int r = 7;
    const DeviceLayout l(m, r);
    const int side = (m - 1) * r;
    const Coord tl{0, 0}, tr{side, 0}, br{side, side}, bl{0, side};
    EXPECT_EQ(shortest_distance(l, tl, tr, Metric::kDirected), side);
    EXPECT_EQ(shortest_distance(l, tr, br, Metric::kDirected), side);
    EXPECT_EQ(shortest_distance(l, br, bl, Metric::kDirected), side);
    EXPECT_EQ(shortest_distance(l, bl, tl, Metric::kDirected), side);
    // Against the loop it is never shorter than the undirected distance.
    EXPECT_GT(shortest_distance(l, tr, tl, Metric::kDirected), side);
    EXPECT_EQ(shortest_distance(l, tr, tl, Metric::kUndirected), side);
  }
}

TEST(DeviceLayout, CentreDistancesMatchJunctionBfs) {
  for (int m = 2; m <= 7; ++m) {
    const int r = 7;
    const DeviceLayout l(m, r);
    for (int si = 0; si < m; ++si) {
      for (int sj = 0; sj < m; ++sj) {
        const auto dist = junction_bfs(m, si, sj);
        for (int ti = 0; ti < m; ++ti) {
          for (int tj = 0; tj < m; ++tj) {
            const Coord from{si * r, sj * r};
            const Coord to{ti * r, tj * r};
            ASSERT_EQ(dist.count({ti, tj}), 1u) << "junction grid not strongly connected";
            EXPECT_EQ(shortest_distance(l, from, to, Metric::kDirected), dist.at({ti, tj}) * r);
            EXPECT_EQ(shortest_distance(l, from, to, Metric::kUndirected), manhattan(from, to));
          }
        }
      }
    }
  }
}

TEST(DeviceLayout, EveryZoneReachableFromEveryLanePosition) {
  for (int m = 2; m <= 6; ++m) {
    const DeviceLayout l(m, 7);
    const ZoneDistances directed(l, Metric::kDirected);
    const ZoneDistances undirected(l, Metric::kUndirected);
    for (PositionId p = 0; p < l.position_count(); ++p) {
      if (!l.on_lanes(p)) continue;
      for (int z = 0; z < l.zone_count(); ++z) {
        const int d = directed(z, p);
        const int u = undirected(z, p);
        ASSERT_NE(d, kUnreachable);
        EXPECT_GE(d, u);
        EXPECT_EQ(d, shortest_distance(l, p, l.zone_position(z), Metric::kDirected));
      }
    }
  }
}

TEST(DeviceLayout, ExteriorZonesSitAtArmTipsOnThePerimeter) {
  const int m = 5;
  const int r = 7;
  const DeviceLayout l(m, r);
  const int side = (m - 1) * r;
  std::set<std::pair<int, int>> junctions;
  for (const GateZone& z : l.zones()) {
    EXPECT_TRUE(junctions.insert({z.junction.x, z.junction.y}).second) << "two zones on one junction";
    const bool perimeter = z.junction.x == 0 || z.junction.y == 0 || z.junction.x == side || z.junction.y == side;
    if (z.kind == ZoneKind::kExterior) {
      EXPECT_TRUE(perimeter);
      ASSERT_EQ(static_cast<int>(z.arm.size()), l.arm_length());
      EXPECT_EQ(z.arm.back(), z.coord);
      EXPECT_EQ(manhattan(z.coord, z.junction), l.arm_length());
      // The arm leaves the device bounding box of centres.
      EXPECT_TRUE(z.coord.x < 0 || z.coord.y < 0 || z.coord.x > side || z.coord.y > side);
    } else {
      EXPECT_FALSE(perimeter);
      EXPECT_EQ(z.waiting_slots.size(), 2u);
      EXPECT_EQ(l.kind(l.zone_position(z.id)), PositionKind::kPocket);
      for (const Coord& s : z.waiting_slots) {
        EXPECT_EQ(manhattan(s, z.junction), 1);
        EXPECT_EQ(manhattan(s, z.coord), 1);
      }
    }
  }
}

TEST(DeviceLayout, UndirectedGraphIsSymmetric) {
  const DeviceLayout l(4, 7);
  for (PositionId p = 0; p < l.position_count(); ++p) {
    for (const Edge& e : l.neighbours(p)) {
      bool back = false;
      for (const Edge& f : l.neighbours(e.to)) back = back || f.to == p;
      EXPECT_TRUE(back);
      EXPECT_EQ(manhattan(l.coord(p), l.coord(e.to)), 1);
    }
  }
}

TEST(DeviceLayout, JsonDescribesLayout) {
  const DeviceLayout l(3, 7);
  const std::string j = l.to_json();
  EXPECT_NE(j.find("\"device_size\""), std::string::npos);
  EXPECT_NE(j.find("\"zones\""), std::string::npos);
}

}  // namespace
}  // namespace iontrap
