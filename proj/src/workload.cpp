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

#include "iontrap/workload.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "iontrap/error.hpp"
#include "json.hpp"

namespace iontrap {

std::uint64_t Rng::below(std::uint64_t bound) {
  if (bound == 0) fail(ErrorCode::kInvalidArgument, "Rng::below needs a positive bound");
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t v;
  do {
    v = next();
  } while (v >= limit);
  return v % bound;
}

double Rng::uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

double Rng::normal() {
  if (has_spare_) {
    has_spare_ = false;
    return spare_;
  }
  double u1;
  do {
    u1 = uniform();
  } while (u1 <= 0.0);
  const double u2 = uniform();
  const double r = std::sqrt(-2.0 * std::log(u1));
  spare_ = r * std::sin(2.0 * std::numbers::pi * u2);
  has_spare_ = true;
  return r * std::cos(2.0 * std::numbers::pi * u2);
}

DepthOneCircuit random_matching(int n, std::uint64_t seed) {
  if (n < 2 || n % 2 != 0) {
    fail(ErrorCode::kInvalidArgument,
         "qubit count must be a positive even number, got " + std::to_string(n));
  }
  // Pairing consecutive entries of a uniform permutation gives every perfect
  // matching with equal probability. Pairs are then listed in canonical form,
  // ordered by their lower qubit id.
  std::vector<int> perm(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) perm[i] = i;
  Rng rng(seed);
  for (int i = n - 1; i > 0; --i) {
    const auto j = static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1));
    std::swap(perm[i], perm[j]);
  }
  DepthOneCircuit c;
  c.qubit_count = n;
  c.seed = seed;
  for (int k = 0; k < n; k += 2) {
    c.pairs.push_back({std::min(perm[k], perm[k + 1]), std::max(perm[k], perm[k + 1])});
  }
  std::sort(c.pairs.begin(), c.pairs.end(),
            [](const IonPair& x, const IonPair& y) { return x.a < y.a; });
  return c;
}

void validate(const DepthOneCircuit& circuit) {
  if (circuit.qubit_count < 0) fail(ErrorCode::kInvalidArgument, "negative qubit count");
  std::vector<char> seen(static_cast<std::size_t>(circuit.qubit_count), 0);
  for (const IonPair& p : circuit.pairs) {
    for (int q : {p.a, p.b}) {
      if (q < 0 || q >= circuit.qubit_count) {
        fail(ErrorCode::kInvalidArgument, "qubit id " + std::to_string(q) + " out of range");
      }
      if (seen[q]) fail(ErrorCode::kInvalidArgument, "qubit " + std::to_string(q) + " used twice");
      seen[q] = 1;
    }
  }
}

std::string to_json(const DepthOneCircuit& circuit) {
  nlohmann::json j;
  j["n"] = circuit.qubit_count;
  j["pairs"] = nlohmann::json::array();
  for (const IonPair& p : circuit.pairs) j["pairs"].push_back({p.a, p.b});
  j["seed"] = circuit.seed;
  return j.dump();
}

DepthOneCircuit circuit_from_json(std::string_view text) {
  DepthOneCircuit c;
  try {
    const auto j = nlohmann::json::parse(text);
    for (const auto& [key, value] : j.items()) {
      if (key != "n" && key != "pairs" && key != "seed") {
        fail(ErrorCode::kInvalidArgument, "unknown circuit key '" + key + "'");
      }
    }
    c.qubit_count = j.at("n").get<int>();
    for (const auto& p : j.at("pairs")) {
      if (!p.is_array() || p.size() != 2) {
        fail(ErrorCode::kInvalidArgument, "each pair must be a two-element array");
      }
      c.pairs.push_back({p[0].get<int>(), p[1].get<int>()});
    }
    c.seed = j.value("seed", std::uint64_t{0});
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorCode::kInvalidArgument, std::string("bad circuit json: ") + e.what());
  }
  validate(c);
  return c;
}

namespace {

// Lane positions around a junction centre in seating order.
std::vector<PositionId> seats(const DeviceLayout& layout, Coord centre) {
  std::vector<PositionId> out;
  const int reach = (layout.resolution() - 1) / 2;
  for (int r = 1; r <= reach; ++r) {
    for (Direction d : kDirectionOrder) {
      Coord c = centre;
      for (int k = 0; k < r; ++k) c = step(c, d);
      const auto p = layout.find(c);
      if (p && layout.kind(*p) == PositionKind::kLane) out.push_back(*p);
    }
  }
  return out;
}

}  // namespace

int max_density(const DeviceLayout& layout) {
  std::size_t best = std::numeric_limits<std::size_t>::max();
  for (const Coord& c : layout.junction_centres()) best = std::min(best, seats(layout, c).size());
  return static_cast<int>(best);
}

std::vector<PositionId> initial_positions(const DeviceLayout& layout, int density) {
  if (density < 1 || density > max_density(layout)) {
    fail(ErrorCode::kInvalidArgument,
         "density must be in [1, " + std::to_string(max_density(layout)) + "], got " +
             std::to_string(density));
  }
  std::vector<PositionId> out;
  for (const Coord& c : layout.junction_centres()) {
    const auto s = seats(layout, c);
    out.insert(out.end(), s.begin(), s.begin() + density);
  }
  return out;
}

int round_count(int pair_count, int zone_count) {
  if (zone_count <= 0) fail(ErrorCode::kInvalidArgument, "layout has no gate zones");
  return (pair_count + zone_count - 1) / zone_count;
}

RoundAssignment assign_round(const DeviceLayout& layout, const ZoneDistances& dist,
                             const DepthOneCircuit& circuit, const std::vector<int>& pair_indices,
                             const std::vector<PositionId>& positions) {
  if (static_cast<int>(positions.size()) != circuit.qubit_count) {
    fail(ErrorCode::kInvalidArgument, "need one position per qubit");
  }
  if (static_cast<int>(pair_indices.size()) > layout.zone_count()) {
    fail(ErrorCode::kInvalidArgument, "more pairs than gate zones in one round");
  }
  RoundAssignment round;
  round.pair_indices = pair_indices;
  round.zone_of_ion.assign(positions.size(), -1);
  std::vector<char> claimed(static_cast<std::size_t>(layout.zone_count()), 0);
  for (int pi : pair_indices) {
    const IonPair& pair = circuit.pairs.at(static_cast<std::size_t>(pi));
    int best = -1;
    long best_cost = std::numeric_limits<long>::max();
    for (int z = 0; z < layout.zone_count(); ++z) {
      if (claimed[z]) continue;
      const int da = dist(z, positions[pair.a]);
      const int db = dist(z, positions[pair.b]);
      if (da == kUnreachable || db == kUnreachable) continue;
      const long cost = static_cast<long>(da) + db;
      if (cost < best_cost) {
        best_cost = cost;
        best = z;
      }
    }
    if (best < 0) fail(ErrorCode::kInternal, "no reachable gate zone left for a pair");
    claimed[best] = 1;
    round.zones.push_back(best);
    round.zone_of_ion[pair.a] = best;
    round.zone_of_ion[pair.b] = best;
  }
  round.destinations.resize(positions.size());
  for (std::size_t q = 0; q < positions.size(); ++q) {
    const int z = round.zone_of_ion[q];
    round.destinations[q] = z >= 0 ? layout.zone(z).coord : layout.coord(positions[q]);
  }
  return round;
}

Assignment assign_pairs(const DeviceLayout& layout, const ZoneDistances& dist,
                        const DepthOneCircuit& circuit, const std::vector<PositionId>& positions) {
  validate(circuit);
  Assignment out;
  const int pairs = static_cast<int>(circuit.pairs.size());
  const int per_round = layout.zone_count();
  std::vector<PositionId> pos = positions;
  for (int start = 0; start < pairs; start += per_round) {
    std::vector<int> indices;
    for (int i = start; i < std::min(pairs, start + per_round); ++i) indices.push_back(i);
    out.rounds.push_back(assign_round(layout, dist, circuit, indices, pos));
    const RoundAssignment& r = out.rounds.back();
    for (std::size_t k = 0; k < r.pair_indices.size(); ++k) {
      const IonPair& p = circuit.pairs[static_cast<std::size_t>(r.pair_indices[k])];
      pos[p.a] = pos[p.b] = layout.zone_position(r.zones[k]);
    }
  }
  return out;
}

}  // namespace iontrap
