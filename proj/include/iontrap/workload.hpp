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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

#include "iontrap/device.hpp"

namespace iontrap {

struct IonPair {
  int a = 0;
  int b = 0;
  auto operator<=>(const IonPair&) const = default;
};

// A depth-1 circuit: disjoint two-qubit gates on `qubit_count` qubits. Pair
// order is significant; greedy zone assignment visits pairs in this order.
struct DepthOneCircuit {
  int qubit_count = 0;
  std::vector<IonPair> pairs;
  std::uint64_t seed = 0;
};

// Uniformly random perfect matching on {0..n-1}, pairs sorted by their lower
// qubit id (each pair stored as a < b).
// Throws Error(kInvalidArgument) for odd or non-positive n.
DepthOneCircuit random_matching(int n, std::uint64_t seed);

// Checks ids are in range and pairs are disjoint.
void validate(const DepthOneCircuit& circuit);

// {"n": N, "pairs": [[a,b],...], "seed": s}
std::string to_json(const DepthOneCircuit& circuit);
DepthOneCircuit circuit_from_json(std::string_view text);

// Ions per junction the layout can seat (lane positions on the junction's own
// half of each arm; the tightest junction is a corner).
int max_density(const DeviceLayout& layout);

// Starting position of every ion: `density` ions per junction, junctions in
// row-major order, each on the lane positions nearest its centre (nearer
// first, then right, down, left, up). Ion k sits at junction k / density.
std::vector<PositionId> initial_positions(const DeviceLayout& layout, int density);

struct RoundAssignment {
  std::vector<int> pair_indices;   // into DepthOneCircuit::pairs
  std::vector<int> zones;          // gate zone per entry of pair_indices
  std::vector<int> zone_of_ion;    // -1 for ions idle this round
  std::vector<Coord> destinations; // zone coordinate, or current position if idle
};

struct Assignment {
  std::vector<RoundAssignment> rounds;
};

// Rounds needed for `pair_count` gates on a device with `zone_count` zones.
int round_count(int pair_count, int zone_count);

// Greedy assignment of `pair_indices` (visited in the given order), each to
// the unclaimed zone with the least summed distance for its two ions; ties go
// to the lower zone id. At most one pair per zone.
RoundAssignment assign_round(const DeviceLayout& layout, const ZoneDistances& dist,
                             const DepthOneCircuit& circuit, const std::vector<int>& pair_indices,
                             const std::vector<PositionId>& positions);

// All rounds up front. Round k takes pairs [kG, (k+1)G) for G zones; later
// rounds are planned from positions where the earlier rounds left the pairs
// (at their zones) and every other ion unmoved.
Assignment assign_pairs(const DeviceLayout& layout, const ZoneDistances& dist,
                        const DepthOneCircuit& circuit, const std::vector<PositionId>& positions);

// Simple deterministic generator shared by the library (matchings, random
// test inputs): std::mt19937_64 with its own bounded, uniform and normal
// draws, because the standard distributions differ between library vendors.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}
  std::uint64_t next() { return engine_(); }
  // Uniform integer in [0, bound).
  std::uint64_t below(std::uint64_t bound);
  // Uniform double in [0, 1).
  double uniform();
  // Standard normal (Box-Muller).
  double normal();

 private:
  std::mt19937_64 engine_;
  bool has_spare_ = false;
  double spare_ = 0.0;
};

}  // namespace iontrap
