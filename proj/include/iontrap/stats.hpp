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
#include <string>
#include <utility>
#include <vector>

#include "iontrap/routing.hpp"

namespace iontrap {

// Streaming mean and variance (Welford). Two partial summaries merge exactly
// as if their samples had been added to one.
class RunningStats {
 public:
  void add(double x);
  void merge(const RunningStats& other);

  long count() const { return n_; }
  double mean() const { return mean_; }
  // Sample (n-1) variance; 0 for fewer than two samples.
  double variance() const;
  double stddev() const;

 private:
  long n_ = 0;
  double mean_ = 0.0;
  double m2_ = 0.0;
};

struct EnsembleParams {
  int device_size = 4;
  int resolution = DeviceLayout::kDefaultResolution;
  int density = 2;
  Engine engine = Engine::kLanePriority;
  double swap_penalty = 0.5;
  int iterations = 300;
  // Iteration i uses the circuit random_matching(N, base_seed + i).
  std::uint64_t base_seed = 1;
  long step_cap = 0;
  // Worker threads; results do not depend on this.
  int jobs = 1;
};

// Integer-binned pass counts, split by the kind of zone each ion was sent to.
struct PassHistogram {
  std::vector<long> interior;
  std::vector<long> exterior;
  std::vector<long> unassigned;

  void add(int passes, int zone_kind);
  long total() const;
  // Fraction of all ion observations with at least `threshold` passes.
  double tail_fraction(int threshold) const;
};

struct EnsembleResult {
  EnsembleParams params;
  int qubit_count = 0;
  int round_count = 0;
  double mean_tau = 0.0;
  double std_tau = 0.0;
  double mean_lower_bound = 0.0;
  double std_lower_bound = 0.0;
  // Over all ion observations (ions x iterations).
  double mean_passes = 0.0;
  double std_passes = 0.0;
  int max_passes = 0;
  // Mean of the per-ion swap counters, i.e. how many swaps an ion takes part
  // in. Each swap event adds one to both participants.
  double mean_swaps_per_qubit = 0.0;
  double std_swaps_per_qubit = 0.0;
  // Swap events divided by qubit count (each event counted once).
  double mean_swap_events_per_qubit = 0.0;
  long failures = 0;            // runs that hit the step cap
  long violations = 0;          // safety audit total over all runs
  long below_lower_bound = 0;   // runs with tau < lower bound
  PassHistogram histogram;
  std::vector<double> taus;     // per iteration, in seed order
  std::vector<double> lower_bounds;
};

// Runs params.iterations independent circuits. Bit-identical for identical
// params regardless of params.jobs.
EnsembleResult run_ensemble(const EnsembleParams& params);
EnsembleResult run_ensemble(const RoutingContext& ctx, const EnsembleParams& params);

struct FitResult {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_se = 0.0;
  double intercept_se = 0.0;
  int points = 0;
};

// Ordinary least squares y = slope*x + intercept. Needs at least 3 points and
// two distinct x values, otherwise throws Error(kInvalidArgument).
FitResult fit_linear(const std::vector<std::pair<double, double>>& points);

enum class FitAxis : std::uint8_t { kDeviceSize, kSqrtQubits };

double axis_value(const EnsembleResult& r, FitAxis axis);
FitResult fit_tau(const std::vector<EnsembleResult>& sweep, FitAxis axis);
FitResult fit_lower_bound(const std::vector<EnsembleResult>& sweep, FitAxis axis);
// Mean junction passes against sqrt(N).
FitResult fit_pass_counts(const std::vector<EnsembleResult>& sweep);
// Mean swaps per qubit against sqrt(N).
FitResult fit_swap_counts(const std::vector<EnsembleResult>& sweep);

// True when mean tau at odd size m lies above the straight line through its
// even neighbours m-1 and m+1. Throws if any of the three is missing.
bool odd_size_above_neighbours(const std::vector<EnsembleResult>& sweep, int m);

std::string csv_header();
std::string csv_row(const EnsembleResult& r);
// {"points":[{"M":..,"N":..,"engine":..,"interior":[..],"exterior":[..],...}]}
std::string histogram_json(const std::vector<EnsembleResult>& results);

}  // namespace iontrap
