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

#include <cmath>
#include <numeric>
#include <sstream>

#include "iontrap/error.hpp"
#include "iontrap/stats.hpp"
#include "json.hpp"

namespace iontrap {
namespace {

TEST(RunningStats, MatchesTwoPassFormulas) {
  const std::vector<double> xs = {3.0, 1.5, 4.25, 9.0, -2.0, 0.5, 7.75};
  RunningStats s;
  for (double x : xs) s.add(x);
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  EXPECT_EQ(s.count(), 7);
  EXPECT_NEAR(s.mean(), mean, 1e-12);
  EXPECT_NEAR(s.variance(), ss / 6.0, 1e-12);
  EXPECT_NEAR(s.stddev(), std::sqrt(ss / 6.0), 1e-12);
}

TEST(RunningStats, MergeEqualsSingleStream) {
  RunningStats all;
  RunningStats left;
  RunningStats right;
  for (int i = 0; i < 100; ++i) {
    const double x = std::sin(i) * 10.0 + i * 0.1;
    all.add(x);
    (i < 37 ? left : right).add(x);
  }
  left.merge(right);
  EXPECT_EQ(left.count(), all.count());
  EXPECT_NEAR(left.mean(), all.mean(), 1e-12);
  EXPECT_NEAR(left.variance(), all.variance(), 1e-10);
  RunningStats empty;
  empty.merge(all);
  EXPECT_NEAR(empty.mean(), all.mean(), 1e-12);
  EXPECT_EQ(RunningStats().variance(), 0.0);
}

TEST(FitLinear, RecoversExactLine) {
  std::vector<std::pair<double, double>> pts;
  for (int m = 3; m <= 12; ++m) pts.emplace_back(m, 1.82 * m + 0.4);
  const FitResult f = fit_linear(pts);
  EXPECT_NEAR(f.slope, 1.82, 1e-12);
  EXPECT_NEAR(f.intercept, 0.4, 1e-12);
  EXPECT_NEAR(f.slope_se, 0.0, 1e-9);
  EXPECT_EQ(f.points, 10);
}

TEST(FitLinear, StandardErrorsMatchTextbook) {
  // x = 0,1,2,3 and y = 1,3,2,5: slope 1.1, intercept 1.1, residual sum of
  // squares 2.7, Sxx = 5.
  const FitResult f = fit_linear({{0, 1}, {1, 3}, {2, 2}, {3, 5}});
  EXPECT_NEAR(f.slope, 1.1, 1e-12);
  EXPECT_NEAR(f.intercept, 1.1, 1e-12);
  const double s2 = 2.7 / 2.0;
  EXPECT_NEAR(f.slope_se, std::sqrt(s2 / 5.0), 1e-12);
  EXPECT_NEAR(f.intercept_se, std::sqrt(s2 * (1.0 / 4.0 + 1.5 * 1.5 / 5.0)), 1e-12);
}

TEST(FitLinear, RejectsDegenerateInput) {
  EXPECT_THROW(fit_linear({{1, 1}, {2, 2}}), Error);
  EXPECT_THROW(fit_linear({{1, 1}, {1, 2}, {1, 3}}), Error);
}

TEST(PassHistogram, TailFraction) {
  PassHistogram h;
  for (int i = 0; i < 90; ++i) h.add(2, 0);
  for (int i = 0; i < 9; ++i) h.add(5, 1);
  h.add(14, -1);
  EXPECT_EQ(h.total(), 100);
  EXPECT_DOUBLE_EQ(h.tail_fraction(14), 0.01);
  EXPECT_DOUBLE_EQ(h.tail_fraction(5), 0.10);
  EXPECT_DOUBLE_EQ(h.tail_fraction(0), 1.0);
  EXPECT_DOUBLE_EQ(PassHistogram().tail_fraction(1), 0.0);
}

EnsembleParams small(int m, Engine e, int jobs) {
  EnsembleParams p;
  p.device_size = m;
  p.engine = e;
  p.iterations = 24;
  p.base_seed = 9;
  p.jobs = jobs;
  return p;
}

TEST(Ensemble, IndependentOfWorkerCount) {
  for (Engine e : {Engine::kLanePriority, Engine::kSwapBased}) {
    const EnsembleResult one = run_ensemble(small(4, e, 1));
    const EnsembleResult four = run_ensemble(small(4, e, 4));
    EXPECT_EQ(one.taus, four.taus);
    EXPECT_EQ(one.mean_tau, four.mean_tau);
    EXPECT_EQ(one.std_tau, four.std_tau);
    EXPECT_EQ(one.mean_passes, four.mean_passes);
    EXPECT_EQ(one.histogram.interior, four.histogram.interior);
    EXPECT_EQ(csv_row(one), csv_row(four));
  }
}

TEST(Ensemble, AggregatesMatchPerRunRecomputation) {
  const EnsembleParams p = small(3, Engine::kLanePriority, 2);
  const EnsembleResult r = run_ensemble(p);
  const RoutingContext ctx(DeviceLayout(3, p.resolution));
  RunningStats tau;
  RunningStats passes;
  int max_passes = 0;
  for (int i = 0; i < p.iterations; ++i) {
    RoutingConfig cfg;
    cfg.density = p.density;
    const RoutingRun run = run_lane_priority(ctx, random_matching(18, p.base_seed + static_cast<std::uint64_t>(i)), cfg);
    EXPECT_EQ(r.taus[static_cast<std::size_t>(i)], run.tau);
    tau.add(run.tau);
    for (int x : run.junction_passes) {
      passes.add(x);
      max_passes = std::max(max_passes, x);
    }
  }
  EXPECT_NEAR(r.mean_tau, tau.mean(), 1e-12);
  EXPECT_NEAR(r.std_tau, tau.stddev(), 1e-12);
  EXPECT_NEAR(r.mean_passes, passes.mean(), 1e-12);
  EXPECT_EQ(r.max_passes, max_passes);
  EXPECT_EQ(r.qubit_count, 18);
  EXPECT_EQ(r.histogram.total(), 18L * p.iterations);
  EXPECT_EQ(r.failures, 0);
  EXPECT_EQ(r.violations, 0);
  EXPECT_EQ(r.below_lower_bound, 0);
}

TEST(Ensemble, SwapEventsAreHalfTheCounterMean) {
  const EnsembleResult r = run_ensemble(small(5, Engine::kSwapBased, 2));
  EXPECT_GT(r.mean_swaps_per_qubit, 0.0);
  EXPECT_NEAR(r.mean_swaps_per_qubit, 2.0 * r.mean_swap_events_per_qubit, 1e-12);
}

EnsembleResult fake(int m, double tau) {
  EnsembleResult r;
  r.params.device_size = m;
  r.qubit_count = 2 * m * m;
  r.mean_tau = tau;
  r.mean_lower_bound = tau - 1.0;
  r.mean_passes = 0.1 * m;
  r.mean_swaps_per_qubit = 0.2 * m;
  return r;
}

TEST(Fits, AxesAndOddEvenCheck) {
  std::vector<EnsembleResult> sweep;
  for (int m = 2; m <= 8; ++m) sweep.push_back(fake(m, 2.0 * m + (m % 2 == 1 ? 0.5 : 0.0)));
  EXPECT_NEAR(axis_value(sweep[1], FitAxis::kSqrtQubits), std::sqrt(18.0), 1e-12);
  EXPECT_EQ(axis_value(sweep[1], FitAxis::kDeviceSize), 3.0);
  EXPECT_NEAR(fit_lower_bound(sweep, FitAxis::kDeviceSize).intercept + 1.0,
              fit_tau(sweep, FitAxis::kDeviceSize).intercept, 1e-12);
  // mean_passes = 0.1 m = 0.1 sqrt(N / 2).
  EXPECT_NEAR(fit_pass_counts(sweep).slope, 0.1 / std::sqrt(2.0), 1e-12);
  EXPECT_NEAR(fit_swap_counts(sweep).slope, 0.2 / std::sqrt(2.0), 1e-12);
  EXPECT_TRUE(odd_size_above_neighbours(sweep, 3));
  EXPECT_TRUE(odd_size_above_neighbours(sweep, 5));
  EXPECT_TRUE(odd_size_above_neighbours(sweep, 7));
  EXPECT_THROW(odd_size_above_neighbours(sweep, 9), Error);
}

TEST(Output, CsvRowMatchesHeader) {
  const EnsembleResult r = run_ensemble(small(3, Engine::kLanePriority, 1));
  const auto count = [](const std::string& s) { return std::count(s.begin(), s.end(), ',') + 1; };
  EXPECT_EQ(count(csv_header()), count(csv_row(r)));
  EXPECT_EQ(csv_header().rfind("M,N,density,engine,swap_penalty,iters,mean_tau,std_tau,mean_passes,std_passes,mean_swaps,failures", 0), 0u);
  const auto j = nlohmann::json::parse(histogram_json({r}));
  ASSERT_EQ(j.at("points").size(), 1u);
  EXPECT_EQ(j["points"][0]["total"].get<long>(), r.histogram.total());
}

}  // namespace
}  // namespace iontrap
