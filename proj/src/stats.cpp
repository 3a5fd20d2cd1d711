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

#include "iontrap/stats.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <iomanip>
#include <sstream>
#include <thread>

#include "iontrap/error.hpp"
#include "json.hpp"

namespace iontrap {

void RunningStats::add(double x) {
  ++n_;
  const double delta = x - mean_;
  mean_ += delta / static_cast<double>(n_);
  m2_ += delta * (x - mean_);
}

void RunningStats::merge(const RunningStats& other) {
  if (other.n_ == 0) return;
  if (n_ == 0) {
    *this = other;
    return;
  }
  const double total = static_cast<double>(n_ + other.n_);
  const double delta = other.mean_ - mean_;
  mean_ += delta * static_cast<double>(other.n_) / total;
  m2_ += other.m2_ + delta * delta * static_cast<double>(n_) * static_cast<double>(other.n_) / total;
  n_ += other.n_;
}

double RunningStats::variance() const {
  return n_ < 2 ? 0.0 : std::max(0.0, m2_ / static_cast<double>(n_ - 1));
}

double RunningStats::stddev() const { return std::sqrt(variance()); }

void PassHistogram::add(int passes, int zone_kind) {
  std::vector<long>* bins = &unassigned;
  if (zone_kind == static_cast<int>(ZoneKind::kInterior)) bins = &interior;
  if (zone_kind == static_cast<int>(ZoneKind::kExterior)) bins = &exterior;
  const auto bin = static_cast<std::size_t>(std::max(0, passes));
  for (std::vector<long>* v : {&interior, &exterior, &unassigned}) {
    if (v->size() <= bin) v->resize(bin + 1, 0);
  }
  ++(*bins)[bin];
}

long PassHistogram::total() const {
  long t = 0;
  for (const std::vector<long>* v : {&interior, &exterior, &unassigned}) {
    for (long c : *v) t += c;
  }
  return t;
}

double PassHistogram::tail_fraction(int threshold) const {
  const long all = total();
  if (all == 0) return 0.0;
  long tail = 0;
  for (const std::vector<long>* v : {&interior, &exterior, &unassigned}) {
    for (std::size_t b = static_cast<std::size_t>(std::max(0, threshold)); b < v->size(); ++b) {
      tail += (*v)[b];
    }
  }
  return static_cast<double>(tail) / static_cast<double>(all);
}

namespace {

void check_params(const EnsembleParams& p) {
  if (p.iterations < 1) fail(ErrorCode::kInvalidArgument, "iterations must be at least 1");
  if (p.jobs < 1) fail(ErrorCode::kInvalidArgument, "jobs must be at least 1");
  if (p.density < 1) fail(ErrorCode::kInvalidArgument, "density must be at least 1");
}

}  // namespace

EnsembleResult run_ensemble(const EnsembleParams& params) {
  check_params(params);
  const RoutingContext ctx(build_layout(params.device_size, params.resolution));
  return run_ensemble(ctx, params);
}

EnsembleResult run_ensemble(const RoutingContext& ctx, const EnsembleParams& params) {
  check_params(params);
  const DeviceLayout& layout = ctx.layout();
  if (layout.device_size() != params.device_size || layout.resolution() != params.resolution) {
    fail(ErrorCode::kInvalidArgument, "routing context does not match the ensemble parameters");
  }
  const int n = params.density * layout.device_size() * layout.device_size();
  if (params.density > max_density(layout)) {
    fail(ErrorCode::kOutOfRange, "density " + std::to_string(params.density) +
                                     " exceeds the seats available per junction");
  }
  if (n % 2 != 0) fail(ErrorCode::kInvalidArgument, "ion count must be even for a perfect matching");

  RoutingConfig config;
  config.density = params.density;
  config.swap_penalty = params.swap_penalty;
  config.step_cap = params.step_cap;

  // Workers fill disjoint slots; aggregation below walks them in seed order
  // so the result does not depend on the thread count.
  std::vector<RoutingRun> runs(static_cast<std::size_t>(params.iterations));
  auto work = [&](int worker, int workers) {
    for (int i = worker; i < params.iterations; i += workers) {
      const DepthOneCircuit circuit = random_matching(n, params.base_seed + static_cast<std::uint64_t>(i));
      runs[static_cast<std::size_t>(i)] = run_engine(params.engine, ctx, circuit, config);
    }
  };
  const int workers = std::min(params.jobs, params.iterations);
  if (workers <= 1) {
    work(0, 1);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        try {
          work(w, workers);
        } catch (...) {
          errors[static_cast<std::size_t>(w)] = std::current_exception();
        }
      });
    }
    for (std::thread& t : pool) t.join();
    for (const std::exception_ptr& e : errors) {
      if (e) std::rethrow_exception(e);
    }
  }

  EnsembleResult out;
  out.params = params;
  out.qubit_count = n;
  RunningStats tau, lb, passes, swaps;
  long swap_events = 0;
  for (const RoutingRun& run : runs) {
    out.round_count = run.round_count;
    tau.add(run.tau);
    lb.add(run.lower_bound_tau);
    out.taus.push_back(run.tau);
    out.lower_bounds.push_back(run.lower_bound_tau);
    if (!run.converged) ++out.failures;
    out.violations += run.violations;
    // Steps are integers and both sides share the resolution, so compare raw.
    if (std::lround(run.tau * layout.resolution()) < std::lround(run.lower_bound_tau * layout.resolution())) {
      ++out.below_lower_bound;
    }
    for (std::size_t q = 0; q < run.junction_passes.size(); ++q) {
      passes.add(run.junction_passes[q]);
      swaps.add(run.swaps[q]);
      out.max_passes = std::max(out.max_passes, run.junction_passes[q]);
      out.histogram.add(run.junction_passes[q], run.zone_kind[q]);
    }
    swap_events += run.swap_events;
  }
  out.mean_tau = tau.mean();
  out.std_tau = tau.stddev();
  out.mean_lower_bound = lb.mean();
  out.std_lower_bound = lb.stddev();
  out.mean_passes = passes.mean();
  out.std_passes = passes.stddev();
  out.mean_swaps_per_qubit = swaps.mean();
  out.std_swaps_per_qubit = swaps.stddev();
  out.mean_swap_events_per_qubit =
      static_cast<double>(swap_events) / (static_cast<double>(n) * params.iterations);
  return out;
}

FitResult fit_linear(const std::vector<std::pair<double, double>>& points) {
  const auto n = static_cast<double>(points.size());
  if (points.size() < 3) fail(ErrorCode::kInvalidArgument, "a linear fit needs at least 3 points");
  double mx = 0.0;
  double my = 0.0;
  for (const auto& [x, y] : points) {
    mx += x;
    my += y;
  }
  mx /= n;
  my /= n;
  double sxx = 0.0;
  double sxy = 0.0;
  for (const auto& [x, y] : points) {
    sxx += (x - mx) * (x - mx);
    sxy += (x - mx) * (y - my);
  }
  if (!(sxx > 0.0)) fail(ErrorCode::kInvalidArgument, "a linear fit needs two distinct x values");
  FitResult f;
  f.points = static_cast<int>(points.size());
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0.0;
  for (const auto& [x, y] : points) {
    const double r = y - (f.slope * x + f.intercept);
    ssr += r * r;
  }
  const double s2 = ssr / (n - 2.0);
  f.slope_se = std::sqrt(s2 / sxx);
  f.intercept_se = std::sqrt(s2 * (1.0 / n + mx * mx / sxx));
  return f;
}

double axis_value(const EnsembleResult& r, FitAxis axis) {
  return axis == FitAxis::kDeviceSize ? static_cast<double>(r.params.device_size)
                                      : std::sqrt(static_cast<double>(r.qubit_count));
}

namespace {

template <typename Get>
FitResult fit_sweep(const std::vector<EnsembleResult>& sweep, FitAxis axis, Get get) {
  std::vector<std::pair<double, double>> pts;
  pts.reserve(sweep.size());
  for (const EnsembleResult& r : sweep) pts.emplace_back(axis_value(r, axis), get(r));
  return fit_linear(pts);
}

}  // namespace

FitResult fit_tau(const std::vector<EnsembleResult>& sweep, FitAxis axis) {
  return fit_sweep(sweep, axis, [](const EnsembleResult& r) { return r.mean_tau; });
}

FitResult fit_lower_bound(const std::vector<EnsembleResult>& sweep, FitAxis axis) {
  return fit_sweep(sweep, axis, [](const EnsembleResult& r) { return r.mean_lower_bound; });
}

FitResult fit_pass_counts(const std::vector<EnsembleResult>& sweep) {
  return fit_sweep(sweep, FitAxis::kSqrtQubits, [](const EnsembleResult& r) { return r.mean_passes; });
}

FitResult fit_swap_counts(const std::vector<EnsembleResult>& sweep) {
  return fit_sweep(sweep, FitAxis::kSqrtQubits,
                   [](const EnsembleResult& r) { return r.mean_swaps_per_qubit; });
}

bool odd_size_above_neighbours(const std::vector<EnsembleResult>& sweep, int m) {
  const EnsembleResult* at[3] = {nullptr, nullptr, nullptr};
  for (const EnsembleResult& r : sweep) {
    const int d = r.params.device_size - (m - 1);
    if (d >= 0 && d <= 2) at[d] = &r;
  }
  if (!at[0] || !at[1] || !at[2]) {
    fail(ErrorCode::kInvalidArgument, "sweep lacks device sizes around " + std::to_string(m));
  }
  return at[1]->mean_tau > 0.5 * (at[0]->mean_tau + at[2]->mean_tau);
}

std::string csv_header() {
  return "M,N,density,engine,swap_penalty,iters,mean_tau,std_tau,mean_passes,std_passes,"
         "mean_swaps,failures,mean_lower_bound,std_lower_bound,max_passes,mean_swap_events,"
         "resolution,base_seed";
}

std::string csv_row(const EnsembleResult& r) {
  std::ostringstream os;
  os << std::setprecision(10);
  const EnsembleParams& p = r.params;
  os << p.device_size << ',' << r.qubit_count << ',' << p.density << ',' << to_string(p.engine) << ','
     << p.swap_penalty << ',' << p.iterations << ',' << r.mean_tau << ',' << r.std_tau << ','
     << r.mean_passes << ',' << r.std_passes << ',' << r.mean_swaps_per_qubit << ',' << r.failures
     << ',' << r.mean_lower_bound << ',' << r.std_lower_bound << ',' << r.max_passes << ','
     << r.mean_swap_events_per_qubit << ',' << p.resolution << ',' << p.base_seed;
  return os.str();
}

std::string histogram_json(const std::vector<EnsembleResult>& results) {
  nlohmann::json points = nlohmann::json::array();
  for (const EnsembleResult& r : results) {
    points.push_back({{"M", r.params.device_size},
                      {"N", r.qubit_count},
                      {"density", r.params.density},
                      {"engine", to_string(r.params.engine)},
                      {"iterations", r.params.iterations},
                      {"interior", r.histogram.interior},
                      {"exterior", r.histogram.exterior},
                      {"unassigned", r.histogram.unassigned},
                      {"total", r.histogram.total()}});
  }
  return nlohmann::json{{"points", points}}.dump(2);
}

}  // namespace iontrap
