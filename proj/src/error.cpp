#include "vcs/error.hpp"

#include "vcs/parallel.hpp"

#include <algorithm>
#include <cmath>

namespace vcs {

namespace {

struct Contributor {
  Index id;
  double weight;
};

struct ValueEntry {
  double value;
  double weight;
  bool sampled;
};

void gather_contributors(const PointCloud& cloud, const UniformGrid& grid,
                         const CubicSplineKernel& kernel, Index p,
                         std::vector<Contributor>& out) {
  out.clear();
  const double h = kernel.support;
  for_each_neighbor(grid, cloud.positions, cloud.positions.data() + p * grid.dim, h,
                    [&](Index q, double sq) {
                      out.push_back({q, detail::cubic_spline(std::sqrt(sq) / h)});
                    });
}

/// Exact L1 distance between the full and subset weighted CDFs of one
/// value dimension, sharing a single sorted pass. Returns the global range
/// width when no contributor is sampled.
double dimension_error(const std::vector<Contributor>& contributors, const PointCloud& cloud,
                       Index dim, const std::vector<char>& sampled, double range_width,
                       std::vector<ValueEntry>& scratch) {
  scratch.clear();
  double total_all = 0.0;
  double total_sub = 0.0;
  for (const Contributor& c : contributors) {
    const bool in_subset = sampled[static_cast<std::size_t>(c.id)] != 0;
    scratch.push_back({cloud.values(c.id, dim), c.weight, in_subset});
    total_all += c.weight;
    if (in_subset) total_sub += c.weight;
  }
  if (total_sub == 0.0) return range_width;  // EmptyLocalSample
  std::sort(scratch.begin(), scratch.end(),
            [](const ValueEntry& a, const ValueEntry& b) { return a.value < b.value; });

  double distance = 0.0;
  double cum_all = 0.0;
  double cum_sub = 0.0;
  std::size_t k = 0;
  while (k < scratch.size()) {
    const double v = scratch[k].value;
    while (k < scratch.size() && scratch[k].value == v) {
      cum_all += scratch[k].weight;
      if (scratch[k].sampled) cum_sub += scratch[k].weight;
      ++k;
    }
    if (k < scratch.size()) {
      distance += (scratch[k].value - v) * std::abs(cum_all / total_all - cum_sub / total_sub);
    }
  }
  return distance;
}

Array global_range_widths(const PointCloud& cloud) {
  const Index m = cloud.value_dims();
  Array widths(m);
  for (Index dim = 0; dim < m; ++dim) {
    widths[dim] = cloud.values.col(dim).maxCoeff() - cloud.values.col(dim).minCoeff();
  }
  return widths;
}

}  // namespace

StepCdf weighted_cdf(const PointCloud& cloud, const UniformGrid& grid,
                     const CubicSplineKernel& kernel, Index p, Index value_dim,
                     const std::vector<char>* subset) {
  if (value_dim < 0 || value_dim >= cloud.value_dims()) {
    throw Error(ErrorCode::InvalidArgument, "value dimension out of range");
  }
  std::vector<Contributor> contributors;
  gather_contributors(cloud, grid, kernel, p, contributors);

  std::vector<std::pair<double, double>> weighted;  // (value, weight)
  double total = 0.0;
  for (const Contributor& c : contributors) {
    if (subset && !(*subset)[static_cast<std::size_t>(c.id)]) continue;
    weighted.emplace_back(cloud.values(c.id, value_dim), c.weight);
    total += c.weight;
  }
  StepCdf cdf;
  if (total == 0.0) return cdf;  // EmptyLocalSample
  std::sort(weighted.begin(), weighted.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });
  double cum = 0.0;
  for (std::size_t k = 0; k < weighted.size(); ++k) {
    cum += weighted[k].second;
    if (k + 1 == weighted.size() || weighted[k + 1].first != weighted[k].first) {
      cdf.positions.push_back(weighted[k].first);
      cdf.cumulative.push_back(cum / total);
    }
  }
  if (!cdf.cumulative.empty()) cdf.cumulative.back() = 1.0;  // guard rounding drift
  return cdf;
}

double wasserstein_1d(const StepCdf& f, const StepCdf& g) {
  if (f.empty() && g.empty()) return 0.0;
  double distance = 0.0;
  double fv = 0.0, gv = 0.0;
  std::size_t fi = 0, gi = 0;
  double x = 0.0;
  bool have_x = false;
  while (fi < f.positions.size() || gi < g.positions.size()) {
    double next;
    if (gi >= g.positions.size()) {
      next = f.positions[fi];
    } else if (fi >= f.positions.size()) {
      next = g.positions[gi];
    } else {
      next = std::min(f.positions[fi], g.positions[gi]);
    }
    if (have_x) distance += (next - x) * std::abs(fv - gv);
    while (fi < f.positions.size() && f.positions[fi] == next) fv = f.cumulative[fi++];
    while (gi < g.positions.size() && g.positions[gi] == next) gv = g.cumulative[gi++];
    x = next;
    have_x = true;
  }
  return distance;
}

ErrorField error_field(const PointCloud& cloud, const UniformGrid& grid,
                       const CubicSplineKernel& kernel, const std::vector<char>& sampled_flags) {
  const Index n = cloud.size();
  const Index m = cloud.value_dims();
  if (m == 0) throw Error(ErrorCode::NoValueDimensions, "error measure needs value dimensions");
  if (static_cast<Index>(sampled_flags.size()) != n) {
    throw Error(ErrorCode::ConfigMismatch, "sample flag count does not match the cloud");
  }
  const Array widths = global_range_widths(cloud);

  ErrorField field;
  field.per_dim.resize(n, m);
  field.reduced.resize(n);
  parallel_for_ranges(n, [&](Index begin, Index end) {
    std::vector<Contributor> contributors;
    std::vector<ValueEntry> scratch;
    for (Index p = begin; p < end; ++p) {
      gather_contributors(cloud, grid, kernel, p, contributors);
      double reduced = 0.0;
      for (Index dim = 0; dim < m; ++dim) {
        const double err =
            dimension_error(contributors, cloud, dim, sampled_flags, widths[dim], scratch);
        field.per_dim(p, dim) = err;
        reduced = std::max(reduced, err);
      }
      field.reduced[p] = reduced;
    }
  });
  double sum = 0.0;
  for (Index p = 0; p < n; ++p) sum += field.reduced[p];
  field.mean = sum / static_cast<double>(n);
  return field;
}

ErrorField error_field(const PointCloud& cloud, const UniformGrid& grid,
                       const CubicSplineKernel& kernel, const std::vector<Index>& samples) {
  std::vector<char> flags(static_cast<std::size_t>(cloud.size()), 0);
  for (Index s : samples) {
    if (s < 0 || s >= cloud.size()) {
      throw Error(ErrorCode::InvalidArgument, "sample index out of range");
    }
    flags[static_cast<std::size_t>(s)] = 1;
  }
  return error_field(cloud, grid, kernel, flags);
}

SampleResult error_guided_fill(SamplerState& state, const PointCloud& cloud,
                               const UniformGrid& grid, const CubicSplineKernel& kernel,
                               const SamplerConfig& config) {
  if (!config.error_threshold) {
    throw Error(ErrorCode::InvalidArgument, "error_guided_fill needs an error threshold");
  }
  const double threshold = *config.error_threshold;
  if (!(threshold >= 0.0)) {
    throw Error(ErrorCode::InvalidArgument, "error threshold must be non-negative");
  }
  const Index n = cloud.size();
  const Index m = cloud.value_dims();
  if (m == 0) throw Error(ErrorCode::NoValueDimensions, "error measure needs value dimensions");
  const Index target = config.target_count;
  if (target > n) throw Error(ErrorCode::TooManySamples, "target exceeds point count");
  if (config.error_batch < 1) throw Error(ErrorCode::InvalidArgument, "error_batch must be positive");

  const Array widths = global_range_widths(cloud);
  const std::vector<char>& flags = state.field.counted;

  // Full error pass over the optimized initial samples.
  Array reduced(n);
  parallel_for_ranges(n, [&](Index begin, Index end) {
    std::vector<Contributor> contributors;
    std::vector<ValueEntry> scratch;
    for (Index p = begin; p < end; ++p) {
      gather_contributors(cloud, grid, kernel, p, contributors);
      double worst = 0.0;
      for (Index dim = 0; dim < m; ++dim) {
        worst = std::max(worst, dimension_error(contributors, cloud, dim, flags, widths[dim], scratch));
      }
      reduced[p] = worst;
    }
  });
  double error_sum = 0.0;
  for (Index p = 0; p < n; ++p) error_sum += reduced[p];
  // The running sum is maintained by deltas; clamp against rounding drift
  // below zero (the mean is non-negative by construction).
  const auto running_mean = [&error_sum, n] {
    return std::max(0.0, error_sum / static_cast<double>(n));
  };

  ErrorGuidedStats stats;
  stats.mean_history.push_back(running_mean());

  const Index start_rank = state.next_rank();
  detail::BatchScratch scratch;
  std::vector<Index> accepted;
  std::vector<Index> affected;
  std::vector<double> updated;
  for (;;) {
    const double mean = running_mean();
    if (mean < threshold) {
      stats.threshold_reached = true;
      break;
    }
    if (state.next_rank() >= target) {
      stats.threshold_reached = false;  // ThresholdNotReached
      break;
    }
    accepted.clear();
    const Index cap = std::min(config.error_batch, target - state.next_rank());
    detail::batch_fill_round(state, cloud, grid, kernel, cap, scratch, &accepted);
    if (accepted.empty()) break;

    affected.clear();
    for (Index s : accepted) {
      for_each_neighbor(grid, cloud.positions, cloud.positions.data() + s * grid.dim,
                        kernel.support, [&](Index p, double) { affected.push_back(p); });
    }
    std::sort(affected.begin(), affected.end());
    affected.erase(std::unique(affected.begin(), affected.end()), affected.end());

    updated.assign(affected.size(), 0.0);
    parallel_for_ranges(static_cast<Index>(affected.size()), [&](Index begin, Index end) {
      std::vector<Contributor> contributors;
      std::vector<ValueEntry> value_scratch;
      for (Index k = begin; k < end; ++k) {
        const Index p = affected[static_cast<std::size_t>(k)];
        gather_contributors(cloud, grid, kernel, p, contributors);
        double worst = 0.0;
        for (Index dim = 0; dim < m; ++dim) {
          worst = std::max(worst,
                           dimension_error(contributors, cloud, dim, flags, widths[dim], value_scratch));
        }
        updated[static_cast<std::size_t>(k)] = worst;
      }
    });
    for (std::size_t k = 0; k < affected.size(); ++k) {
      const Index p = affected[k];
      error_sum += updated[k] - reduced[p];
      reduced[p] = updated[k];
    }
    stats.mean_history.push_back(running_mean());
  }

  detail::reorder_void_fill_suffix(state, start_rank);
  SampleResult result = detail::make_result(state, kernel);
  stats.final_mean_error = running_mean();
  stats.sampling_fraction = static_cast<double>(state.next_rank()) / static_cast<double>(n);
  result.error_guided = stats;
  return result;
}

}  // namespace vcs
