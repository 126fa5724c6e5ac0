#pragma once

#include "vcs/sampler.hpp"
#include "vcs/types.hpp"

#include <vector>

namespace vcs {

/// Right-continuous step function rising from 0 to 1: cumulative[k] is the
/// value on [positions[k], positions[k+1]). An empty function means the
/// local sample set was empty (EmptyLocalSample); callers treat its
/// distance as the full value range.
struct StepCdf {
  std::vector<double> positions;   // strictly increasing
  std::vector<double> cumulative;  // non-decreasing, last entry 1

  bool empty() const { return positions.empty(); }
};

/// Kernel-weighted empirical CDF of value_dim over the neighborhood of
/// point p. With a subset mask only flagged neighbors contribute (still
/// kernel-weighted, renormalized over the subset).
StepCdf weighted_cdf(const PointCloud& cloud, const UniformGrid& grid,
                     const CubicSplineKernel& kernel, Index p, Index value_dim,
                     const std::vector<char>* subset = nullptr);

/// L1 distance between two step CDFs, integrated exactly over the merged
/// breakpoints.
double wasserstein_1d(const StepCdf& f, const StepCdf& g);

/// Per-point, per-dimension local Wasserstein error between the full and
/// the sampled value distribution, reduced by the maximum over dimensions.
struct ErrorField {
  Matrix per_dim;  // n x m
  Array reduced;   // max over dims
  double mean = 0.0;
};

ErrorField error_field(const PointCloud& cloud, const UniformGrid& grid,
                       const CubicSplineKernel& kernel, const std::vector<Index>& samples);

ErrorField error_field(const PointCloud& cloud, const UniformGrid& grid,
                       const CubicSplineKernel& kernel, const std::vector<char>& sampled_flags);

/// Void filling in small batches with error tracking: after each batch the
/// errors of the added samples and their neighborhoods are recomputed, and
/// filling stops once the running mean drops below the configured
/// threshold (or target_count is reached, which sets threshold_reached =
/// false). Requires optimize() to have run and at least one value
/// dimension.
SampleResult error_guided_fill(SamplerState& state, const PointCloud& cloud,
                               const UniformGrid& grid, const CubicSplineKernel& kernel,
                               const SamplerConfig& config);

}  // namespace vcs
