#pragma once

#include "vcs/grid.hpp"
#include "vcs/kernel.hpp"
#include "vcs/types.hpp"

#include <vector>

namespace vcs {

/// Normalized per-point selection probabilities. Samples drawn under a PMF
/// are re-weighted by 1 / i(p) downstream to stay representative.
struct ImportancePmf {
  enum class Source { Entropy, Custom };
  Array probabilities;
  Source source = Source::Custom;
};

/// Normalizes a non-negative weight vector into a PMF.
ImportancePmf make_custom_pmf(Array weights);

/// Shannon entropy (bits) of the kernel-weighted histogram of value_dim
/// over each point's neighborhood. Histograms are binned over the global
/// range of the dimension; a degenerate (constant) range gives zero
/// entropy everywhere.
Array local_entropy(const PointCloud& cloud, const UniformGrid& grid,
                    const CubicSplineKernel& kernel, Index value_dim, int n_bins);

/// Importance PMF from local entropy: per point the maximum entropy over
/// the selected dims is mapped through 2^H / n_bins and normalized to
/// sum 1.
ImportancePmf entropy_importance(const PointCloud& cloud, const UniformGrid& grid,
                                 const CubicSplineKernel& kernel, const std::vector<Index>& dims,
                                 int n_bins);

}  // namespace vcs
