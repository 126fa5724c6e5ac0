#pragma once

#include "vcs/types.hpp"

#include <vector>

namespace vcs {

/// Iterative trajectory sampling: a full void-and-cluster pass selects
/// trajectories in the first step; afterwards each step replaces ended
/// trajectories with the largest voids among the alive unsampled ones and
/// performs up to eps_t cluster/void exchanges (stopping the cluster
/// trajectory at the current step and starting the void one there).
/// Densities are rebuilt per step over the alive points only.
TrajectorySampleSet sample_trajectories(const TrajectoryDataset& data,
                                        const SamplerConfig& config, Index eps_t);

}  // namespace vcs
