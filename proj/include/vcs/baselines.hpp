#pragma once

#include "vcs/entropy.hpp"
#include "vcs/types.hpp"

#include <vector>

namespace vcs {

enum class BaselineKind { Random, EntropyRandom, StratifiedKdTree, PoissonDisk };

struct BaselineSpec {
  BaselineKind kind = BaselineKind::Random;
  Index leaf_target = 0;   // kd-tree: points per leaf, 0 = derive from count
  double r_min = 0.0;      // Poisson disk: hard-core radius
  std::uint64_t rng_seed = 0;
};

/// Weighted sampling without replacement; uniform when no PMF is given.
/// Ranks follow the draw order, weights are 1 / (n i(p)) normalized to
/// mean 1 (all ones for uniform).
SampleResult random_sample(const PointCloud& cloud, Index count, const ImportancePmf* pmf,
                           Rng& rng);

/// Stratified sampling: recursive median split on the widest axis down to
/// leaves of about n / count points, one uniform draw per leaf, trimmed to
/// `count` by dropping draws from the smallest leaves. leaf_of_sample, when
/// given, reports each draw's leaf id (for stratification checks).
SampleResult stratified_kdtree_sample(const PointCloud& cloud, Index count, Rng& rng,
                                      std::vector<Index>* leaf_of_sample = nullptr);

/// Dart throwing over the existing points in seeded random order: a point
/// is accepted iff no previously accepted point lies within r_min. The
/// sample count is emergent.
SampleResult poisson_disk_subset(const PointCloud& cloud, double r_min, Rng& rng);

}  // namespace vcs
