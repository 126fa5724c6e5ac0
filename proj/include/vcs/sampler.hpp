#pragma once

#include "vcs/density.hpp"
#include "vcs/entropy.hpp"
#include "vcs/grid.hpp"
#include "vcs/kernel.hpp"
#include "vcs/types.hpp"

#include <cstdint>
#include <utility>
#include <vector>

namespace vcs {

/// Mutable state shared by the three sampling phases. rank(p) < next_rank
/// exactly when p is sampled; order maps ranks back to point ids.
struct SamplerState {
  DensityField field;
  std::vector<Index> rank;                // kNoRank for unsampled points
  std::vector<Index> order;               // point id per rank
  std::vector<double> insertion_density;  // sample density at the moment of addition
  double last_batch_max_density = 0.0;    // max insertion density of the last proper batch

  Index next_rank() const { return static_cast<Index>(order.size()); }
  Index size() const { return field.size(); }
};

SamplerState make_state(DensityField field);

/// Draws `count` distinct points uniformly at random; ranks follow the
/// draw order and densities are updated incrementally.
void initial_random(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                    const CubicSplineKernel& kernel, Index count, Rng& rng);

struct OptimizeOutcome {
  Index exchanges = 0;
  bool converged = false;  // false means the exchange cap (10 |S|) was hit
};

/// Exchanges the tightest cluster with the largest void until the removed
/// cluster is re-selected as the void (ties resolve to the lowest point
/// index). Ranks are swapped along with the exchange.
OptimizeOutcome optimize(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                         const CubicSplineKernel& kernel);

/// Greedy reference void filling: repeatedly add the unsampled point with
/// the smallest sample density until target_count samples exist.
SampleResult fill_voids_sequential(SamplerState& state, const PointCloud& cloud,
                                   const UniformGrid& grid, const CubicSplineKernel& kernel,
                                   Index target_count);

struct FillStats {
  Index rounds = 0;
  Index flagged = 0;
};

/// Batched void filling. Each round certifies a conflict-free prefix of
/// the candidates sorted by (density, index); extra rounds run until no
/// unsampled density is below the last proper round's maximum, which makes
/// the result identical to fill_voids_sequential, for every batch_max.
SampleResult fill_voids_batched(SamplerState& state, const PointCloud& cloud,
                                const UniformGrid& grid, const CubicSplineKernel& kernel,
                                Index target_count, Index batch_max, FillStats* stats = nullptr);

/// Maps a flat index over the strict lower triangle (row-major) back to
/// (row, column): i = floor(1/2 + sqrt(1/4 + 2k)), j = k - i(i-1)/2.
/// The square root must be evaluated in double precision.
std::pair<std::uint64_t, std::uint64_t> flat_index_to_pair(std::uint64_t k);

/// Full pipeline: kernel scaling, grid, optional entropy importance, point
/// densities, initial random phase, optimization, batched void filling
/// (or error-guided filling when an error threshold is configured), and
/// reciprocal-importance weights.
SampleResult sample(const PointCloud& cloud, const SamplerConfig& config);

/// Same pipeline with a caller-provided importance PMF
/// (SamplingMode::CustomImportance).
SampleResult sample(const PointCloud& cloud, const SamplerConfig& config,
                    const ImportancePmf& importance);

namespace detail {

struct BatchScratch {
  std::vector<std::pair<double, Index>> pool;        // unsampled (density, id)
  std::vector<std::pair<double, Index>> candidates;  // sorted round candidates
  std::vector<double> candidate_positions;
  std::vector<char> flags;
};

struct BatchRound {
  Index accepted = 0;
  double max_density = 0.0;
};

/// One certification round over at most candidate_cap candidates; accepted
/// ids are appended to accepted_out when given.
BatchRound batch_fill_round(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                            const CubicSplineKernel& kernel, Index candidate_cap,
                            BatchScratch& scratch, std::vector<Index>* accepted_out = nullptr,
                            FillStats* stats = nullptr);

/// Re-sorts the void-filling suffix (ranks >= start_rank) by
/// (insertion density, point index), the order the sequential greedy
/// produces.
void reorder_void_fill_suffix(SamplerState& state, Index start_rank);

/// Removes samples with rank >= target_count and shrinks the order.
void truncate_samples(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                      const CubicSplineKernel& kernel, Index target_count);

SampleResult make_result(const SamplerState& state, const CubicSplineKernel& kernel);

}  // namespace detail

}  // namespace vcs
