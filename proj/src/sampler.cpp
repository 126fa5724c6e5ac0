#include "vcs/sampler.hpp"

#include "vcs/error.hpp"
#include "vcs/parallel.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <numeric>

namespace vcs {

namespace {

bool density_less(const std::pair<double, Index>& a, const std::pair<double, Index>& b) {
  return a.first != b.first ? a.first < b.first : a.second < b.second;
}

Extremum min_unsampled_density(const SamplerState& state) {
  const DensityField& field = state.field;
  return argmin_filtered(
      field.size(), [&field](Index i) { return sample_density_at(field, i); },
      [&field](Index i) { return !field.counted[static_cast<std::size_t>(i)]; });
}

void record_sample(SamplerState& state, Index id, double density_at_insertion) {
  state.rank[static_cast<std::size_t>(id)] = state.next_rank();
  state.order.push_back(id);
  state.insertion_density.push_back(density_at_insertion);
}

}  // namespace

SamplerState make_state(DensityField field) {
  SamplerState state;
  const Index n = field.size();
  state.field = std::move(field);
  state.rank.assign(static_cast<std::size_t>(n), kNoRank);
  return state;
}

void initial_random(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                    const CubicSplineKernel& kernel, Index count, Rng& rng) {
  const Index n = state.size();
  if (state.next_rank() != 0 || state.field.sample_count != 0) {
    throw Error(ErrorCode::InvalidArgument, "initial_random needs an empty sample set");
  }
  if (count > n) throw Error(ErrorCode::TooManySamples, "cannot draw more samples than points");
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one initial sample");

  // Partial Fisher-Yates: distinct draws, deterministic in the seed.
  std::vector<Index> ids(static_cast<std::size_t>(n));
  std::iota(ids.begin(), ids.end(), Index(0));
  for (Index t = 0; t < count; ++t) {
    const Index j = t + static_cast<Index>(rng.next_below(static_cast<std::uint64_t>(n - t)));
    std::swap(ids[static_cast<std::size_t>(t)], ids[static_cast<std::size_t>(j)]);
    const Index pick = ids[static_cast<std::size_t>(t)];
    record_sample(state, pick, sample_density_at(state.field, pick));
    add_sample(state.field, pick, cloud, grid, kernel);
  }
}

OptimizeOutcome optimize(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                         const CubicSplineKernel& kernel) {
  if (state.next_rank() == 0) {
    throw Error(ErrorCode::InvalidArgument, "optimize needs initial samples");
  }
  const DensityField& field = state.field;
  const Index cap = 10 * state.next_rank();
  for (Index iter = 0; iter < cap; ++iter) {
    const Extremum cluster = argmax_filtered(
        field.size(), [&field](Index i) { return sample_density_at(field, i); },
        [&field](Index i) { return field.counted[static_cast<std::size_t>(i)] != 0; });
    const Index tightest = cluster.index;
    remove_sample(state.field, tightest, cloud, grid, kernel);
    const Extremum void_point = min_unsampled_density(state);
    const Index largest = void_point.index;
    if (largest == tightest) {
      add_sample(state.field, tightest, cloud, grid, kernel);  // no net change
      return {iter, true};
    }
    const Index slot = state.rank[static_cast<std::size_t>(tightest)];
    state.rank[static_cast<std::size_t>(tightest)] = kNoRank;
    state.rank[static_cast<std::size_t>(largest)] = slot;
    state.order[static_cast<std::size_t>(slot)] = largest;
    state.insertion_density[static_cast<std::size_t>(slot)] = void_point.value;
    add_sample(state.field, largest, cloud, grid, kernel);
  }
  return {cap, false};
}

SampleResult fill_voids_sequential(SamplerState& state, const PointCloud& cloud,
                                   const UniformGrid& grid, const CubicSplineKernel& kernel,
                                   Index target_count) {
  const Index n = state.size();
  if (target_count > n) throw Error(ErrorCode::TooManySamples, "target exceeds point count");
  if (target_count < state.next_rank()) {
    throw Error(ErrorCode::InvalidArgument, "target below current sample count");
  }
  while (state.next_rank() < target_count) {
    const Extremum void_point = min_unsampled_density(state);
    record_sample(state, void_point.index, void_point.value);
    add_sample(state.field, void_point.index, cloud, grid, kernel);
  }
  return detail::make_result(state, kernel);
}

namespace detail {

BatchRound batch_fill_round(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                            const CubicSplineKernel& kernel, Index candidate_cap,
                            BatchScratch& scratch, std::vector<Index>* accepted_out,
                            FillStats* stats) {
  const Index n = state.size();
  const int d = grid.dim;
  const DensityField& field = state.field;

  scratch.pool.clear();
  for (Index i = 0; i < n; ++i) {
    if (!field.counted[static_cast<std::size_t>(i)]) {
      scratch.pool.emplace_back(sample_density_at(field, i), i);
    }
  }
  const Index pool_size = static_cast<Index>(scratch.pool.size());
  const Index count = std::min(candidate_cap, pool_size);
  BatchRound round;
  if (count <= 0) return round;
  if (count < pool_size) {
    std::nth_element(scratch.pool.begin(), scratch.pool.begin() + count, scratch.pool.end(),
                     density_less);
  }
  scratch.candidates.assign(scratch.pool.begin(), scratch.pool.begin() + count);
  std::sort(scratch.candidates.begin(), scratch.candidates.end(), density_less);

  scratch.candidate_positions.resize(static_cast<std::size_t>(count * d));
  for (Index i = 0; i < count; ++i) {
    const Index id = scratch.candidates[static_cast<std::size_t>(i)].second;
    std::copy_n(cloud.positions.data() + id * d, d,
                scratch.candidate_positions.data() + i * d);
  }

  // Conflict flags over the strict lower triangle, streamed through the
  // flat index. The adjacency matrix itself is never materialized.
  scratch.flags.assign(static_cast<std::size_t>(count), 0);
  const double conflict_sq = kernel.support * kernel.support;
  const std::uint64_t pair_count =
      static_cast<std::uint64_t>(count) * static_cast<std::uint64_t>(count - 1) / 2;
  const double* cpos = scratch.candidate_positions.data();
  char* flags = scratch.flags.data();
  parallel_for_ranges(static_cast<Index>(pair_count), [&](Index begin, Index end) {
    auto [i, j] = flat_index_to_pair(static_cast<std::uint64_t>(begin));
    for (std::uint64_t k = static_cast<std::uint64_t>(begin); k < static_cast<std::uint64_t>(end);) {
      if (std::atomic_ref<char>(flags[i]).load(std::memory_order_relaxed)) {
        // Row already flagged; skip the rest of it.
        k = i * (i + 1) / 2;
        ++i;
        j = 0;
        continue;
      }
      if (detail::squared_distance(cpos + i * static_cast<std::uint64_t>(d),
                                   cpos + j * static_cast<std::uint64_t>(d), d) < conflict_sq) {
        std::atomic_ref<char>(flags[i]).store(1, std::memory_order_relaxed);
      }
      ++k;
      if (++j == i) {
        ++i;
        j = 0;
      }
    }
  });

  round.max_density = -std::numeric_limits<double>::infinity();
  for (Index i = 0; i < count; ++i) {
    if (scratch.flags[static_cast<std::size_t>(i)]) {
      if (stats) ++stats->flagged;
      continue;
    }
    const auto [density, id] = scratch.candidates[static_cast<std::size_t>(i)];
    record_sample(state, id, density);
    add_sample(state.field, id, cloud, grid, kernel);
    if (accepted_out) accepted_out->push_back(id);
    round.max_density = std::max(round.max_density, density);
    ++round.accepted;
  }
  if (stats) ++stats->rounds;
  return round;
}

void reorder_void_fill_suffix(SamplerState& state, Index start_rank) {
  const Index total = state.next_rank();
  std::vector<std::pair<double, Index>> suffix;
  suffix.reserve(static_cast<std::size_t>(total - start_rank));
  for (Index t = start_rank; t < total; ++t) {
    suffix.emplace_back(state.insertion_density[static_cast<std::size_t>(t)],
                        state.order[static_cast<std::size_t>(t)]);
  }
  std::sort(suffix.begin(), suffix.end(), density_less);
  for (Index t = start_rank; t < total; ++t) {
    const auto [density, id] = suffix[static_cast<std::size_t>(t - start_rank)];
    state.order[static_cast<std::size_t>(t)] = id;
    state.insertion_density[static_cast<std::size_t>(t)] = density;
    state.rank[static_cast<std::size_t>(id)] = t;
  }
}

void truncate_samples(SamplerState& state, const PointCloud& cloud, const UniformGrid& grid,
                      const CubicSplineKernel& kernel, Index target_count) {
  for (Index t = state.next_rank(); t-- > target_count;) {
    const Index id = state.order[static_cast<std::size_t>(t)];
    remove_sample(state.field, id, cloud, grid, kernel);
    state.rank[static_cast<std::size_t>(id)] = kNoRank;
  }
  state.order.resize(static_cast<std::size_t>(target_count));
  state.insertion_density.resize(static_cast<std::size_t>(target_count));
}

SampleResult make_result(const SamplerState& state, const CubicSplineKernel& kernel) {
  SampleResult result;
  result.indices_by_rank = state.order;
  result.insertion_density =
      Eigen::Map<const Array>(state.insertion_density.data(),
                              static_cast<Index>(state.insertion_density.size()));
  result.weights = Array::Ones(state.next_rank());
  result.kernel_size_used = kernel.support;
  return result;
}

}  // namespace detail

SampleResult fill_voids_batched(SamplerState& state, const PointCloud& cloud,
                                const UniformGrid& grid, const CubicSplineKernel& kernel,
                                Index target_count, Index batch_max, FillStats* stats) {
  const Index n = state.size();
  if (target_count > n) throw Error(ErrorCode::TooManySamples, "target exceeds point count");
  if (target_count < state.next_rank()) {
    throw Error(ErrorCode::InvalidArgument, "target below current sample count");
  }
  if (batch_max < 1) throw Error(ErrorCode::InvalidArgument, "batch_max must be positive");
  const Index start_rank = state.next_rank();
  if (target_count == start_rank) return detail::make_result(state, kernel);

  detail::BatchScratch scratch;
  bool crossed = false;
  double proper_max = 0.0;
  for (;;) {
    if (state.field.sample_count == n) break;
    if (crossed && min_unsampled_density(state).value > proper_max) break;
    const detail::BatchRound round =
        detail::batch_fill_round(state, cloud, grid, kernel, batch_max, scratch, nullptr, stats);
    if (round.accepted == 0) break;  // cannot happen: the first candidate is never flagged
    if (!crossed && state.next_rank() >= target_count) {
      crossed = true;
      proper_max = round.max_density;
      state.last_batch_max_density = proper_max;
    }
  }

  detail::reorder_void_fill_suffix(state, start_rank);
  detail::truncate_samples(state, cloud, grid, kernel, target_count);
  return detail::make_result(state, kernel);
}

std::pair<std::uint64_t, std::uint64_t> flat_index_to_pair(std::uint64_t k) {
  const double root = std::sqrt(0.25 + 2.0 * static_cast<double>(k));
  const std::uint64_t i = static_cast<std::uint64_t>(std::floor(0.5 + root));
  const std::uint64_t j = k - i * (i - 1) / 2;
  return {i, j};
}

namespace {

SampleResult sample_impl(const PointCloud& cloud, const SamplerConfig& config,
                         const ImportancePmf* custom) {
  validate_or_throw(cloud);
  const Index n = cloud.size();
  const Index target = config.target_count;
  if (target < 1) throw Error(ErrorCode::InvalidArgument, "target_count must be positive");
  if (target > n) throw Error(ErrorCode::TooManySamples, "target_count exceeds point count");
  if (!(config.initial_fraction > 0.0) || config.initial_fraction > 1.0) {
    throw Error(ErrorCode::InvalidArgument, "initial_fraction must be in (0, 1]");
  }

  const double kappa = config.base_kernel_size ? *config.base_kernel_size
                                               : default_kernel_size(cloud);
  const double kappa_s =
      scaled_kernel_size(kappa, n, target, static_cast<int>(cloud.dim()));
  const UniformGrid grid = build_grid(cloud, kappa_s);
  const CubicSplineKernel kernel = make_kernel(kappa_s);

  ImportancePmf entropy_pmf;
  const Array* importance = nullptr;
  switch (config.mode) {
    case SamplingMode::Uniform:
      break;
    case SamplingMode::Entropy: {
      std::vector<Index> dims(static_cast<std::size_t>(cloud.value_dims()));
      std::iota(dims.begin(), dims.end(), Index(0));
      entropy_pmf = entropy_importance(cloud, grid, kernel, dims, config.histogram_bins);
      importance = &entropy_pmf.probabilities;
      break;
    }
    case SamplingMode::CustomImportance:
      if (!custom) {
        throw Error(ErrorCode::InvalidArgument, "custom-importance mode needs a PMF");
      }
      if (custom->probabilities.size() != n) {
        throw Error(ErrorCode::ConfigMismatch, "importance PMF size does not match the cloud");
      }
      importance = &custom->probabilities;
      break;
  }

  SamplerState state = make_state(compute_point_density(cloud, grid, kernel, importance));
  Rng rng(config.rng_seed);
  const Index initial_count = std::min<Index>(
      target, static_cast<Index>(std::ceil(config.initial_fraction * static_cast<double>(target))));
  initial_random(state, cloud, grid, kernel, initial_count, rng);
  optimize(state, cloud, grid, kernel);

  SampleResult result = config.error_threshold
                            ? error_guided_fill(state, cloud, grid, kernel, config)
                            : fill_voids_batched(state, cloud, grid, kernel, target,
                                                 config.batch_max);

  if (importance) {
    const Index taken = result.count();
    const double floor = 1e-12 / static_cast<double>(n);  // same clamp as the modified density
    Array weights(taken);
    for (Index t = 0; t < taken; ++t) {
      const double p = (*importance)[result.indices_by_rank[static_cast<std::size_t>(t)]];
      weights[t] = 1.0 / (static_cast<double>(n) * std::max(p, floor));
    }
    weights *= static_cast<double>(taken) / weights.sum();  // normalize to mean 1
    result.weights = std::move(weights);
  }
  result.config_echo = config;
  return result;
}

}  // namespace

SampleResult sample(const PointCloud& cloud, const SamplerConfig& config) {
  if (config.mode == SamplingMode::CustomImportance) {
    throw Error(ErrorCode::InvalidArgument, "custom-importance mode needs a PMF");
  }
  return sample_impl(cloud, config, nullptr);
}

SampleResult sample(const PointCloud& cloud, const SamplerConfig& config,
                    const ImportancePmf& importance) {
  if (config.mode != SamplingMode::CustomImportance) {
    throw Error(ErrorCode::InvalidArgument, "PMF overload requires custom-importance mode");
  }
  return sample_impl(cloud, config, &importance);
}

}  // namespace vcs
