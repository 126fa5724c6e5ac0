#include "vcs/trajectory.hpp"

#include "vcs/density.hpp"
#include "vcs/entropy.hpp"
#include "vcs/grid.hpp"
#include "vcs/kernel.hpp"
#include "vcs/parallel.hpp"
#include "vcs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vcs {

namespace {

struct OpenSegment {
  std::size_t segment_slot;  // index into the output segment list
};

PointCloud step_cloud(const TrajectoryDataset& data, const std::vector<Index>& alive, Index step) {
  const Index count = static_cast<Index>(alive.size());
  Matrix positions(count, data.dim);
  Matrix values(count, data.value_dims);
  for (Index k = 0; k < count; ++k) {
    const Trajectory& t = data.trajectories[static_cast<std::size_t>(alive[static_cast<std::size_t>(k)])];
    const Index row = step - t.start_step;
    positions.row(k) = t.positions.row(row);
    if (data.value_dims > 0) values.row(k) = t.values.row(row);
  }
  return make_point_cloud(std::move(positions), std::move(values));
}

const Array* step_importance(const PointCloud& cloud, const UniformGrid& grid,
                             const CubicSplineKernel& kernel, const SamplerConfig& config,
                             ImportancePmf& storage) {
  if (config.mode != SamplingMode::Entropy) return nullptr;
  std::vector<Index> dims(static_cast<std::size_t>(cloud.value_dims()));
  std::iota(dims.begin(), dims.end(), Index(0));
  storage = entropy_importance(cloud, grid, kernel, dims, config.histogram_bins);
  return &storage.probabilities;
}

}  // namespace

TrajectorySampleSet sample_trajectories(const TrajectoryDataset& data,
                                        const SamplerConfig& config, Index eps_t) {
  validate_or_throw(data);
  if (eps_t < 0) throw Error(ErrorCode::InvalidArgument, "eps_t must be non-negative");
  if (config.mode == SamplingMode::CustomImportance) {
    throw Error(ErrorCode::InvalidArgument, "trajectory sampling supports uniform and entropy modes");
  }
  const Index trajectory_count = static_cast<Index>(data.trajectories.size());
  const Index steps = data.num_steps;

  // Alive trajectory lists per step, in ascending trajectory order.
  std::vector<std::vector<Index>> alive_at(static_cast<std::size_t>(steps));
  for (Index t = 0; t < trajectory_count; ++t) {
    const Trajectory& traj = data.trajectories[static_cast<std::size_t>(t)];
    for (Index s = traj.start_step; s <= traj.end_step(); ++s) {
      alive_at[static_cast<std::size_t>(s)].push_back(t);
    }
  }
  if (alive_at[0].empty()) {
    throw Error(ErrorCode::EmptyDataset, "no trajectory is alive at the first step");
  }

  TrajectorySampleSet out;
  out.alive_sampled_per_step.assign(static_cast<std::size_t>(steps), 0);
  std::vector<Index> open_segment(static_cast<std::size_t>(trajectory_count), -1);
  std::vector<char> sampled(static_cast<std::size_t>(trajectory_count), 0);

  auto open = [&](Index traj, Index step) {
    sampled[static_cast<std::size_t>(traj)] = 1;
    open_segment[static_cast<std::size_t>(traj)] = static_cast<Index>(out.segments.size());
    out.segments.push_back({data.trajectories[static_cast<std::size_t>(traj)].id, step, step});
  };
  auto close = [&](Index traj, Index end_step) {
    const Index slot = open_segment[static_cast<std::size_t>(traj)];
    out.segments[static_cast<std::size_t>(slot)].end_step = end_step;
    open_segment[static_cast<std::size_t>(traj)] = -1;
    sampled[static_cast<std::size_t>(traj)] = 0;
  };

  // First step: full void-and-cluster selection.
  {
    const std::vector<Index>& alive = alive_at[0];
    if (config.target_count > static_cast<Index>(alive.size())) {
      throw Error(ErrorCode::TooManySamples, "target exceeds trajectories alive at the first step");
    }
    const PointCloud cloud = step_cloud(data, alive, 0);
    const SampleResult first = sample(cloud, config);
    for (Index local : first.indices_by_rank) {
      open(alive[static_cast<std::size_t>(local)], 0);
    }
    out.alive_sampled_per_step[0] = first.count();
  }

  for (Index step = 1; step < steps; ++step) {
    // Close segments of sampled trajectories that ended before this step.
    Index ended = 0;
    for (const Index t : alive_at[static_cast<std::size_t>(step - 1)]) {
      const Trajectory& traj = data.trajectories[static_cast<std::size_t>(t)];
      if (sampled[static_cast<std::size_t>(t)] && traj.end_step() < step) {
        close(t, traj.end_step());
        ++ended;
      }
    }

    const std::vector<Index>& alive = alive_at[static_cast<std::size_t>(step)];
    if (alive.empty()) {
      out.warnings.push_back("step " + std::to_string(step) + " has no alive trajectories");
      continue;
    }

    Index sampled_alive = 0;
    for (const Index t : alive) {
      if (sampled[static_cast<std::size_t>(t)]) ++sampled_alive;
    }

    const Index n_alive = static_cast<Index>(alive.size());
    const Index refill = std::min(ended, n_alive - sampled_alive);
    const Index expected = std::max<Index>(1, sampled_alive + refill);

    const PointCloud cloud = step_cloud(data, alive, step);
    const double kappa = config.base_kernel_size ? *config.base_kernel_size
                                                 : default_kernel_size(cloud);
    const double kappa_s =
        scaled_kernel_size(kappa, n_alive, expected, static_cast<int>(data.dim));
    const UniformGrid grid = build_grid(cloud, kappa_s);
    const CubicSplineKernel kernel = make_kernel(kappa_s);
    ImportancePmf pmf_storage;
    const Array* importance = step_importance(cloud, grid, kernel, config, pmf_storage);
    DensityField field = compute_point_density(cloud, grid, kernel, importance);
    for (Index local = 0; local < n_alive; ++local) {
      if (sampled[static_cast<std::size_t>(alive[static_cast<std::size_t>(local)])]) {
        add_sample(field, local, cloud, grid, kernel);
      }
    }

    auto local_density = [&field](Index local) { return sample_density_at(field, local); };
    auto is_sampled_local = [&field](Index local) {
      return field.counted[static_cast<std::size_t>(local)] != 0;
    };
    auto is_unsampled_local = [&field](Index local) {
      return !field.counted[static_cast<std::size_t>(local)];
    };

    // Replace ended trajectories with the largest voids.
    for (Index r = 0; r < refill; ++r) {
      const Extremum largest = argmin_filtered(n_alive, local_density, is_unsampled_local);
      add_sample(field, largest.index, cloud, grid, kernel);
      open(alive[static_cast<std::size_t>(largest.index)], step);
    }

    // Up to eps_t cluster/void exchanges; a trajectory stopped in this step
    // is not restarted within the same step.
    std::vector<char> stopped_here(static_cast<std::size_t>(n_alive), 0);
    for (Index e = 0; e < eps_t; ++e) {
      if (field.sample_count == 0 || field.sample_count == n_alive) break;
      const Extremum cluster = argmax_filtered(n_alive, local_density, is_sampled_local);
      remove_sample(field, cluster.index, cloud, grid, kernel);
      const Extremum largest = argmin_filtered(n_alive, local_density, [&](Index local) {
        return !field.counted[static_cast<std::size_t>(local)] &&
               !stopped_here[static_cast<std::size_t>(local)];
      });
      if (largest.index < 0 || largest.index == cluster.index) {
        add_sample(field, cluster.index, cloud, grid, kernel);
        break;  // distribution is locally optimal
      }
      add_sample(field, largest.index, cloud, grid, kernel);
      close(alive[static_cast<std::size_t>(cluster.index)], step);  // stopped prefix keeps t_i
      stopped_here[static_cast<std::size_t>(cluster.index)] = 1;
      open(alive[static_cast<std::size_t>(largest.index)], step);
    }

    Index now_sampled = 0;
    for (const Index t : alive) {
      if (sampled[static_cast<std::size_t>(t)]) ++now_sampled;
    }
    out.alive_sampled_per_step[static_cast<std::size_t>(step)] = now_sampled;
  }

  // Open segments run to the end of their trajectories.
  for (Index t = 0; t < trajectory_count; ++t) {
    if (open_segment[static_cast<std::size_t>(t)] >= 0) {
      close(t, data.trajectories[static_cast<std::size_t>(t)].end_step());
    }
  }
  return out;
}

}  // namespace vcs
