#include "vcs/density.hpp"

#include "vcs/parallel.hpp"

#include <cmath>

namespace vcs {

namespace {

void check_setup(const PointCloud& cloud, const UniformGrid& grid,
                 const CubicSplineKernel& kernel) {
  if (grid.cell_size != kernel.support) {
    throw Error(ErrorCode::ConfigMismatch, "grid cell size must equal the kernel support");
  }
  if (grid.dim != cloud.dim()) {
    throw Error(ErrorCode::ConfigMismatch, "grid dimension does not match the cloud");
  }
}

}  // namespace

DensityField compute_point_density(const PointCloud& cloud, const UniformGrid& grid,
                                   const CubicSplineKernel& kernel, const Array* importance) {
  check_setup(cloud, grid, kernel);
  const Index n = cloud.size();
  const int d = grid.dim;
  if (importance && importance->size() != n) {
    throw Error(ErrorCode::ConfigMismatch, "importance PMF size does not match the cloud");
  }

  DensityField field;
  field.point_density.resize(n);
  field.sample_weight.assign(static_cast<std::size_t>(n), 0);
  field.counted.assign(static_cast<std::size_t>(n), 0);

  const double h = kernel.support;
  const double importance_floor = 1e-12 / static_cast<double>(n);
  parallel_for(n, [&](Index p) {
    double sum = 0.0;
    for_each_neighbor(grid, cloud.positions, cloud.positions.data() + p * d, h,
                      [&](Index, double sq) { sum += detail::cubic_spline(std::sqrt(sq) / h); });
    if (importance) {
      sum *= std::max((*importance)[p], importance_floor);
    }
    field.point_density[p] = sum;
  });
  return field;
}

void add_sample(DensityField& field, Index s, const PointCloud& cloud, const UniformGrid& grid,
                const CubicSplineKernel& kernel) {
  check_setup(cloud, grid, kernel);
  if (s < 0 || s >= field.size()) throw Error(ErrorCode::InvalidArgument, "sample id out of range");
  if (field.counted[static_cast<std::size_t>(s)]) {
    throw Error(ErrorCode::AlreadySampled, "sample " + std::to_string(s) + " already counted");
  }
  const double h = kernel.support;
  for_each_neighbor(grid, cloud.positions, cloud.positions.data() + s * grid.dim, h,
                    [&](Index p, double sq) {
                      field.sample_weight[static_cast<std::size_t>(p)] +=
                          quantize_weight(detail::cubic_spline(std::sqrt(sq) / h));
                    });
  field.counted[static_cast<std::size_t>(s)] = 1;
  ++field.sample_count;
}

void remove_sample(DensityField& field, Index s, const PointCloud& cloud, const UniformGrid& grid,
                   const CubicSplineKernel& kernel) {
  check_setup(cloud, grid, kernel);
  if (s < 0 || s >= field.size()) throw Error(ErrorCode::InvalidArgument, "sample id out of range");
  if (!field.counted[static_cast<std::size_t>(s)]) {
    throw Error(ErrorCode::NotSampled, "sample " + std::to_string(s) + " is not counted");
  }
  const double h = kernel.support;
  for_each_neighbor(grid, cloud.positions, cloud.positions.data() + s * grid.dim, h,
                    [&](Index p, double sq) {
                      field.sample_weight[static_cast<std::size_t>(p)] -=
                          quantize_weight(detail::cubic_spline(std::sqrt(sq) / h));
                    });
  field.counted[static_cast<std::size_t>(s)] = 0;
  --field.sample_count;
}

}  // namespace vcs
