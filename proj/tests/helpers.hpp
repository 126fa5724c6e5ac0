#pragma once

#include "vcs/density.hpp"
#include "vcs/grid.hpp"
#include "vcs/kernel.hpp"
#include "vcs/types.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

namespace vcs::test {

/// Uniform random cloud in [0, scale]^d with uniform random values in [0, 1].
inline PointCloud random_cloud(Index n, Index d, Index m, std::uint64_t seed, double scale = 1.0) {
  Rng rng(seed);
  Matrix positions(n, d);
  Matrix values(n, m);
  for (Index i = 0; i < n; ++i) {
    for (Index a = 0; a < d; ++a) positions(i, a) = scale * rng.next_double();
    for (Index v = 0; v < m; ++v) values(i, v) = rng.next_double();
  }
  return make_point_cloud(std::move(positions), std::move(values));
}

inline std::vector<Index> brute_force_neighbors(const PointCloud& cloud, const RowVector& query,
                                                double radius) {
  std::vector<Index> out;
  for (Index i = 0; i < cloud.size(); ++i) {
    if ((cloud.positions.row(i) - query).squaredNorm() < radius * radius) out.push_back(i);
  }
  return out;
}

/// Direct evaluation of the point density sum, independent of the grid.
inline double brute_force_point_density(const PointCloud& cloud, const CubicSplineKernel& kernel,
                                        Index p) {
  double sum = 0.0;
  for (Index i = 0; i < cloud.size(); ++i) {
    const double r = (cloud.positions.row(i) - cloud.positions.row(p)).norm();
    if (r < kernel.support) sum += eval(kernel, r);
  }
  return sum;
}

/// Direct evaluation of the sample density ratio.
inline double brute_force_sample_density(const PointCloud& cloud, const CubicSplineKernel& kernel,
                                         Index p, const std::vector<char>& sampled) {
  double numerator = 0.0;
  for (Index i = 0; i < cloud.size(); ++i) {
    if (!sampled[static_cast<std::size_t>(i)]) continue;
    const double r = (cloud.positions.row(i) - cloud.positions.row(p)).norm();
    if (r < kernel.support) numerator += eval(kernel, r);
  }
  return numerator / brute_force_point_density(cloud, kernel, p);
}

inline double min_pairwise_distance(const Matrix& positions, const std::vector<Index>& ids) {
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t a = 0; a < ids.size(); ++a) {
    for (std::size_t b = a + 1; b < ids.size(); ++b) {
      best = std::min(best, (positions.row(ids[a]) - positions.row(ids[b])).norm());
    }
  }
  return best;
}

inline double rel_diff(double a, double b) {
  const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
  return std::abs(a - b) / scale;
}

}  // namespace vcs::test
