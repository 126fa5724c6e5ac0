#pragma once

#include "vcs/types.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <vector>

namespace vcs {

/// Uniform grid over the bounding box of a point cloud. Occupied cells are
/// stored compactly in Morton (Z-curve) order; each bucket keeps its point
/// indices in ascending order. Queries of radius <= cell_size scan the 3^d
/// surrounding cells and distance-filter.
struct UniformGrid {
  double cell_size = 0.0;
  int dim = 0;
  int bits_per_axis = 0;
  RowVector origin;                      // bbox min of the source cloud
  std::array<Index, 4> cells_per_axis{}; // per-axis cell counts
  std::vector<std::uint64_t> cell_codes; // sorted Morton codes of occupied cells
  std::vector<Index> cell_offsets;       // size cell_codes.size() + 1
  std::vector<Index> point_ids;          // bucketed point indices

  std::array<Index, 4> cell_of(const double* pos) const;
  std::uint64_t code_of(const std::array<Index, 4>& cell) const;
};

/// Bins all points of the cloud into a grid with the given cell size.
/// Per-axis cell counts are capped to keep the Morton code inside 63 bits
/// (2^20 for d <= 3, 2^15 for d = 4); finer grids raise GridTooFine.
UniformGrid build_grid(const PointCloud& cloud, double cell_size);

/// Calls fn(point_id, squared_distance) for every point with
/// |query - point| < radius, in a fixed traversal order (cells in odometer
/// order, buckets in ascending point order). Requires radius <= cell_size.
template <class Fn>
void for_each_neighbor(const UniformGrid& grid, const Matrix& positions, const double* query,
                       double radius, Fn&& fn);

/// Ids of all points strictly within radius of the query position, sorted
/// ascending. Requires radius <= cell_size.
std::vector<Index> neighbors(const UniformGrid& grid, const Matrix& positions,
                             const RowVector& query, double radius);

namespace detail {

inline double squared_distance(const double* a, const double* b, int dim) {
  double acc = 0.0;
  for (int k = 0; k < dim; ++k) {
    const double diff = a[k] - b[k];
    acc += diff * diff;
  }
  return acc;
}

std::uint64_t interleave_bits(std::uint64_t v, int dim, int bits);

}  // namespace detail

template <class Fn>
void for_each_neighbor(const UniformGrid& grid, const Matrix& positions, const double* query,
                       double radius, Fn&& fn) {
  if (!(radius <= grid.cell_size)) {
    throw Error(ErrorCode::RadiusExceedsCell, "query radius exceeds grid cell size");
  }
  const int d = grid.dim;
  const double radius_sq = radius * radius;
  const std::array<Index, 4> center = grid.cell_of(query);

  std::array<Index, 4> lo{}, hi{}, cell{};
  for (int a = 0; a < d; ++a) {
    lo[a] = center[a] > 0 ? center[a] - 1 : 0;
    hi[a] = center[a] + 1 < grid.cells_per_axis[a] ? center[a] + 1 : grid.cells_per_axis[a] - 1;
    cell[a] = lo[a];
  }
  for (;;) {
    const std::uint64_t code = grid.code_of(cell);
    const auto it = std::lower_bound(grid.cell_codes.begin(), grid.cell_codes.end(), code);
    if (it != grid.cell_codes.end() && *it == code) {
      const Index bucket = static_cast<Index>(it - grid.cell_codes.begin());
      const Index begin = grid.cell_offsets[bucket];
      const Index end = grid.cell_offsets[bucket + 1];
      for (Index t = begin; t < end; ++t) {
        const Index id = grid.point_ids[t];
        const double sq = detail::squared_distance(positions.data() + id * d, query, d);
        if (sq < radius_sq) fn(id, sq);
      }
    }
    int axis = 0;
    while (axis < d) {
      if (cell[axis] < hi[axis]) {
        ++cell[axis];
        break;
      }
      cell[axis] = lo[axis];
      ++axis;
    }
    if (axis == d) break;
  }
}

}  // namespace vcs
