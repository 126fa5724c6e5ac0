#include "vcs/grid.hpp"

#include "vcs/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

namespace vcs {

namespace detail {

std::uint64_t interleave_bits(std::uint64_t v, int dim, int bits) {
  std::uint64_t out = 0;
  for (int b = 0; b < bits; ++b) {
    out |= ((v >> b) & 1ull) << (b * dim);
  }
  return out;
}

}  // namespace detail

std::array<Index, 4> UniformGrid::cell_of(const double* pos) const {
  std::array<Index, 4> cell{};
  for (int a = 0; a < dim; ++a) {
    const double rel = (pos[a] - origin[a]) / cell_size;
    Index c = static_cast<Index>(std::floor(rel));
    if (c < 0) c = 0;
    if (c >= cells_per_axis[a]) c = cells_per_axis[a] - 1;  // max boundary goes to the last cell
    cell[a] = c;
  }
  return cell;
}

std::uint64_t UniformGrid::code_of(const std::array<Index, 4>& cell) const {
  std::uint64_t code = 0;
  for (int a = 0; a < dim; ++a) {
    code |= detail::interleave_bits(static_cast<std::uint64_t>(cell[a]), dim, bits_per_axis) << a;
  }
  return code;
}

UniformGrid build_grid(const PointCloud& cloud, double cell_size) {
  if (!(cell_size > 0.0) || !std::isfinite(cell_size)) {
    throw Error(ErrorCode::InvalidArgument, "cell size must be positive and finite");
  }
  const Index n = cloud.size();
  const int d = static_cast<int>(cloud.dim());
  if (n < 1) throw Error(ErrorCode::EmptyDataset, "cannot build a grid over an empty cloud");
  if (d < 1 || d > 4) throw Error(ErrorCode::InvalidArgument, "grid supports 1 to 4 dimensions");

  UniformGrid grid;
  grid.cell_size = cell_size;
  grid.dim = d;
  grid.bits_per_axis = std::min(20, 63 / d);
  grid.origin = cloud.bbox_min;
  const Index max_cells = Index(1) << grid.bits_per_axis;
  for (int a = 0; a < d; ++a) {
    const double extent = cloud.bbox_max[a] - cloud.bbox_min[a];
    Index cells = static_cast<Index>(std::ceil(extent / cell_size));
    if (cells < 1) cells = 1;
    if (cells > max_cells) {
      throw Error(ErrorCode::GridTooFine, "axis " + std::to_string(a) + " needs " +
                                              std::to_string(cells) + " cells, cap is " +
                                              std::to_string(max_cells));
    }
    grid.cells_per_axis[a] = cells;
  }

  std::vector<std::uint64_t> codes(static_cast<std::size_t>(n));
  parallel_for(n, [&](Index i) {
    codes[static_cast<std::size_t>(i)] = grid.code_of(grid.cell_of(cloud.positions.data() + i * d));
  });

  grid.point_ids.resize(static_cast<std::size_t>(n));
  std::iota(grid.point_ids.begin(), grid.point_ids.end(), Index(0));
  std::sort(grid.point_ids.begin(), grid.point_ids.end(), [&codes](Index a, Index b) {
    const std::uint64_t ca = codes[static_cast<std::size_t>(a)];
    const std::uint64_t cb = codes[static_cast<std::size_t>(b)];
    return ca != cb ? ca < cb : a < b;
  });

  grid.cell_offsets.push_back(0);
  for (Index t = 0; t < n; ++t) {
    const std::uint64_t code = codes[static_cast<std::size_t>(grid.point_ids[static_cast<std::size_t>(t)])];
    if (grid.cell_codes.empty() || grid.cell_codes.back() != code) {
      if (!grid.cell_codes.empty()) grid.cell_offsets.push_back(t);
      grid.cell_codes.push_back(code);
    }
  }
  grid.cell_offsets.push_back(n);
  return grid;
}

std::vector<Index> neighbors(const UniformGrid& grid, const Matrix& positions,
                             const RowVector& query, double radius) {
  std::vector<Index> out;
  for_each_neighbor(grid, positions, query.data(), radius, [&out](Index id, double) {
    out.push_back(id);
  });
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace vcs
