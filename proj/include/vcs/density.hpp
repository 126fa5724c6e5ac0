#pragma once

#include "vcs/grid.hpp"
#include "vcs/kernel.hpp"
#include "vcs/types.hpp"

#include <vector>

namespace vcs {

/// Kernel weights are accumulated as 128-bit fixed-point integers
/// (quantum 2^-62). Integer sums commute and invert exactly, so the
/// incremental sample density is a pure function of the sample set:
/// add/remove round-trips are bit-exact and results cannot depend on
/// update order or worker count. The quantization error is below 1e-18
/// per term.
using WeightSum = __int128;

inline WeightSum quantize_weight(double k) {
  return static_cast<WeightSum>(std::llround(k * 0x1.0p62));
}

inline double dequantize_weight(WeightSum w) { return static_cast<double>(w) * 0x1.0p-62; }

/// Per-point densities: the static point density (optionally importance
/// modified) and the incrementally maintained kernel-weight sum over the
/// current sample set.
struct DensityField {
  Array point_density;                  // rho_P or rho'_P, strictly positive
  std::vector<WeightSum> sample_weight; // sum of K(|p - s|) over samples s
  std::vector<char> counted;            // sample membership
  Index sample_count = 0;

  Index size() const { return point_density.size(); }
};

/// Sample density rho_S(p): kernel-weighted sample count normalized by the
/// point density.
inline double sample_density_at(const DensityField& field, Index p) {
  return dequantize_weight(field.sample_weight[static_cast<std::size_t>(p)]) /
         field.point_density[p];
}

/// Gathers rho_P(p) = sum over neighbors of K(|p - p_i|) for every point.
/// When an importance PMF is given the density is modified to
/// rho_P(p) * i(p), with i clamped below by 1e-12 / n so the sample
/// density stays well defined. Requires grid cell size == kernel support.
DensityField compute_point_density(const PointCloud& cloud, const UniformGrid& grid,
                                   const CubicSplineKernel& kernel,
                                   const Array* importance = nullptr);

/// Adds sample s: weight sums of all neighbors of s grow by K(|p - s|).
void add_sample(DensityField& field, Index s, const PointCloud& cloud, const UniformGrid& grid,
                const CubicSplineKernel& kernel);

/// Removes sample s, exactly undoing add_sample.
void remove_sample(DensityField& field, Index s, const PointCloud& cloud, const UniformGrid& grid,
                   const CubicSplineKernel& kernel);

}  // namespace vcs
