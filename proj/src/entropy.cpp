#include "vcs/entropy.hpp"

#include "vcs/parallel.hpp"

#include <cmath>

namespace vcs {

ImportancePmf make_custom_pmf(Array weights) {
  if (weights.size() == 0) throw Error(ErrorCode::InvalidArgument, "PMF must not be empty");
  double total = 0.0;
  for (Index i = 0; i < weights.size(); ++i) {
    const double w = weights[i];
    if (!(w >= 0.0) || !std::isfinite(w)) {
      throw Error(ErrorCode::InvalidArgument, "PMF weights must be finite and non-negative");
    }
    total += w;
  }
  if (!(total > 0.0)) throw Error(ErrorCode::InvalidArgument, "PMF weights sum to zero");
  ImportancePmf pmf;
  pmf.probabilities = weights / total;
  pmf.source = ImportancePmf::Source::Custom;
  return pmf;
}

Array local_entropy(const PointCloud& cloud, const UniformGrid& grid,
                    const CubicSplineKernel& kernel, Index value_dim, int n_bins) {
  if (value_dim < 0 || value_dim >= cloud.value_dims()) {
    throw Error(ErrorCode::InvalidArgument, "value dimension out of range");
  }
  if (n_bins < 2) throw Error(ErrorCode::InvalidArgument, "need at least 2 histogram bins");

  const Index n = cloud.size();
  Array entropy(n);
  const double lo = cloud.values.col(value_dim).minCoeff();
  const double hi = cloud.values.col(value_dim).maxCoeff();
  if (hi == lo) {
    entropy.setZero();
    return entropy;
  }
  const double inv_range = 1.0 / (hi - lo);
  const double h = kernel.support;
  const int d = grid.dim;

  parallel_for_ranges(n, [&](Index begin, Index end) {
    std::vector<double> histogram(static_cast<std::size_t>(n_bins));
    for (Index p = begin; p < end; ++p) {
      std::fill(histogram.begin(), histogram.end(), 0.0);
      double total = 0.0;
      for_each_neighbor(grid, cloud.positions, cloud.positions.data() + p * d, h,
                        [&](Index q, double sq) {
                          const double w = detail::cubic_spline(std::sqrt(sq) / h);
                          int bin = static_cast<int>(static_cast<double>(n_bins) *
                                                     (cloud.values(q, value_dim) - lo) * inv_range);
                          if (bin < 0) bin = 0;
                          if (bin >= n_bins) bin = n_bins - 1;  // max value lands in the last bin
                          histogram[static_cast<std::size_t>(bin)] += w;
                          total += w;
                        });
      double sum = 0.0;
      for (int b = 0; b < n_bins; ++b) {
        const double mass = histogram[static_cast<std::size_t>(b)];
        if (mass > 0.0) {
          const double frequency = mass / total;
          sum -= frequency * std::log2(frequency);
        }
      }
      entropy[p] = sum;
    }
  });
  return entropy;
}

ImportancePmf entropy_importance(const PointCloud& cloud, const UniformGrid& grid,
                                 const CubicSplineKernel& kernel, const std::vector<Index>& dims,
                                 int n_bins) {
  if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "need at least one value dimension");
  const Index n = cloud.size();
  Array max_entropy = local_entropy(cloud, grid, kernel, dims.front(), n_bins);
  for (std::size_t k = 1; k < dims.size(); ++k) {
    max_entropy = max_entropy.max(local_entropy(cloud, grid, kernel, dims[k], n_bins));
  }

  // 2^H / n_bins, then normalize; the scale cancels but keeps the raw
  // values in a sane range.
  Array raw(n);
  for (Index p = 0; p < n; ++p) raw[p] = std::exp2(max_entropy[p]) / static_cast<double>(n_bins);
  double total = 0.0;
  for (Index p = 0; p < n; ++p) total += raw[p];
  ImportancePmf pmf;
  pmf.probabilities = raw / total;
  pmf.source = ImportancePmf::Source::Entropy;
  return pmf;
}

}  // namespace vcs
