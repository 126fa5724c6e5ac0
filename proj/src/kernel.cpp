#include "vcs/kernel.hpp"

namespace vcs {

CubicSplineKernel make_kernel(double support) {
  if (!(support > 0.0) || !std::isfinite(support)) {
    throw Error(ErrorCode::InvalidArgument, "kernel support must be positive and finite");
  }
  return CubicSplineKernel{support};
}

double scaled_kernel_size(double kappa, Index total_count, Index sample_count, int dim) {
  if (sample_count == 0) throw Error(ErrorCode::InvalidArgument, "sample count must be positive");
  if (sample_count < 0 || total_count < sample_count) {
    throw Error(ErrorCode::InvalidArgument, "need total_count >= sample_count >= 1");
  }
  if (!(kappa > 0.0)) throw Error(ErrorCode::InvalidArgument, "kappa must be positive");
  if (dim < 1) throw Error(ErrorCode::InvalidArgument, "dimension must be positive");
  const double ratio = static_cast<double>(total_count) / static_cast<double>(sample_count);
  return kappa * std::pow(ratio, 1.0 / static_cast<double>(dim));
}

}  // namespace vcs
