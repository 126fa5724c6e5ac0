#pragma once

#include "vcs/types.hpp"

#include <cmath>

namespace vcs {

/// Compact radially symmetric smoothing kernel (cubic B-spline) normalized
/// so that K(0) = 1. The kernel vanishes for r >= support, which makes a
/// 3^d-cell grid query with cell size = support complete.
struct CubicSplineKernel {
  double support = 1.0;  // h > 0
};

CubicSplineKernel make_kernel(double support);

namespace detail {

inline double cubic_spline(double q) {
  if (q >= 1.0) return 0.0;
  if (q < 0.5) return 1.0 + 6.0 * q * q * (q - 1.0);  // 1 - 6q^2 + 6q^3
  const double u = 1.0 - q;
  return 2.0 * u * u * u;
}

}  // namespace detail

/// K(r) with r >= 0. Monotone non-increasing, K(0) = 1, K(r) = 0 for
/// r >= support.
inline double eval(const CubicSplineKernel& kernel, double r) {
  if (!(r >= 0.0) || !std::isfinite(r)) {
    throw Error(ErrorCode::InvalidArgument, "kernel radius must be finite and non-negative");
  }
  return detail::cubic_spline(r / kernel.support);
}

/// Kernel size scaled for the sampling rate: kappa * (n / s)^(1/d).
double scaled_kernel_size(double kappa, Index total_count, Index sample_count, int dim);

}  // namespace vcs
