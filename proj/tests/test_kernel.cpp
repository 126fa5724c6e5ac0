#include "vcs/kernel.hpp"

#include <doctest.h>

#include <cmath>

using namespace vcs;

TEST_SUITE_BEGIN("kernel");

TEST_CASE("cubic spline anchor values") {
  const CubicSplineKernel k = make_kernel(1.0);
  CHECK(eval(k, 0.0) == 1.0);
  CHECK(eval(k, 1.0) == 0.0);
  // Both piecewise branches give 2 (1 - 1/2)^3 = 1 - 6/4 + 6/8 = 0.25 at
  // the seam, so the value there is exact.
  CHECK(eval(k, 0.5) == 0.25);
  CHECK(eval(k, 0.5 - 1e-12) == doctest::Approx(0.25).epsilon(1e-9));
  CHECK(eval(k, 0.5 + 1e-12) == doctest::Approx(0.25).epsilon(1e-9));
}

TEST_CASE("kernel scales with its support") {
  const CubicSplineKernel k = make_kernel(4.0);
  CHECK(eval(k, 2.0) == 0.25);
  CHECK(eval(k, 4.0) == 0.0);
  CHECK(eval(k, 100.0) == 0.0);
}

TEST_CASE("kernel is monotone non-increasing") {
  const CubicSplineKernel k = make_kernel(2.5);
  Rng rng(11);
  for (int i = 0; i < 2000; ++i) {
    double r1 = 3.0 * rng.next_double();
    double r2 = 3.0 * rng.next_double();
    if (r1 > r2) std::swap(r1, r2);
    CHECK(eval(k, r1) >= eval(k, r2));
  }
}

TEST_CASE("kernel is exactly zero outside the support") {
  const CubicSplineKernel k = make_kernel(0.7);
  Rng rng(12);
  for (int i = 0; i < 1000; ++i) {
    const double r = 0.7 + 10.0 * rng.next_double();
    CHECK(eval(k, r) == 0.0);
  }
}

TEST_CASE("kernel rejects invalid radii") {
  const CubicSplineKernel k = make_kernel(1.0);
  CHECK_THROWS_AS(eval(k, -0.1), Error);
  CHECK_THROWS_AS(eval(k, std::nan("")), Error);
  CHECK_THROWS_AS(eval(k, std::numeric_limits<double>::infinity()), Error);
  CHECK_THROWS_AS(make_kernel(0.0), Error);
  CHECK_THROWS_AS(make_kernel(-1.0), Error);
}

TEST_CASE("scaled kernel size follows the rate") {
  CHECK(scaled_kernel_size(0.1, 500000, 5000, 2) == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(scaled_kernel_size(0.37, 12345, 12345, 3) == 0.37);
  CHECK(scaled_kernel_size(1.0, 8000, 1000, 3) == doctest::Approx(2.0).epsilon(1e-14));
  CHECK_THROWS_AS(scaled_kernel_size(1.0, 10, 0, 2), Error);
  CHECK_THROWS_AS(scaled_kernel_size(1.0, 10, 20, 2), Error);
}

TEST_CASE("scaled kernel size is monotone decreasing in the sample count") {
  double previous = std::numeric_limits<double>::infinity();
  for (Index s = 1; s <= 1000; s += 13) {
    const double value = scaled_kernel_size(0.5, 1000, s, 2);
    CHECK(value < previous);
    previous = value;
  }
}

TEST_SUITE_END();
