#include "vcs/entropy.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>

using namespace vcs;

TEST_SUITE_BEGIN("entropy");

TEST_CASE("locally constant values have zero entropy") {
  // Left cluster shares one value, right cluster spreads over the range so
  // the global range is not degenerate.
  Matrix positions(8, 2);
  Matrix values(8, 1);
  for (Index i = 0; i < 4; ++i) {
    positions.row(i) << 0.01 * static_cast<double>(i), 0.0;
    values(i, 0) = 0.25;
  }
  for (Index i = 4; i < 8; ++i) {
    positions.row(i) << 100.0 + 0.01 * static_cast<double>(i), 0.0;
    values(i, 0) = 0.25 * static_cast<double>(i - 4);
  }
  const PointCloud cloud = make_point_cloud(positions, values);
  const UniformGrid grid = build_grid(cloud, 1.0);
  const Array entropy = local_entropy(cloud, grid, make_kernel(1.0), 0, 16);
  for (Index i = 0; i < 4; ++i) CHECK(entropy[i] == 0.0);
  for (Index i = 4; i < 8; ++i) CHECK(entropy[i] > 0.0);
}

TEST_CASE("a uniform weighted histogram reaches log2(bins)") {
  // Center point with value in bin 0 (weight 1) plus, per remaining bin,
  // four ring points at half the support (weight 0.25 each): every bin
  // holds mass 1 exactly, so H = log2(16) = 4.
  const int bins = 16;
  const Index n = 1 + 15 * 4;
  Matrix positions(n, 2);
  Matrix values(n, 1);
  positions.row(0) << 0.0, 0.0;
  values(0, 0) = 0.5;  // bin 0 (global range [0.5, 15.5) over 16 bins)
  Index row = 1;
  for (int bin = 1; bin < bins; ++bin) {
    for (int k = 0; k < 4; ++k) {
      const double angle = 2.0 * M_PI * static_cast<double>((bin - 1) * 4 + k) /
                           static_cast<double>((bins - 1) * 4);
      positions.row(row) << 0.5 * std::cos(angle), 0.5 * std::sin(angle);
      values(row, 0) = 0.5 + static_cast<double>(bin);
      ++row;
    }
  }
  const PointCloud cloud = make_point_cloud(positions, values);
  const UniformGrid grid = build_grid(cloud, 1.0);
  const Array entropy = local_entropy(cloud, grid, make_kernel(1.0), 0, bins);
  CHECK(entropy[0] == doctest::Approx(4.0).epsilon(1e-12));
}

TEST_CASE("entropy matches a direct reimplementation") {
  const PointCloud cloud = test::random_cloud(300, 2, 2, 77);
  const double support = 0.3;
  const UniformGrid grid = build_grid(cloud, support);
  const CubicSplineKernel kernel = make_kernel(support);
  const int bins = 8;
  for (Index dim = 0; dim < 2; ++dim) {
    const Array entropy = local_entropy(cloud, grid, kernel, dim, bins);
    const double lo = cloud.values.col(dim).minCoeff();
    const double hi = cloud.values.col(dim).maxCoeff();
    for (Index p = 0; p < cloud.size(); ++p) {
      std::vector<double> histogram(bins, 0.0);
      double total = 0.0;
      for (Index q = 0; q < cloud.size(); ++q) {
        const double r = (cloud.positions.row(p) - cloud.positions.row(q)).norm();
        if (r >= support) continue;
        const double w = eval(kernel, r);
        int bin = static_cast<int>(static_cast<double>(bins) * (cloud.values(q, dim) - lo) /
                                   (hi - lo));
        bin = std::clamp(bin, 0, bins - 1);
        histogram[static_cast<std::size_t>(bin)] += w;
        total += w;
      }
      double expected = 0.0;
      for (double mass : histogram) {
        if (mass > 0.0) expected -= mass / total * std::log2(mass / total);
      }
      CHECK(std::abs(entropy[p] - expected) < 1e-12);
    }
  }
}

TEST_CASE("entropy stays within [0, log2 bins]") {
  const PointCloud cloud = test::random_cloud(400, 2, 1, 78);
  const UniformGrid grid = build_grid(cloud, 0.2);
  const Array entropy = local_entropy(cloud, grid, make_kernel(0.2), 0, 64);
  for (Index p = 0; p < cloud.size(); ++p) {
    CHECK(entropy[p] >= 0.0);
    CHECK(entropy[p] <= std::log2(64.0) + 1e-12);
  }
}

TEST_CASE("constant global range gives zero entropy, uniform PMF") {
  PointCloud cloud = test::random_cloud(100, 2, 1, 79);
  cloud.values.setConstant(3.5);
  const UniformGrid grid = build_grid(cloud, 0.3);
  const CubicSplineKernel kernel = make_kernel(0.3);
  CHECK((local_entropy(cloud, grid, kernel, 0, 64) == 0.0).all());
  const ImportancePmf pmf = entropy_importance(cloud, grid, kernel, {0}, 64);
  for (Index p = 0; p < 100; ++p) {
    CHECK(pmf.probabilities[p] == doctest::Approx(1.0 / 100.0).epsilon(1e-12));
  }
}

TEST_CASE("noisy regions receive more importance than flat ones") {
  // Two spatial halves: constant values on the left, random on the right.
  const Index n = 400;
  Rng rng(80);
  Matrix positions(n, 2);
  Matrix values(n, 1);
  for (Index i = 0; i < n; ++i) {
    const bool right = i >= n / 2;
    positions(i, 0) = (right ? 2.0 : 0.0) + rng.next_double();
    positions(i, 1) = rng.next_double();
    values(i, 0) = right ? rng.next_double() : 0.0;
  }
  const PointCloud cloud = make_point_cloud(std::move(positions), std::move(values));
  const UniformGrid grid = build_grid(cloud, 0.4);
  const ImportancePmf pmf = entropy_importance(cloud, grid, make_kernel(0.4), {0}, 32);
  double left = 0.0, right = 0.0;
  for (Index i = 0; i < n; ++i) (i < n / 2 ? left : right) += pmf.probabilities[i];
  CHECK(right > left);
  CHECK(left + right == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("PMF sums to one") {
  const PointCloud cloud = test::random_cloud(350, 2, 3, 81);
  const UniformGrid grid = build_grid(cloud, 0.25);
  const ImportancePmf pmf =
      entropy_importance(cloud, grid, make_kernel(0.25), {0, 1, 2}, 64);
  CHECK(pmf.probabilities.sum() == doctest::Approx(1.0).epsilon(1e-9));
  CHECK((pmf.probabilities >= 0.0).all());
}

TEST_CASE("invalid arguments are rejected") {
  const PointCloud cloud = test::random_cloud(30, 2, 1, 82);
  const UniformGrid grid = build_grid(cloud, 0.5);
  const CubicSplineKernel kernel = make_kernel(0.5);
  CHECK_THROWS_AS(local_entropy(cloud, grid, kernel, 1, 64), Error);  // dim out of range
  CHECK_THROWS_AS(local_entropy(cloud, grid, kernel, 0, 1), Error);   // too few bins
  CHECK_THROWS_AS(entropy_importance(cloud, grid, kernel, {}, 64), Error);
}

TEST_SUITE_END();
