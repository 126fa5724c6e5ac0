#include "vcs/density.hpp"

#include "helpers.hpp"

#include <doctest.h>

using namespace vcs;

namespace {

struct Setup {
  PointCloud cloud;
  UniformGrid grid;
  CubicSplineKernel kernel;
};

Setup make_setup(PointCloud cloud, double support) {
  UniformGrid grid = build_grid(cloud, support);
  return {std::move(cloud), std::move(grid), make_kernel(support)};
}

}  // namespace

TEST_SUITE_BEGIN("density");

TEST_CASE("single point has density K(0) = 1") {
  Matrix positions(1, 2);
  positions << 0.0, 0.0;
  Setup s = make_setup(make_point_cloud(positions, Matrix(1, 0)), 1.0);
  const DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  CHECK(field.point_density[0] == 1.0);
}

TEST_CASE("two points at half the support see 1 + 0.25") {
  Matrix positions(2, 2);
  positions << 0.0, 0.0, 0.5, 0.0;
  Setup s = make_setup(make_point_cloud(positions, Matrix(2, 0)), 1.0);
  const DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  CHECK(field.point_density[0] == doctest::Approx(1.25).epsilon(1e-15));
  CHECK(field.point_density[1] == doctest::Approx(1.25).epsilon(1e-15));
}

TEST_CASE("point density matches the brute-force sum") {
  Setup s = make_setup(test::random_cloud(200, 2, 0, 42), 0.3);
  const DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  for (Index p = 0; p < s.cloud.size(); ++p) {
    const double expected = test::brute_force_point_density(s.cloud, s.kernel, p);
    CHECK(test::rel_diff(field.point_density[p], expected) < 1e-12);
  }
}

TEST_CASE("importance modifies the density with a floor") {
  Setup s = make_setup(test::random_cloud(50, 2, 0, 43), 0.4);
  Array importance = Array::Constant(50, 1.0 / 50.0);
  importance[7] = 0.0;  // floored, not zeroed
  const DensityField plain = compute_point_density(s.cloud, s.grid, s.kernel);
  const DensityField modified = compute_point_density(s.cloud, s.grid, s.kernel, &importance);
  for (Index p = 0; p < 50; ++p) {
    if (p == 7) {
      CHECK(modified.point_density[p] > 0.0);
    } else {
      CHECK(test::rel_diff(modified.point_density[p], plain.point_density[p] / 50.0) < 1e-12);
    }
  }
}

TEST_CASE("add then remove restores the field bit-exactly") {
  Setup s = make_setup(test::random_cloud(300, 2, 0, 44), 0.25);
  DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  const std::vector<WeightSum> before = field.sample_weight;
  add_sample(field, 123, s.cloud, s.grid, s.kernel);
  CHECK(field.sample_count == 1);
  remove_sample(field, 123, s.cloud, s.grid, s.kernel);
  CHECK(field.sample_count == 0);
  bool identical = true;
  for (std::size_t i = 0; i < before.size(); ++i) identical &= before[i] == field.sample_weight[i];
  CHECK(identical);
}

TEST_CASE("adding an isolated sample only touches itself") {
  Matrix positions(3, 2);
  positions << 0.0, 0.0, 10.0, 10.0, 20.0, 0.0;
  Setup s = make_setup(make_point_cloud(positions, Matrix(3, 0)), 1.0);
  DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  add_sample(field, 1, s.cloud, s.grid, s.kernel);
  CHECK(sample_density_at(field, 1) == doctest::Approx(1.0).epsilon(1e-12));  // K(0) / rho_P
  CHECK(field.sample_weight[0] == 0);
  CHECK(field.sample_weight[2] == 0);
}

TEST_CASE("double add and spurious remove are errors") {
  Setup s = make_setup(test::random_cloud(20, 2, 0, 45), 0.3);
  DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  add_sample(field, 3, s.cloud, s.grid, s.kernel);
  CHECK_THROWS_AS(add_sample(field, 3, s.cloud, s.grid, s.kernel), Error);
  CHECK_THROWS_AS(remove_sample(field, 4, s.cloud, s.grid, s.kernel), Error);
}

TEST_CASE("mismatched grid and kernel sizes are rejected") {
  Setup s = make_setup(test::random_cloud(20, 2, 0, 46), 0.3);
  const CubicSplineKernel other = make_kernel(0.2);
  CHECK_THROWS_AS(compute_point_density(s.cloud, s.grid, other), Error);
}

TEST_CASE("incremental updates equal a from-scratch recomputation") {
  Setup s = make_setup(test::random_cloud(400, 3, 0, 47), 0.35);
  DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  Rng rng(9);
  std::vector<char> sampled(400, 0);
  // Interleave adds and removes.
  for (int step = 0; step < 120; ++step) {
    const Index p = static_cast<Index>(rng.next_below(400));
    if (sampled[static_cast<std::size_t>(p)]) {
      remove_sample(field, p, s.cloud, s.grid, s.kernel);
      sampled[static_cast<std::size_t>(p)] = 0;
    } else {
      add_sample(field, p, s.cloud, s.grid, s.kernel);
      sampled[static_cast<std::size_t>(p)] = 1;
    }
  }
  DensityField fresh = compute_point_density(s.cloud, s.grid, s.kernel);
  for (Index p = 0; p < 400; ++p) {
    if (sampled[static_cast<std::size_t>(p)]) add_sample(fresh, p, s.cloud, s.grid, s.kernel);
  }
  bool identical = true;
  for (Index p = 0; p < 400; ++p) identical &= field.sample_weight[p] == fresh.sample_weight[p];
  CHECK(identical);  // integer accumulation is order independent
  for (Index p = 0; p < 400; ++p) {
    const double expected = test::brute_force_sample_density(s.cloud, s.kernel, p, sampled);
    CHECK(test::rel_diff(sample_density_at(field, p), expected) < 1e-12);
  }
}

TEST_CASE("no samples means zero density everywhere") {
  Setup s = make_setup(test::random_cloud(64, 2, 0, 48), 0.3);
  const DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  for (Index p = 0; p < 64; ++p) CHECK(sample_density_at(field, p) == 0.0);
}

TEST_CASE("sampling every point gives unit density under uniform importance") {
  Setup s = make_setup(test::random_cloud(150, 2, 0, 49), 0.4);
  DensityField field = compute_point_density(s.cloud, s.grid, s.kernel);
  for (Index p = 0; p < 150; ++p) add_sample(field, p, s.cloud, s.grid, s.kernel);
  for (Index p = 0; p < 150; ++p) {
    CHECK(sample_density_at(field, p) == doctest::Approx(1.0).epsilon(1e-12));
  }
}

TEST_SUITE_END();
