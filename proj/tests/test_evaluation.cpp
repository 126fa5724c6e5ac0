#include "vcs/evaluation.hpp"

#include "vcs/baselines.hpp"
#include "vcs/io.hpp"
#include "vcs/sampler.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <numeric>

using namespace vcs;

namespace {

SampleResult take_all(const PointCloud& cloud) {
  SampleResult result;
  result.indices_by_rank.resize(static_cast<std::size_t>(cloud.size()));
  std::iota(result.indices_by_rank.begin(), result.indices_by_rank.end(), Index(0));
  result.insertion_density = Array::Zero(cloud.size());
  result.weights = Array::Ones(cloud.size());
  result.kernel_size_used = default_kernel_size(cloud);
  return result;
}

}  // namespace

TEST_SUITE_BEGIN("evaluation");

TEST_CASE("constant fields reconstruct exactly") {
  PointCloud cloud = test::random_cloud(300, 2, 1, 500);
  cloud.values.setConstant(4.5);
  const SampleResult samples = take_all(cloud);
  const RasterGrid grid =
      reconstruct(cloud, samples, {16, 16}, make_kernel(samples.kernel_size_used));
  for (Index c = 0; c < grid.values.size(); ++c) {
    CHECK(grid.values[c] == doctest::Approx(4.5).epsilon(1e-12));
  }
}

TEST_CASE("a single sample floods the grid through the nearest fallback") {
  Matrix positions(2, 2);
  positions << 0.2, 0.2, 0.8, 0.8;
  Matrix values(2, 1);
  values << 7.0, -3.0;
  const PointCloud cloud = make_point_cloud(positions, values);
  SampleResult one;
  one.indices_by_rank = {0};
  one.insertion_density = Array::Zero(1);
  one.weights = Array::Ones(1);
  one.kernel_size_used = 0.05;  // tiny support: most cells use the fallback
  const RasterGrid grid = reconstruct(cloud, one, {8, 8}, make_kernel(0.05));
  for (Index c = 0; c < grid.values.size(); ++c) CHECK(grid.values[c] == 7.0);
}

TEST_CASE("snr sentinel and algebraic anchors") {
  RasterGrid ref = make_raster({4, 4}, RowVector::Zero(2), RowVector::Ones(2));
  for (Index c = 0; c < 16; ++c) ref.values[c] = static_cast<double>(c + 1);
  CHECK(std::isinf(snr_db(ref, ref)));

  RasterGrid zero = ref;
  zero.values.setZero();
  CHECK(snr_db(ref, zero) == doctest::Approx(0.0).epsilon(1e-12));

  RasterGrid off = ref;
  off.values = ref.values * 0.9;  // residual is ref / 10 pointwise
  CHECK(snr_db(ref, off) == doctest::Approx(20.0).epsilon(1e-12));

  RasterGrid wrong = make_raster({4, 5}, RowVector::Zero(2), RowVector::Ones(2));
  CHECK_THROWS_AS(snr_db(ref, wrong), Error);
}

TEST_CASE("snr decreases as the perturbation grows") {
  RasterGrid ref = make_raster({8, 8}, RowVector::Zero(2), RowVector::Ones(2));
  Rng rng(1);
  for (Index c = 0; c < 64; ++c) ref.values[c] = rng.next_double() + 0.5;
  double previous = std::numeric_limits<double>::infinity();
  for (double delta : {0.01, 0.05, 0.2, 0.8}) {
    RasterGrid rec = ref;
    rec.values = ref.values * (1.0 + delta);
    const double snr = snr_db(ref, rec);
    CHECK(std::isfinite(snr));
    CHECK(snr < previous);
    previous = snr;
  }
}

TEST_CASE("spectrum rejects non-2d input") {
  Matrix positions(5, 3);
  positions.setRandom();
  CHECK_THROWS_AS(sample_spectrum(positions, 64), Error);
}

TEST_CASE("a regular lattice produces spikes at its harmonics") {
  const Index res = 64;
  // 16 x 16 comb on every 4th pixel, plus one far-corner anchor so the
  // binning domain spans all 64 pixels and lattice points stay aligned.
  Matrix positions(16 * 16 + 1, 2);
  for (Index i = 0; i < 16 * 16; ++i) {
    positions.row(i) << 4.0 * static_cast<double>(i % 16), 4.0 * static_cast<double>(i / 16);
  }
  positions.row(16 * 16) << 64.0 - 1e-9, 64.0 - 1e-9;
  const SpectrumResult spectrum = sample_spectrum(positions, res);
  // Harmonics of a period-4 comb sit at multiples of res / 4 = 16.
  const double spike_x = spectrum.power.values[16];       // (fy=0, fx=16)
  const double spike_y = spectrum.power.values[16 * res]; // (fy=16, fx=0)
  const double off_a = spectrum.power.values[8];
  const double off_b = spectrum.power.values[3 * res + 5];
  CHECK(spike_x > 100.0 * (off_a + 1.0));
  CHECK(spike_x > 100.0 * (off_b + 1.0));
  CHECK(spike_y > 100.0 * (off_a + 1.0));
}

TEST_CASE("uniform random samples have a roughly flat profile") {
  Array sums;
  const Index annuli = 32;
  for (std::uint64_t seed = 0; seed < 6; ++seed) {
    const PointCloud cloud = test::random_cloud(4000, 2, 0, 600 + seed, 10.0);
    const SpectrumResult s = sample_spectrum(cloud.positions, 128, annuli);
    if (seed == 0) {
      sums = s.radial_profile;
    } else {
      sums += s.radial_profile;
    }
  }
  sums /= 6.0;
  const double mean = sums.mean();
  for (Index k = 0; k < annuli; ++k) {
    CHECK(std::abs(sums[k] - mean) < 0.25 * mean);
  }
}

TEST_CASE("raster shape validation") {
  CHECK_THROWS_AS(make_raster({1, 4}, RowVector::Zero(2), RowVector::Ones(2)), Error);
  CHECK_THROWS_AS(make_raster({4, 4}, RowVector::Zero(1), RowVector::Ones(2)), Error);
}

TEST_SUITE_END();
