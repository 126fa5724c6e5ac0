#include "vcs/io.hpp"

#include "helpers.hpp"

#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

using namespace vcs;

namespace {

struct TempDir {
  std::filesystem::path path;
  TempDir() {
    path = std::filesystem::temp_directory_path() /
           ("vcs_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter()++));
    std::filesystem::create_directories(path);
  }
  ~TempDir() { std::filesystem::remove_all(path); }
  std::string file(const std::string& name) const { return (path / name).string(); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

}  // namespace

TEST_SUITE_BEGIN("io");

TEST_CASE("radial sinc anchor values") {
  CHECK(sinc_radial(0.0) == 1.0);
  CHECK(std::abs(sinc_radial(1.0)) < 1e-15);
  CHECK(sinc_radial(0.5) == doctest::Approx(2.0 / M_PI).epsilon(1e-14));
  CHECK(sinc_radial(0.5) == doctest::Approx(0.63661977236758138).epsilon(1e-14));
}

TEST_CASE("sinc generator fills the domain with the radial signal") {
  const PointCloud cloud = generate_sinc(5000, 42);
  CHECK(cloud.size() == 5000);
  CHECK(cloud.dim() == 2);
  CHECK(cloud.value_dims() == 1);
  for (Index i = 0; i < cloud.size(); ++i) {
    CHECK(cloud.positions(i, 0) >= -5.0);
    CHECK(cloud.positions(i, 0) <= 5.0);
    CHECK(cloud.positions(i, 1) >= -5.0);
    CHECK(cloud.positions(i, 1) <= 5.0);
    CHECK(cloud.values(i, 0) ==
          sinc_radial(std::hypot(cloud.positions(i, 0), cloud.positions(i, 1))));
  }
  const PointCloud again = generate_sinc(5000, 42);
  CHECK(cloud.positions == again.positions);
  const PointCloud other = generate_sinc(5000, 43);
  CHECK(cloud.positions != other.positions);
}

TEST_CASE("abc velocity at the origin is (C, A, B)") {
  const double a = std::sqrt(3.0), b = std::sqrt(2.0), c = 1.0;
  const Eigen::Vector3d v = abc_velocity(Eigen::Vector3d::Zero(), a, b, c);
  CHECK(v.x() == c);
  CHECK(v.y() == a);
  CHECK(v.z() == b);
}

TEST_CASE("one small rk4 step leaves the origin along (C, A, B)") {
  const double a = std::sqrt(3.0), b = std::sqrt(2.0), c = 1.0;
  const double dt = 1e-4;
  const Eigen::Vector3d p = abc_rk4_step(Eigen::Vector3d::Zero(), dt, a, b, c);
  CHECK(p.x() == doctest::Approx(dt * c).epsilon(1e-6));
  CHECK(p.y() == doctest::Approx(dt * a).epsilon(1e-6));
  CHECK(p.z() == doctest::Approx(dt * b).epsilon(1e-6));
}

TEST_CASE("a zero field leaves trajectories stationary") {
  const TrajectoryDataset data = generate_abc(5, 0.0, 1.0, 0.25, 7, 0.0, 0.0, 0.0);
  CHECK(data.num_steps == 5);
  for (const Trajectory& t : data.trajectories) {
    for (Index s = 1; s < t.step_count(); ++s) {
      CHECK(t.positions.row(s) == t.positions.row(0));
    }
  }
}

TEST_CASE("rk4 halving shrinks the endpoint error about sixteenfold") {
  const double a = std::sqrt(3.0), b = std::sqrt(2.0), c = 1.0;
  const Eigen::Vector3d start(1.0, 2.0, 3.0);
  auto integrate = [&](double dt) {
    Eigen::Vector3d p = start;
    const int steps = static_cast<int>(std::llround(1.0 / dt));
    for (int s = 0; s < steps; ++s) p = abc_rk4_step(p, dt, a, b, c);
    return p;
  };
  const Eigen::Vector3d reference = integrate(0.0125);
  const double coarse = (integrate(0.1) - reference).norm();
  const double fine = (integrate(0.05) - reference).norm();
  const double ratio = coarse / fine;
  CHECK(ratio > 12.0);
  CHECK(ratio < 20.0);
}

TEST_CASE("point cloud files round-trip bit-exactly") {
  TempDir dir;
  const PointCloud cloud = test::random_cloud(137, 3, 2, 900);
  write_point_cloud(dir.file("plain.vcsd"), cloud);
  const PointCloud back = read_point_cloud(dir.file("plain.vcsd"));
  CHECK(back.positions == cloud.positions);
  CHECK(back.values == cloud.values);

  std::vector<Index> ranks(137);
  for (Index i = 0; i < 137; ++i) ranks[static_cast<std::size_t>(i)] = 136 - i;
  write_point_cloud(dir.file("ranked.vcsd"), cloud, &ranks);
  std::vector<Index> ranks_back;
  const PointCloud ranked = read_point_cloud(dir.file("ranked.vcsd"), &ranks_back);
  CHECK(ranked.positions == cloud.positions);
  CHECK(ranks_back == ranks);

  // Expected byte size: 24-byte header + payload + rank section.
  const auto bytes = std::filesystem::file_size(dir.file("ranked.vcsd"));
  CHECK(bytes == 24 + 8 * 137 * (3 + 2) + 4 + 8 * 137);
}

TEST_CASE("trajectory files round-trip bit-exactly") {
  TempDir dir;
  Rng rng(901);
  TrajectoryDataset data;
  data.num_steps = 6;
  data.dim = 2;
  data.value_dims = 1;
  for (Index t = 0; t < 9; ++t) {
    Trajectory traj;
    traj.id = static_cast<std::uint64_t>(t * 7 + 1);
    traj.start_step = static_cast<Index>(rng.next_below(3));
    const Index span = 1 + static_cast<Index>(rng.next_below(
                               static_cast<std::uint64_t>(6 - traj.start_step)));
    traj.positions.resize(span, 2);
    traj.values.resize(span, 1);
    for (Index s = 0; s < span; ++s) {
      traj.positions.row(s) << rng.next_double(), rng.next_double();
      traj.values(s, 0) = rng.next_double();
    }
    data.trajectories.push_back(std::move(traj));
  }
  write_trajectories(dir.file("t.vctj"), data);
  const TrajectoryDataset back = read_trajectories(dir.file("t.vctj"));
  REQUIRE(back.trajectories.size() == data.trajectories.size());
  CHECK(back.num_steps == data.num_steps);
  for (std::size_t t = 0; t < data.trajectories.size(); ++t) {
    CHECK(back.trajectories[t].id == data.trajectories[t].id);
    CHECK(back.trajectories[t].start_step == data.trajectories[t].start_step);
    CHECK(back.trajectories[t].positions == data.trajectories[t].positions);
    CHECK(back.trajectories[t].values == data.trajectories[t].values);
  }
}

TEST_CASE("raster files round-trip bit-exactly") {
  TempDir dir;
  RasterGrid raster = make_raster({5, 7}, RowVector::Zero(2), RowVector::Ones(2));
  Rng rng(902);
  for (Index c = 0; c < raster.values.size(); ++c) raster.values[c] = rng.next_double();
  write_raster(dir.file("r.vcrg"), raster);
  const RasterGrid back = read_raster(dir.file("r.vcrg"));
  CHECK(back.resolution == raster.resolution);
  CHECK((back.values == raster.values).all());
  CHECK(back.origin == raster.origin);
  CHECK(back.extent == raster.extent);
}

TEST_CASE("csv round-trips through 17 significant digits") {
  TempDir dir;
  const PointCloud cloud = test::random_cloud(64, 2, 1, 903);
  write_point_cloud_csv(dir.file("c.csv"), cloud);
  const PointCloud back = read_point_cloud_csv(dir.file("c.csv"));
  CHECK(back.positions == cloud.positions);
  CHECK(back.values == cloud.values);
}

TEST_CASE("malformed files name the byte offset") {
  TempDir dir;
  {
    std::ofstream out(dir.file("bad.vcsd"), std::ios::binary);
    out << "VCSX";
  }
  try {
    read_point_cloud(dir.file("bad.vcsd"));
    FAIL("expected FormatError");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::FormatError);
    CHECK(std::string(e.what()).find("byte offset") != std::string::npos);
  }

  const PointCloud cloud = test::random_cloud(10, 2, 1, 904);
  write_point_cloud(dir.file("trunc.vcsd"), cloud);
  {
    // Drop the last 8 bytes.
    std::filesystem::resize_file(dir.file("trunc.vcsd"),
                                 std::filesystem::file_size(dir.file("trunc.vcsd")) - 8);
  }
  CHECK_THROWS_AS(read_point_cloud(dir.file("trunc.vcsd")), Error);
}

TEST_CASE("rank-ordered files stream by prefix") {
  TempDir dir;
  const PointCloud cloud = test::random_cloud(50, 2, 1, 905);
  // Write rows ordered by rank, as the CLI does.
  std::vector<Index> by_rank(50);
  for (Index i = 0; i < 50; ++i) by_rank[static_cast<std::size_t>(i)] = (i * 7) % 50;
  Matrix positions(50, 2), values(50, 1);
  std::vector<Index> ranks(50);
  for (Index r = 0; r < 50; ++r) {
    positions.row(r) = cloud.positions.row(by_rank[static_cast<std::size_t>(r)]);
    values.row(r) = cloud.values.row(by_rank[static_cast<std::size_t>(r)]);
    ranks[static_cast<std::size_t>(r)] = r;
  }
  const PointCloud ordered = make_point_cloud(std::move(positions), std::move(values));
  write_point_cloud(dir.file("o.vcsd"), ordered, &ranks);
  const PointCloud full = read_point_cloud(dir.file("o.vcsd"));
  // The first k records are exactly the k lowest ranks.
  for (Index k : {Index(1), Index(10), Index(25)}) {
    for (Index r = 0; r < k; ++r) {
      CHECK(full.positions.row(r) == cloud.positions.row(by_rank[static_cast<std::size_t>(r)]));
    }
  }
}

TEST_SUITE_END();
