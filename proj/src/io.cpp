#include "vcs/io.hpp"

#include "vcs/parallel.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <sstream>

static_assert(std::endian::native == std::endian::little,
              "file formats are little-endian; byte swapping is not implemented");

namespace vcs {

double sinc_radial(double r) {
  if (r == 0.0) return 1.0;
  const double x = M_PI * r;
  return std::sin(x) / x;
}

PointCloud generate_sinc(Index n, std::uint64_t seed) {
  if (n < 1) throw Error(ErrorCode::InvalidArgument, "need at least one point");
  Matrix positions(n, 2);
  Matrix values(n, 1);
  parallel_for(n, [&](Index i) {
    std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(i));
    const double x = -5.0 + 10.0 * (static_cast<double>(splitmix64(stream) >> 11) * 0x1.0p-53);
    const double y = -5.0 + 10.0 * (static_cast<double>(splitmix64(stream) >> 11) * 0x1.0p-53);
    positions(i, 0) = x;
    positions(i, 1) = y;
    values(i, 0) = sinc_radial(std::hypot(x, y));
  });
  return make_point_cloud(std::move(positions), std::move(values));
}

Eigen::Vector3d abc_velocity(const Eigen::Vector3d& p, double a, double b, double c) {
  return {a * std::sin(p.z()) + c * std::cos(p.y()),
          b * std::sin(p.x()) + a * std::cos(p.z()),
          c * std::sin(p.y()) + b * std::cos(p.x())};
}

Eigen::Vector3d abc_rk4_step(const Eigen::Vector3d& p, double dt, double a, double b, double c) {
  const Eigen::Vector3d k1 = abc_velocity(p, a, b, c);
  const Eigen::Vector3d k2 = abc_velocity(p + 0.5 * dt * k1, a, b, c);
  const Eigen::Vector3d k3 = abc_velocity(p + 0.5 * dt * k2, a, b, c);
  const Eigen::Vector3d k4 = abc_velocity(p + dt * k3, a, b, c);
  return p + (dt / 6.0) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
}

TrajectoryDataset generate_abc(Index count, double t_begin, double t_end, double dt,
                               std::uint64_t seed, double a, double b, double c) {
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one trajectory");
  if (!(dt > 0.0) || !(t_end > t_begin)) {
    throw Error(ErrorCode::InvalidArgument, "need t_end > t_begin and dt > 0");
  }
  const Index steps = static_cast<Index>(std::llround((t_end - t_begin) / dt)) + 1;
  if (steps < 2) throw Error(ErrorCode::InvalidArgument, "time span shorter than one step");

  TrajectoryDataset data;
  data.num_steps = steps;
  data.dim = 3;
  data.value_dims = 1;
  data.trajectories.resize(static_cast<std::size_t>(count));
  parallel_for(count, [&](Index t) {
    Trajectory& traj = data.trajectories[static_cast<std::size_t>(t)];
    traj.id = static_cast<std::uint64_t>(t);
    traj.start_step = 0;
    traj.positions.resize(steps, 3);
    traj.values.resize(steps, 1);
    std::uint64_t stream = mix_seed(seed, static_cast<std::uint64_t>(t));
    Eigen::Vector3d p;
    for (int axis = 0; axis < 3; ++axis) {
      p[axis] = 2.0 * M_PI * (static_cast<double>(splitmix64(stream) >> 11) * 0x1.0p-53);
    }
    for (Index s = 0; s < steps; ++s) {
      traj.positions.row(s) = p.transpose();
      traj.values(s, 0) = abc_velocity(p, a, b, c).norm();
      if (s + 1 < steps) p = abc_rk4_step(p, dt, a, b, c);
    }
  });
  return data;
}

namespace {

class Reader {
 public:
  Reader(const std::string& path) : path_(path), in_(path, std::ios::binary) {
    if (!in_) throw Error(ErrorCode::FormatError, "cannot open " + path);
  }

  void read(void* dst, std::size_t bytes) {
    in_.read(static_cast<char*>(dst), static_cast<std::streamsize>(bytes));
    if (static_cast<std::size_t>(in_.gcount()) != bytes) {
      fail("unexpected end of file");
    }
    offset_ += bytes;
  }

  template <class T>
  T read_scalar() {
    T value;
    read(&value, sizeof(T));
    return value;
  }

  bool at_eof() {
    in_.peek();
    return in_.eof();
  }

  [[noreturn]] void fail(const std::string& what) const {
    throw Error(ErrorCode::FormatError,
                path_ + ": " + what + " at byte offset " + std::to_string(offset_));
  }

  std::size_t offset() const { return offset_; }

 private:
  std::string path_;
  std::ifstream in_;
  std::size_t offset_ = 0;
};

class Writer {
 public:
  Writer(const std::string& path) : path_(path), out_(path, std::ios::binary) {
    if (!out_) throw Error(ErrorCode::FormatError, "cannot open " + path + " for writing");
  }

  void write(const void* src, std::size_t bytes) {
    out_.write(static_cast<const char*>(src), static_cast<std::streamsize>(bytes));
  }

  template <class T>
  void write_scalar(T value) {
    write(&value, sizeof(T));
  }

  void close() {
    out_.close();
    if (!out_) throw Error(ErrorCode::FormatError, "failed to write " + path_);
  }

 private:
  std::string path_;
  std::ofstream out_;
};

void expect_magic(Reader& reader, const char (&magic)[5]) {
  char buffer[4];
  reader.read(buffer, 4);
  if (std::memcmp(buffer, magic, 4) != 0) {
    reader.fail(std::string("bad magic, expected ") + magic);
  }
}

constexpr std::uint32_t kFormatVersion = 1;

}  // namespace

void write_point_cloud(const std::string& path, const PointCloud& cloud,
                       const std::vector<Index>* ranks) {
  if (ranks && static_cast<Index>(ranks->size()) != cloud.size()) {
    throw Error(ErrorCode::ShapeMismatch, "rank count does not match the cloud");
  }
  Writer out(path);
  out.write("VCSD", 4);
  out.write_scalar<std::uint32_t>(kFormatVersion);
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(cloud.dim()));
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(cloud.value_dims()));
  out.write_scalar<std::uint64_t>(static_cast<std::uint64_t>(cloud.size()));
  out.write(cloud.positions.data(), sizeof(double) * static_cast<std::size_t>(cloud.positions.size()));
  out.write(cloud.values.data(), sizeof(double) * static_cast<std::size_t>(cloud.values.size()));
  if (ranks) {
    out.write("RANK", 4);
    for (Index r : *ranks) out.write_scalar<std::uint64_t>(static_cast<std::uint64_t>(r));
  }
  out.close();
}

PointCloud read_point_cloud(const std::string& path, std::vector<Index>* ranks) {
  Reader in(path);
  expect_magic(in, "VCSD");
  const auto version = in.read_scalar<std::uint32_t>();
  if (version != kFormatVersion) in.fail("unsupported version " + std::to_string(version));
  const auto d = in.read_scalar<std::uint32_t>();
  const auto m = in.read_scalar<std::uint32_t>();
  const auto n = in.read_scalar<std::uint64_t>();
  if (d < 1 || d > 4) in.fail("dimension out of range");
  if (n == 0) in.fail("empty point cloud");
  if (n > (std::uint64_t(1) << 40) || m > 4096) in.fail("implausible header");

  Matrix positions(static_cast<Index>(n), static_cast<Index>(d));
  in.read(positions.data(), sizeof(double) * static_cast<std::size_t>(positions.size()));
  Matrix values(static_cast<Index>(n), static_cast<Index>(m));
  in.read(values.data(), sizeof(double) * static_cast<std::size_t>(values.size()));
  if (ranks) ranks->clear();
  if (!in.at_eof()) {
    char marker[4];
    in.read(marker, 4);
    if (std::memcmp(marker, "RANK", 4) != 0) in.fail("unknown trailing section");
    std::vector<Index> parsed(static_cast<std::size_t>(n));
    for (auto& r : parsed) r = static_cast<Index>(in.read_scalar<std::uint64_t>());
    if (ranks) *ranks = std::move(parsed);
  }
  return make_point_cloud(std::move(positions), std::move(values));
}

void write_trajectories(const std::string& path, const TrajectoryDataset& data) {
  Writer out(path);
  out.write("VCTJ", 4);
  out.write_scalar<std::uint32_t>(kFormatVersion);
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(data.num_steps));
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(data.dim));
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(data.value_dims));
  out.write_scalar<std::uint64_t>(data.trajectories.size());
  for (const Trajectory& t : data.trajectories) {
    out.write_scalar<std::uint64_t>(t.id);
    out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(t.start_step));
    out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(t.end_step()));
    out.write(t.positions.data(), sizeof(double) * static_cast<std::size_t>(t.positions.size()));
    out.write(t.values.data(), sizeof(double) * static_cast<std::size_t>(t.values.size()));
  }
  out.close();
}

TrajectoryDataset read_trajectories(const std::string& path) {
  Reader in(path);
  expect_magic(in, "VCTJ");
  const auto version = in.read_scalar<std::uint32_t>();
  if (version != kFormatVersion) in.fail("unsupported version " + std::to_string(version));
  TrajectoryDataset data;
  data.num_steps = in.read_scalar<std::uint32_t>();
  data.dim = in.read_scalar<std::uint32_t>();
  data.value_dims = in.read_scalar<std::uint32_t>();
  const auto count = in.read_scalar<std::uint64_t>();
  if (data.dim < 1 || data.dim > 4) in.fail("dimension out of range");
  if (count == 0) in.fail("empty trajectory dataset");
  data.trajectories.resize(count);
  for (Trajectory& t : data.trajectories) {
    t.id = in.read_scalar<std::uint64_t>();
    t.start_step = in.read_scalar<std::uint32_t>();
    const Index end = in.read_scalar<std::uint32_t>();
    if (end < t.start_step || end >= data.num_steps) in.fail("invalid step range");
    const Index steps = end - t.start_step + 1;
    t.positions.resize(steps, data.dim);
    in.read(t.positions.data(), sizeof(double) * static_cast<std::size_t>(t.positions.size()));
    t.values.resize(steps, data.value_dims);
    in.read(t.values.data(), sizeof(double) * static_cast<std::size_t>(t.values.size()));
  }
  return data;
}

void write_raster(const std::string& path, const RasterGrid& raster) {
  Writer out(path);
  out.write("VCRG", 4);
  out.write_scalar<std::uint32_t>(kFormatVersion);
  out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(raster.resolution.size()));
  for (Index r : raster.resolution) out.write_scalar<std::uint32_t>(static_cast<std::uint32_t>(r));
  out.write(raster.origin.data(), sizeof(double) * static_cast<std::size_t>(raster.origin.size()));
  out.write(raster.extent.data(), sizeof(double) * static_cast<std::size_t>(raster.extent.size()));
  out.write(raster.values.data(), sizeof(double) * static_cast<std::size_t>(raster.values.size()));
  out.close();
}

RasterGrid read_raster(const std::string& path) {
  Reader in(path);
  expect_magic(in, "VCRG");
  const auto version = in.read_scalar<std::uint32_t>();
  if (version != kFormatVersion) in.fail("unsupported version " + std::to_string(version));
  const auto d = in.read_scalar<std::uint32_t>();
  if (d < 1 || d > 4) in.fail("dimension out of range");
  std::vector<Index> resolution(d);
  for (auto& r : resolution) {
    r = in.read_scalar<std::uint32_t>();
    if (r < 2) in.fail("resolution must be at least 2");
  }
  RowVector origin(d), extent(d);
  in.read(origin.data(), sizeof(double) * d);
  in.read(extent.data(), sizeof(double) * d);
  RasterGrid raster = make_raster(std::move(resolution), std::move(origin), std::move(extent));
  in.read(raster.values.data(), sizeof(double) * static_cast<std::size_t>(raster.values.size()));
  return raster;
}

namespace {

void append_double(std::string& line, double v) {
  char buffer[32];
  const int written = std::snprintf(buffer, sizeof(buffer), "%.17g", v);
  line.append(buffer, static_cast<std::size_t>(written));
}

}  // namespace

void write_point_cloud_csv(const std::string& path, const PointCloud& cloud) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FormatError, "cannot open " + path + " for writing");
  for (Index a = 0; a < cloud.dim(); ++a) out << (a ? ",x" : "x") << a;
  for (Index v = 0; v < cloud.value_dims(); ++v) out << ",v" << v;
  out << "\n";
  std::string line;
  for (Index i = 0; i < cloud.size(); ++i) {
    line.clear();
    for (Index a = 0; a < cloud.dim(); ++a) {
      if (a) line.push_back(',');
      append_double(line, cloud.positions(i, a));
    }
    for (Index v = 0; v < cloud.value_dims(); ++v) {
      line.push_back(',');
      append_double(line, cloud.values(i, v));
    }
    line.push_back('\n');
    out << line;
  }
  if (!out) throw Error(ErrorCode::FormatError, "failed to write " + path);
}

PointCloud read_point_cloud_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
  std::string line;
  if (!std::getline(in, line)) throw Error(ErrorCode::FormatError, path + ": missing header");

  Index d = 0, m = 0;
  {
    std::stringstream header(line);
    std::string column;
    while (std::getline(header, column, ',')) {
      if (!column.empty() && column.front() == 'x') {
        ++d;
      } else if (!column.empty() && column.front() == 'v') {
        ++m;
      } else {
        throw Error(ErrorCode::FormatError, path + ": unknown column '" + column + "'");
      }
    }
  }
  if (d < 1) throw Error(ErrorCode::FormatError, path + ": no coordinate columns");

  std::vector<double> flat;
  Index rows = 0;
  std::size_t line_number = 1;
  while (std::getline(in, line)) {
    ++line_number;
    if (line.empty()) continue;
    const char* cursor = line.data();
    const char* line_end = line.data() + line.size();
    for (Index column = 0; column < d + m; ++column) {
      double value = 0.0;
      const auto [next, ec] = std::from_chars(cursor, line_end, value);
      if (ec != std::errc()) {
        throw Error(ErrorCode::FormatError,
                    path + ": bad number on line " + std::to_string(line_number));
      }
      flat.push_back(value);
      cursor = next;
      if (column + 1 < d + m) {
        if (cursor == line_end || *cursor != ',') {
          throw Error(ErrorCode::FormatError,
                      path + ": expected comma on line " + std::to_string(line_number));
        }
        ++cursor;
      }
    }
    ++rows;
  }
  if (rows == 0) throw Error(ErrorCode::FormatError, path + ": no data rows");

  Matrix positions(rows, d);
  Matrix values(rows, m);
  for (Index i = 0; i < rows; ++i) {
    for (Index a = 0; a < d; ++a) positions(i, a) = flat[static_cast<std::size_t>(i * (d + m) + a)];
    for (Index v = 0; v < m; ++v) values(i, v) = flat[static_cast<std::size_t>(i * (d + m) + d + v)];
  }
  return make_point_cloud(std::move(positions), std::move(values));
}

void write_raster_csv(const std::string& path, const RasterGrid& raster) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FormatError, "cannot open " + path + " for writing");
  out << "cell,value\n";
  std::string line;
  for (Index c = 0; c < raster.values.size(); ++c) {
    line.clear();
    append_double(line, static_cast<double>(c));
    line.push_back(',');
    append_double(line, raster.values[c]);
    line.push_back('\n');
    out << line;
  }
  if (!out) throw Error(ErrorCode::FormatError, "failed to write " + path);
}

}  // namespace vcs
