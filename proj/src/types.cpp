#include "vcs/types.hpp"

#include <cmath>
#include <unordered_set>

namespace vcs {

const char* error_code_name(ErrorCode code) {
  switch (code) {
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::InvalidData: return "InvalidData";
    case ErrorCode::EmptyDataset: return "EmptyDataset";
    case ErrorCode::GridTooFine: return "GridTooFine";
    case ErrorCode::RadiusExceedsCell: return "RadiusExceedsCell";
    case ErrorCode::ConfigMismatch: return "ConfigMismatch";
    case ErrorCode::AlreadySampled: return "AlreadySampled";
    case ErrorCode::NotSampled: return "NotSampled";
    case ErrorCode::TooManySamples: return "TooManySamples";
    case ErrorCode::InsufficientSupport: return "InsufficientSupport";
    case ErrorCode::NoValueDimensions: return "NoValueDimensions";
    case ErrorCode::ShapeMismatch: return "ShapeMismatch";
    case ErrorCode::UnsupportedDimension: return "UnsupportedDimension";
    case ErrorCode::FormatError: return "FormatError";
  }
  return "UnknownError";
}

void update_bounds(PointCloud& cloud) {
  if (cloud.positions.rows() == 0) {
    cloud.bbox_min.resize(cloud.positions.cols());
    cloud.bbox_max.resize(cloud.positions.cols());
    cloud.bbox_min.setZero();
    cloud.bbox_max.setZero();
    return;
  }
  cloud.bbox_min = cloud.positions.colwise().minCoeff();
  cloud.bbox_max = cloud.positions.colwise().maxCoeff();
}

PointCloud make_point_cloud(Matrix positions, Matrix values) {
  PointCloud cloud;
  cloud.positions = std::move(positions);
  if (values.rows() == 0 && values.cols() == 0) {
    values.resize(cloud.positions.rows(), 0);
  }
  cloud.values = std::move(values);
  update_bounds(cloud);
  return cloud;
}

ValidationReport validate(const PointCloud& cloud) {
  ValidationReport report;
  const Index n = cloud.positions.rows();
  const Index d = cloud.positions.cols();
  if (n == 0) {
    report.issues.push_back({ErrorCode::EmptyDataset, "point cloud has no points"});
    return report;
  }
  if (d < 1 || d > 4) {
    report.issues.push_back(
        {ErrorCode::InvalidData, "dimension must be in [1, 4], got " + std::to_string(d)});
  }
  if (cloud.values.rows() != 0 && cloud.values.rows() != n) {
    report.issues.push_back({ErrorCode::InvalidData, "values row count does not match positions"});
  }
  if (!cloud.positions.allFinite()) {
    for (Index i = 0; i < n; ++i) {
      if (!cloud.positions.row(i).allFinite()) {
        report.issues.push_back(
            {ErrorCode::InvalidData, "non-finite coordinate at point " + std::to_string(i)});
        break;
      }
    }
  }
  if (cloud.values.size() > 0 && !cloud.values.allFinite()) {
    for (Index i = 0; i < cloud.values.rows(); ++i) {
      if (!cloud.values.row(i).allFinite()) {
        report.issues.push_back(
            {ErrorCode::InvalidData, "non-finite value at point " + std::to_string(i)});
        break;
      }
    }
  }
  if (cloud.bbox_min.size() != d || cloud.bbox_max.size() != d) {
    report.issues.push_back({ErrorCode::InvalidData, "bounding box has wrong dimension"});
  } else if (cloud.positions.allFinite()) {
    bool contained = true;
    for (Index i = 0; i < n && contained; ++i) {
      for (Index a = 0; a < d; ++a) {
        const double x = cloud.positions(i, a);
        if (x < cloud.bbox_min[a] || x > cloud.bbox_max[a]) {
          report.issues.push_back(
              {ErrorCode::InvalidData, "bounding box does not contain point " + std::to_string(i)});
          contained = false;
          break;
        }
      }
    }
  }
  return report;
}

void validate_or_throw(const PointCloud& cloud) {
  const ValidationReport report = validate(cloud);
  if (!report.ok()) throw Error(report.issues.front().code, report.issues.front().message);
}

ValidationReport validate(const TrajectoryDataset& data) {
  ValidationReport report;
  if (data.trajectories.empty()) {
    report.issues.push_back({ErrorCode::EmptyDataset, "trajectory dataset has no trajectories"});
    return report;
  }
  if (data.num_steps < 1) {
    report.issues.push_back({ErrorCode::InvalidData, "num_steps must be positive"});
  }
  std::unordered_set<std::uint64_t> ids;
  bool reported_range = false, reported_finite = false, reported_shape = false, reported_dup = false;
  for (const Trajectory& t : data.trajectories) {
    if (!reported_dup && !ids.insert(t.id).second) {
      report.issues.push_back(
          {ErrorCode::InvalidData, "duplicate trajectory id " + std::to_string(t.id)});
      reported_dup = true;
    }
    if (!reported_range &&
        (t.start_step < 0 || t.step_count() < 1 || t.end_step() > data.num_steps - 1)) {
      report.issues.push_back(
          {ErrorCode::InvalidData, "trajectory " + std::to_string(t.id) + " has invalid step range"});
      reported_range = true;
    }
    if (!reported_shape &&
        (t.positions.cols() != data.dim ||
         (t.values.size() > 0 && (t.values.cols() != data.value_dims || t.values.rows() != t.positions.rows())) ||
         (data.value_dims > 0 && t.values.rows() != t.positions.rows()))) {
      report.issues.push_back(
          {ErrorCode::InvalidData, "trajectory " + std::to_string(t.id) + " has inconsistent shape"});
      reported_shape = true;
    }
    if (!reported_finite && (!t.positions.allFinite() || (t.values.size() > 0 && !t.values.allFinite()))) {
      report.issues.push_back(
          {ErrorCode::InvalidData, "trajectory " + std::to_string(t.id) + " has non-finite entries"});
      reported_finite = true;
    }
  }
  return report;
}

void validate_or_throw(const TrajectoryDataset& data) {
  const ValidationReport report = validate(data);
  if (!report.ok()) throw Error(report.issues.front().code, report.issues.front().message);
}

std::uint64_t Rng::next_below(std::uint64_t bound) {
  if (bound == 0) throw Error(ErrorCode::InvalidArgument, "next_below bound must be positive");
  const std::uint64_t threshold = (0 - bound) % bound;
  for (;;) {
    const std::uint64_t r = next_u64();
    if (r >= threshold) return r % bound;
  }
}

std::uint64_t splitmix64(std::uint64_t& state) {
  state += 0x9E3779B97F4A7C15ull;
  std::uint64_t z = state;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
  return z ^ (z >> 31);
}

std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream) {
  std::uint64_t state = seed ^ (stream * 0xA24BAED4963EE407ull + 0x9FB21C651E98DF25ull);
  splitmix64(state);
  return splitmix64(state);
}

double default_kernel_size(const PointCloud& cloud) {
  const Index n = cloud.size();
  const Index d = cloud.dim();
  if (n < 1 || d < 1) throw Error(ErrorCode::EmptyDataset, "kernel size needs a non-empty cloud");
  const RowVector extent = cloud.bbox_max - cloud.bbox_min;
  double max_extent = 0.0;
  for (Index a = 0; a < d; ++a) max_extent = std::max(max_extent, extent[a]);
  if (max_extent == 0.0) return 1.0;  // all points coincide
  double volume = 1.0;
  for (Index a = 0; a < d; ++a) volume *= (extent[a] > 0.0 ? extent[a] : max_extent);
  return 2.0 * std::pow(volume / static_cast<double>(n), 1.0 / static_cast<double>(d));
}

}  // namespace vcs
