#pragma once

#include <Eigen/Core>

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

namespace vcs {

using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;
using Array = Eigen::ArrayXd;
using RowVector = Eigen::RowVectorXd;
using Index = Eigen::Index;

inline constexpr Index kNoRank = std::numeric_limits<Index>::max();

enum class ErrorCode {
  InvalidArgument,
  InvalidData,
  EmptyDataset,
  GridTooFine,
  RadiusExceedsCell,
  ConfigMismatch,
  AlreadySampled,
  NotSampled,
  TooManySamples,
  InsufficientSupport,
  NoValueDimensions,
  ShapeMismatch,
  UnsupportedDimension,
  FormatError,
};

const char* error_code_name(ErrorCode code);

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(error_code_name(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Scattered dataset: n points in d-dimensional space, each carrying m
/// real values. m = 0 is allowed for purely spatial sampling.
struct PointCloud {
  Matrix positions;  // n x d
  Matrix values;     // n x m
  RowVector bbox_min;
  RowVector bbox_max;

  Index size() const { return positions.rows(); }
  Index dim() const { return positions.cols(); }
  Index value_dims() const { return values.cols(); }
};

/// Recomputes the bounding box from the positions.
void update_bounds(PointCloud& cloud);

PointCloud make_point_cloud(Matrix positions, Matrix values);

struct ValidationIssue {
  ErrorCode code;
  std::string message;
};

struct ValidationReport {
  std::vector<ValidationIssue> issues;
  bool ok() const { return issues.empty(); }
};

/// Checks the PointCloud invariants. Reports the first violation found in
/// each category instead of throwing.
ValidationReport validate(const PointCloud& cloud);

/// Throws Error for the first reported issue, if any.
void validate_or_throw(const PointCloud& cloud);

enum class SamplingMode { Uniform, Entropy, CustomImportance };

struct SamplerConfig {
  Index target_count = 0;
  std::optional<double> base_kernel_size;  // defaults to default_kernel_size()
  double initial_fraction = 0.1;
  int histogram_bins = 64;
  Index batch_max = 12288;
  Index error_batch = 32;
  std::uint64_t rng_seed = 0;
  SamplingMode mode = SamplingMode::Uniform;
  std::optional<double> error_threshold;
};

struct ErrorGuidedStats {
  double final_mean_error = 0.0;
  double sampling_fraction = 0.0;
  bool threshold_reached = false;
  std::vector<double> mean_history;  // running mean after each batch
};

/// Rank-ordered sampling result. Entry t of indices_by_rank is the point
/// selected with rank t; any prefix is itself a valid sample set.
struct SampleResult {
  std::vector<Index> indices_by_rank;
  Array insertion_density;  // sample density each point had when it was added
  Array weights;            // reciprocal-importance weights, 1.0 for uniform
  double kernel_size_used = 0.0;
  SamplerConfig config_echo;
  std::optional<ErrorGuidedStats> error_guided;

  Index count() const { return static_cast<Index>(indices_by_rank.size()); }
};

/// One trajectory: positions (and values) for consecutive time steps
/// start_step .. start_step + positions.rows() - 1.
struct Trajectory {
  std::uint64_t id = 0;
  Index start_step = 0;
  Matrix positions;  // steps x d
  Matrix values;     // steps x m

  Index step_count() const { return positions.rows(); }
  Index end_step() const { return start_step + positions.rows() - 1; }
};

struct TrajectoryDataset {
  Index num_steps = 0;  // T; valid steps are 0 .. T-1
  Index dim = 0;
  Index value_dims = 0;
  std::vector<Trajectory> trajectories;
};

ValidationReport validate(const TrajectoryDataset& data);
void validate_or_throw(const TrajectoryDataset& data);

struct TrajectorySegment {
  std::uint64_t trajectory_id = 0;
  Index start_step = 0;
  Index end_step = 0;
};

struct TrajectorySampleSet {
  std::vector<TrajectorySegment> segments;
  std::vector<Index> alive_sampled_per_step;
  std::vector<std::string> warnings;
};

/// Deterministic random stream. The mt19937_64 output sequence is fixed by
/// the standard and all derived draws are implemented explicitly (not via
/// std distributions), so identical seeds give identical streams on any
/// platform or thread count.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next_u64() { return engine_(); }
  /// Uniform in [0, 1) with 53 random bits.
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }
  /// Uniform in [0, bound), unbiased via rejection.
  std::uint64_t next_below(std::uint64_t bound);

 private:
  std::mt19937_64 engine_;
};

/// SplitMix64 step; used for cheap per-index streams in data generators.
std::uint64_t splitmix64(std::uint64_t& state);

/// Derives an independent stream seed from a base seed and a stream index.
std::uint64_t mix_seed(std::uint64_t seed, std::uint64_t stream);

/// Default base kernel size: 2 * (bbox volume / n)^(1/d). Zero-extent axes
/// fall back to the largest nonzero extent, or 1 if all extents vanish.
double default_kernel_size(const PointCloud& cloud);

}  // namespace vcs
