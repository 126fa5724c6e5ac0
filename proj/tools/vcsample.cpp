// Command-line front end for the void-and-cluster sampling toolkit.

#include "vcs/baselines.hpp"
#include "vcs/error.hpp"
#include "vcs/evaluation.hpp"
#include "vcs/io.hpp"
#include "vcs/sampler.hpp"
#include "vcs/trajectory.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <unordered_map>

namespace {

using namespace vcs;

constexpr int kExitOk = 0;
constexpr int kExitValidation = 2;
constexpr int kExitThresholdNotReached = 3;

PointCloud load_cloud(const std::string& path, std::vector<Index>* ranks = nullptr) {
  PointCloud cloud = path.size() > 4 && path.substr(path.size() - 4) == ".csv"
                         ? read_point_cloud_csv(path)
                         : read_point_cloud(path, ranks);
  validate_or_throw(cloud);
  return cloud;
}

/// Writes the selected subset in rank order (with an explicit rank section),
/// so that any file prefix is itself a valid sample set.
void write_result(const std::string& path, const PointCloud& cloud, const SampleResult& result) {
  const Index k = result.count();
  Matrix positions(k, cloud.dim());
  Matrix values(k, cloud.value_dims());
  std::vector<Index> ranks(static_cast<std::size_t>(k));
  for (Index t = 0; t < k; ++t) {
    const Index id = result.indices_by_rank[static_cast<std::size_t>(t)];
    positions.row(t) = cloud.positions.row(id);
    values.row(t) = cloud.values.row(id);
    ranks[static_cast<std::size_t>(t)] = t;
  }
  const PointCloud ordered = make_point_cloud(std::move(positions), std::move(values));
  write_point_cloud(path, ordered, &ranks);
}

void write_weights_csv(const std::string& path, const SampleResult& result) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::FormatError, "cannot open " + path + " for writing");
  out << "rank,weight\n";
  for (Index t = 0; t < result.count(); ++t) {
    char line[64];
    std::snprintf(line, sizeof(line), "%lld,%.17g\n", static_cast<long long>(t),
                  result.weights[t]);
    out << line;
  }
}

Array read_weights_csv(const std::string& path, Index expected) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::FormatError, "cannot open " + path);
  std::string line;
  std::getline(in, line);  // header
  Array weights = Array::Ones(expected);
  Index row = 0;
  while (std::getline(in, line) && row < expected) {
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw Error(ErrorCode::FormatError, path + ": missing comma");
    weights[row++] = std::stod(line.substr(comma + 1));
  }
  if (row != expected) throw Error(ErrorCode::FormatError, path + ": weight count mismatch");
  return weights;
}

/// Maps each row of the sample file back to an index of the full cloud by
/// exact binary position match.
std::vector<Index> match_samples(const PointCloud& full, const PointCloud& samples) {
  if (samples.dim() != full.dim()) {
    throw Error(ErrorCode::ShapeMismatch, "sample file dimension differs from the full dataset");
  }
  const Index d = full.dim();
  std::unordered_map<std::string, std::vector<Index>> by_position;
  for (Index i = 0; i < full.size(); ++i) {
    std::string key(reinterpret_cast<const char*>(full.positions.data() + i * d),
                    sizeof(double) * static_cast<std::size_t>(d));
    by_position[key].push_back(i);
  }
  std::vector<Index> ids;
  ids.reserve(static_cast<std::size_t>(samples.size()));
  for (Index s = 0; s < samples.size(); ++s) {
    std::string key(reinterpret_cast<const char*>(samples.positions.data() + s * d),
                    sizeof(double) * static_cast<std::size_t>(d));
    auto it = by_position.find(key);
    if (it == by_position.end() || it->second.empty()) {
      throw Error(ErrorCode::InvalidData,
                  "sample row " + std::to_string(s) + " not found in the full dataset");
    }
    ids.push_back(it->second.back());
    it->second.pop_back();
  }
  return ids;
}

double pick_error_support(const PointCloud& full, Index sample_count, double override_value) {
  if (override_value > 0.0) return override_value;
  return scaled_kernel_size(default_kernel_size(full), full.size(), sample_count,
                            static_cast<int>(full.dim()));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"vcsample: blue-noise data reduction for scattered datasets"};
  app.require_subcommand(1);

  // ---- generate ----------------------------------------------------------
  auto* generate = app.add_subcommand("generate", "create synthetic datasets");
  generate->require_subcommand(1);

  std::int64_t gen_n = 500000;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  auto* gen_sinc = generate->add_subcommand("sinc", "random points valued by a radial sinc");
  gen_sinc->add_option("--n", gen_n, "point count");
  gen_sinc->add_option("--seed", gen_seed, "rng seed");
  gen_sinc->add_option("-o,--output", gen_out, "output .vcsd")->required();

  std::int64_t abc_count = 10000;
  double abc_t0 = 0.0, abc_t1 = 10.0, abc_dt = 0.1;
  double abc_a = std::sqrt(3.0), abc_b = std::sqrt(2.0), abc_c = 1.0;
  std::uint64_t abc_seed = 0;
  std::string abc_out;
  auto* gen_abc = generate->add_subcommand("abc", "ABC-flow trajectories (RK4)");
  gen_abc->add_option("--count", abc_count, "trajectory count");
  gen_abc->add_option("--t-begin", abc_t0, "start time");
  gen_abc->add_option("--t-end", abc_t1, "end time");
  gen_abc->add_option("--dt", abc_dt, "integration step");
  gen_abc->add_option("--a", abc_a, "field coefficient A");
  gen_abc->add_option("--b", abc_b, "field coefficient B");
  gen_abc->add_option("--c", abc_c, "field coefficient C");
  gen_abc->add_option("--seed", abc_seed, "rng seed");
  gen_abc->add_option("-o,--output", abc_out, "output .vctj")->required();

  // ---- sample -------------------------------------------------------------
  std::string sample_in, sample_out, weights_out;
  SamplerConfig config;
  std::string mode = "uniform";
  double kernel_size = 0.0;
  double error_threshold = -1.0;
  auto* sample_cmd = app.add_subcommand("sample", "void-and-cluster sampling");
  sample_cmd->add_option("input", sample_in, "input .vcsd or .csv")->required();
  sample_cmd->add_option("--count", config.target_count, "samples to take")->required();
  sample_cmd->add_option("--mode", mode, "uniform | entropy")
      ->check(CLI::IsMember({"uniform", "entropy"}));
  sample_cmd->add_option("--kernel-size", kernel_size, "base kernel size (default: derived)");
  sample_cmd->add_option("--bins", config.histogram_bins, "entropy histogram bins");
  sample_cmd->add_option("--batch-max", config.batch_max, "max voids per parallel batch");
  sample_cmd->add_option("--error-batch", config.error_batch, "batch size under error guidance");
  sample_cmd->add_option("--error-threshold", error_threshold,
                         "stop when the mean local error drops below this");
  sample_cmd->add_option("--initial-fraction", config.initial_fraction,
                         "fraction of the target taken as initial random samples");
  sample_cmd->add_option("--seed", config.rng_seed, "rng seed");
  sample_cmd->add_option("-o,--output", sample_out, "output .vcsd (rank ordered)")->required();
  sample_cmd->add_option("--weights-out", weights_out, "per-sample weights .csv");

  // ---- sample-trajectories -------------------------------------------------
  std::string traj_in, traj_out, segments_out;
  std::int64_t eps_t = 0;
  auto* traj_cmd = app.add_subcommand("sample-trajectories", "iterative trajectory sampling");
  traj_cmd->add_option("input", traj_in, "input .vctj")->required();
  traj_cmd->add_option("--count", config.target_count, "trajectories to keep per step")->required();
  traj_cmd->add_option("--eps-t", eps_t, "max forced stop/start exchanges per step");
  traj_cmd->add_option("--mode", mode, "uniform | entropy")
      ->check(CLI::IsMember({"uniform", "entropy"}));
  traj_cmd->add_option("--kernel-size", kernel_size, "base kernel size (default: derived)");
  traj_cmd->add_option("--bins", config.histogram_bins, "entropy histogram bins");
  traj_cmd->add_option("--seed", config.rng_seed, "rng seed");
  traj_cmd->add_option("-o,--output", traj_out, "output .vctj of sampled segments")->required();
  traj_cmd->add_option("--segments-out", segments_out, "segment table .csv");

  // ---- baseline -------------------------------------------------------------
  std::string baseline_in, baseline_out, baseline_kind = "random";
  std::int64_t baseline_count = 0;
  double r_min = 0.0;
  std::uint64_t baseline_seed = 0;
  int baseline_bins = 64;
  auto* baseline_cmd = app.add_subcommand("baseline", "comparison samplers");
  baseline_cmd->add_option("input", baseline_in, "input .vcsd or .csv")->required();
  baseline_cmd->add_option("--kind", baseline_kind, "random | entropy-random | kdtree | poisson")
      ->check(CLI::IsMember({"random", "entropy-random", "kdtree", "poisson"}));
  baseline_cmd->add_option("--count", baseline_count, "samples to take (not for poisson)");
  baseline_cmd->add_option("--r-min", r_min, "poisson hard-core radius (default: derived)");
  baseline_cmd->add_option("--bins", baseline_bins, "entropy histogram bins");
  baseline_cmd->add_option("--seed", baseline_seed, "rng seed");
  baseline_cmd->add_option("-o,--output", baseline_out, "output .vcsd (rank ordered)")->required();

  // ---- error -----------------------------------------------------------------
  std::string error_full, error_samples, per_point_out;
  auto* error_cmd = app.add_subcommand("error", "local Wasserstein error of a sample file");
  error_cmd->add_option("full", error_full, "full dataset .vcsd")->required();
  error_cmd->add_option("samples", error_samples, "sampled subset .vcsd")->required();
  error_cmd->add_option("--kernel-size", kernel_size, "kernel support (default: derived)");
  error_cmd->add_option("--per-point", per_point_out, "per-point errors .csv");

  // ---- reconstruct --------------------------------------------------------
  std::string rec_in, rec_out, rec_csv, rec_weights;
  std::int64_t resolution = 512;
  std::int64_t rec_dim = 0;
  auto* rec_cmd = app.add_subcommand("reconstruct", "scattered-data interpolation to a raster");
  rec_cmd->add_option("input", rec_in, "sampled .vcsd")->required();
  rec_cmd->add_option("--res", resolution, "cells per axis");
  rec_cmd->add_option("--dim", rec_dim, "value dimension to reconstruct");
  rec_cmd->add_option("--kernel-size", kernel_size, "kernel support (default: derived)");
  rec_cmd->add_option("--weights", rec_weights, "per-sample weights .csv (from --weights-out)");
  rec_cmd->add_option("-o,--output", rec_out, "output .vcrg")->required();
  rec_cmd->add_option("--csv", rec_csv, "also write cell values as .csv");

  // ---- spectrum --------------------------------------------------------------
  std::string spec_in, spec_out, profile_out;
  std::int64_t annuli = 64;
  auto* spec_cmd = app.add_subcommand("spectrum", "periodogram of a 2-D sample pattern");
  spec_cmd->add_option("input", spec_in, "sampled .vcsd")->required();
  spec_cmd->add_option("--res", resolution, "raster resolution");
  spec_cmd->add_option("--annuli", annuli, "radial profile rings");
  spec_cmd->add_option("-o,--output", spec_out, "output power .vcrg")->required();
  spec_cmd->add_option("--profile-out", profile_out, "radial profile .csv");

  CLI11_PARSE(app, argc, argv);

  try {
    if (gen_sinc->parsed()) {
      write_point_cloud(gen_out, generate_sinc(gen_n, gen_seed));
      return kExitOk;
    }
    if (gen_abc->parsed()) {
      write_trajectories(abc_out, generate_abc(abc_count, abc_t0, abc_t1, abc_dt, abc_seed,
                                               abc_a, abc_b, abc_c));
      return kExitOk;
    }

    if (sample_cmd->parsed()) {
      const PointCloud cloud = load_cloud(sample_in);
      config.mode = mode == "entropy" ? SamplingMode::Entropy : SamplingMode::Uniform;
      if (kernel_size > 0.0) config.base_kernel_size = kernel_size;
      if (error_threshold >= 0.0) config.error_threshold = error_threshold;
      const SampleResult result = sample(cloud, config);
      write_result(sample_out, cloud, result);
      if (!weights_out.empty()) write_weights_csv(weights_out, result);
      if (result.error_guided) {
        std::cerr << "mean error " << result.error_guided->final_mean_error << " at "
                  << 100.0 * result.error_guided->sampling_fraction << "% sampling\n";
        if (!result.error_guided->threshold_reached) {
          std::cerr << "error threshold not reached\n";
          return kExitThresholdNotReached;
        }
      }
      return kExitOk;
    }

    if (traj_cmd->parsed()) {
      const TrajectoryDataset data = read_trajectories(traj_in);
      config.mode = mode == "entropy" ? SamplingMode::Entropy : SamplingMode::Uniform;
      if (kernel_size > 0.0) config.base_kernel_size = kernel_size;
      const TrajectorySampleSet set = sample_trajectories(data, config, eps_t);
      for (const std::string& warning : set.warnings) std::cerr << "warning: " << warning << "\n";

      std::unordered_map<std::uint64_t, const Trajectory*> by_id;
      for (const Trajectory& t : data.trajectories) by_id[t.id] = &t;
      TrajectoryDataset sampled;
      sampled.num_steps = data.num_steps;
      sampled.dim = data.dim;
      sampled.value_dims = data.value_dims;
      for (std::size_t k = 0; k < set.segments.size(); ++k) {
        const TrajectorySegment& seg = set.segments[k];
        const Trajectory& source = *by_id.at(seg.trajectory_id);
        Trajectory out;
        out.id = static_cast<std::uint64_t>(k);  // segment files use fresh ids
        out.start_step = seg.start_step;
        const Index offset = seg.start_step - source.start_step;
        const Index span = seg.end_step - seg.start_step + 1;
        out.positions = source.positions.middleRows(offset, span);
        out.values = source.values.middleRows(offset, span);
        sampled.trajectories.push_back(std::move(out));
      }
      write_trajectories(traj_out, sampled);
      if (!segments_out.empty()) {
        std::ofstream out(segments_out);
        out << "segment,trajectory_id,start_step,end_step\n";
        for (std::size_t k = 0; k < set.segments.size(); ++k) {
          out << k << "," << set.segments[k].trajectory_id << "," << set.segments[k].start_step
              << "," << set.segments[k].end_step << "\n";
        }
      }
      return kExitOk;
    }

    if (baseline_cmd->parsed()) {
      const PointCloud cloud = load_cloud(baseline_in);
      Rng rng(baseline_seed);
      SampleResult result;
      if (baseline_kind == "poisson") {
        if (r_min <= 0.0) {
          const Index count = baseline_count > 0 ? baseline_count : cloud.size() / 100 + 1;
          r_min = 0.5 * scaled_kernel_size(default_kernel_size(cloud), cloud.size(), count,
                                           static_cast<int>(cloud.dim()));
        }
        result = poisson_disk_subset(cloud, r_min, rng);
        std::cerr << "poisson disk kept " << result.count() << " samples\n";
      } else if (baseline_kind == "kdtree") {
        result = stratified_kdtree_sample(cloud, baseline_count, rng);
      } else if (baseline_kind == "entropy-random") {
        const double support = pick_error_support(cloud, std::max<Index>(baseline_count, 1),
                                                  kernel_size);
        const UniformGrid grid = build_grid(cloud, support);
        std::vector<Index> dims(static_cast<std::size_t>(cloud.value_dims()));
        std::iota(dims.begin(), dims.end(), Index(0));
        const ImportancePmf pmf =
            entropy_importance(cloud, grid, make_kernel(support), dims, baseline_bins);
        result = random_sample(cloud, baseline_count, &pmf, rng);
      } else {
        result = random_sample(cloud, baseline_count, nullptr, rng);
      }
      write_result(baseline_out, cloud, result);
      return kExitOk;
    }

    if (error_cmd->parsed()) {
      const PointCloud full = load_cloud(error_full);
      const PointCloud samples = load_cloud(error_samples);
      const std::vector<Index> ids = match_samples(full, samples);
      const double support = pick_error_support(full, samples.size(), kernel_size);
      const UniformGrid grid = build_grid(full, support);
      const ErrorField field = error_field(full, grid, make_kernel(support), ids);
      std::cout << "mean " << field.mean << "\n";
      for (Index dim = 0; dim < full.value_dims(); ++dim) {
        std::cout << "dim " << dim << " mean " << field.per_dim.col(dim).mean() << " max "
                  << field.per_dim.col(dim).maxCoeff() << "\n";
      }
      if (!per_point_out.empty()) {
        std::ofstream out(per_point_out);
        out << "point,reduced";
        for (Index dim = 0; dim < full.value_dims(); ++dim) out << ",dim" << dim;
        out << "\n";
        for (Index p = 0; p < full.size(); ++p) {
          out << p << "," << field.reduced[p];
          for (Index dim = 0; dim < full.value_dims(); ++dim) out << "," << field.per_dim(p, dim);
          out << "\n";
        }
      }
      return kExitOk;
    }

    if (rec_cmd->parsed()) {
      const PointCloud samples = load_cloud(rec_in);
      SampleResult as_result;
      as_result.indices_by_rank.resize(static_cast<std::size_t>(samples.size()));
      std::iota(as_result.indices_by_rank.begin(), as_result.indices_by_rank.end(), Index(0));
      as_result.insertion_density = Array::Zero(samples.size());
      as_result.weights = rec_weights.empty() ? Array::Ones(samples.size())
                                              : read_weights_csv(rec_weights, samples.size());
      const double support = kernel_size > 0.0 ? kernel_size : default_kernel_size(samples);
      as_result.kernel_size_used = support;
      const std::vector<Index> res(static_cast<std::size_t>(samples.dim()), resolution);
      const RasterGrid raster = reconstruct(samples, as_result, res, make_kernel(support), rec_dim);
      write_raster(rec_out, raster);
      if (!rec_csv.empty()) write_raster_csv(rec_csv, raster);
      return kExitOk;
    }

    if (spec_cmd->parsed()) {
      const PointCloud samples = load_cloud(spec_in);
      const SpectrumResult spectrum = sample_spectrum(samples.positions, resolution, annuli);
      write_raster(spec_out, spectrum.power);
      if (!profile_out.empty()) {
        std::ofstream out(profile_out);
        out << "annulus,power\n";
        for (Index k = 0; k < spectrum.radial_profile.size(); ++k) {
          out << k << "," << spectrum.radial_profile[k] << "\n";
        }
      }
      return kExitOk;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "unexpected error: " << e.what() << "\n";
    return 1;
  }
  return kExitOk;
}
