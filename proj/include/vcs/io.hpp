#pragma once

#include "vcs/evaluation.hpp"
#include "vcs/types.hpp"

#include <string>
#include <vector>

namespace vcs {

/// sin(pi r) / (pi r) with the limit value 1 at r = 0.
double sinc_radial(double r);

/// Test signal: n seeded-uniform points in [-5, 5]^2 valued by the radial
/// sinc of their distance to the origin. Generation is per-index seeded,
/// so results do not depend on the worker count.
PointCloud generate_sinc(Index n, std::uint64_t seed);

/// Steady Arnold-Beltrami-Childress velocity field.
Eigen::Vector3d abc_velocity(const Eigen::Vector3d& p, double a, double b, double c);

/// One classic fourth-order Runge-Kutta step of the ABC flow.
Eigen::Vector3d abc_rk4_step(const Eigen::Vector3d& p, double dt, double a, double b, double c);

/// Trajectories of the ABC flow seeded uniformly in [0, 2 pi]^3 and
/// integrated with fixed-step RK4 over [t_begin, t_end]. Every trajectory
/// spans all steps; the single value dimension carries the local speed.
TrajectoryDataset generate_abc(Index count, double t_begin, double t_end, double dt,
                               std::uint64_t seed, double a = 1.7320508075688772,
                               double b = 1.4142135623730951, double c = 1.0);

// Binary containers (little-endian, doubles throughout). Scattered data:
//   "VCSD" u32 version u32 d u32 m u64 n | n*d position doubles |
//   n*m value doubles | optional "RANK" + n u64 ranks.
// Rank-ordered files stream by prefix: the first k records are exactly the
// k lowest ranks.
void write_point_cloud(const std::string& path, const PointCloud& cloud,
                       const std::vector<Index>* ranks = nullptr);
PointCloud read_point_cloud(const std::string& path, std::vector<Index>* ranks = nullptr);

// Trajectories: "VCTJ" u32 version u32 T u32 d u32 m u64 count, then per
// trajectory: u64 id, u32 start, u32 end, (end-start+1)*d positions,
// (end-start+1)*m values.
void write_trajectories(const std::string& path, const TrajectoryDataset& data);
TrajectoryDataset read_trajectories(const std::string& path);

// Rasters: "VCRG" u32 version u32 d, d u32 resolutions, d origin doubles,
// d extent doubles, then the cell values.
void write_raster(const std::string& path, const RasterGrid& raster);
RasterGrid read_raster(const std::string& path);

// Text interchange: header row x0..x{d-1},v0..v{m-1}, one point per line,
// 17 significant digits (round-trip exact).
void write_point_cloud_csv(const std::string& path, const PointCloud& cloud);
PointCloud read_point_cloud_csv(const std::string& path);
void write_raster_csv(const std::string& path, const RasterGrid& raster);

}  // namespace vcs
