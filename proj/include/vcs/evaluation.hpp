#pragma once

#include "vcs/kernel.hpp"
#include "vcs/types.hpp"

#include <vector>

namespace vcs {

/// Dense raster over a rectangular domain; values are stored row-major
/// with the last axis fastest.
struct RasterGrid {
  std::vector<Index> resolution;  // per axis, >= 2
  RowVector origin;
  RowVector extent;
  Array values;

  Index cell_count() const;
};

RasterGrid make_raster(std::vector<Index> resolution, RowVector origin, RowVector extent);

/// Shepard-style scattered-data interpolation of one value dimension onto
/// a raster over the cloud's bounding box, using the sample weights and
/// the same compact kernel the sampler used. Cells with no sample in
/// kernel range take the nearest sample's value.
RasterGrid reconstruct(const PointCloud& cloud, const SampleResult& samples,
                       const std::vector<Index>& resolution, const CubicSplineKernel& kernel,
                       Index value_dim = 0);

/// 10 log10(sum ref^2 / sum (ref - rec)^2); +infinity when the residual is
/// exactly zero.
double snr_db(const RasterGrid& reference, const RasterGrid& reconstruction);

struct SpectrumResult {
  RasterGrid power;      // squared DFT magnitude, DC zeroed, unshifted layout
  Array radial_profile;  // mean power per frequency annulus (DC excluded)
};

/// Periodogram of a 2-D sample pattern: positions are binned as unit
/// impulses at the given resolution, transformed, and radially averaged
/// over `annuli` rings up to the Nyquist frequency.
SpectrumResult sample_spectrum(const Matrix& positions, Index resolution, Index annuli = 64);

}  // namespace vcs
