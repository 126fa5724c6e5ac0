#include "vcs/evaluation.hpp"

#include "vcs/grid.hpp"
#include "vcs/parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <limits>

namespace vcs {

Index RasterGrid::cell_count() const {
  Index total = 1;
  for (Index r : resolution) total *= r;
  return total;
}

RasterGrid make_raster(std::vector<Index> resolution, RowVector origin, RowVector extent) {
  if (resolution.empty() || static_cast<Index>(resolution.size()) != origin.size() ||
      origin.size() != extent.size()) {
    throw Error(ErrorCode::ShapeMismatch, "raster resolution/origin/extent disagree");
  }
  for (Index r : resolution) {
    if (r < 2) throw Error(ErrorCode::InvalidArgument, "raster resolution must be at least 2");
  }
  RasterGrid raster;
  raster.resolution = std::move(resolution);
  raster.origin = std::move(origin);
  raster.extent = std::move(extent);
  raster.values = Array::Zero(raster.cell_count());
  return raster;
}

RasterGrid reconstruct(const PointCloud& cloud, const SampleResult& samples,
                       const std::vector<Index>& resolution, const CubicSplineKernel& kernel,
                       Index value_dim) {
  const Index d = cloud.dim();
  const Index count = samples.count();
  if (count < 1) throw Error(ErrorCode::InvalidArgument, "need at least one sample");
  if (static_cast<Index>(resolution.size()) != d) {
    throw Error(ErrorCode::ShapeMismatch, "resolution rank does not match the cloud dimension");
  }
  if (value_dim < 0 || value_dim >= cloud.value_dims()) {
    throw Error(ErrorCode::InvalidArgument, "value dimension out of range");
  }

  Matrix sample_positions(count, d);
  Array sample_values(count);
  for (Index t = 0; t < count; ++t) {
    const Index id = samples.indices_by_rank[static_cast<std::size_t>(t)];
    sample_positions.row(t) = cloud.positions.row(id);
    sample_values[t] = cloud.values(id, value_dim);
  }
  const PointCloud sample_cloud = make_point_cloud(sample_positions, Matrix(count, 0));
  const UniformGrid grid = build_grid(sample_cloud, kernel.support);

  RasterGrid raster = make_raster(resolution, cloud.bbox_min, cloud.bbox_max - cloud.bbox_min);
  std::vector<double> step(static_cast<std::size_t>(d));
  for (Index a = 0; a < d; ++a) {
    step[static_cast<std::size_t>(a)] = raster.extent[a] / static_cast<double>(resolution[static_cast<std::size_t>(a)]);
  }

  const double h = kernel.support;
  parallel_for_ranges(raster.cell_count(), [&](Index begin, Index end) {
    std::vector<double> center(static_cast<std::size_t>(d));
    for (Index cell = begin; cell < end; ++cell) {
      Index rest = cell;
      for (Index a = d; a-- > 0;) {
        const Index res = raster.resolution[static_cast<std::size_t>(a)];
        center[static_cast<std::size_t>(a)] =
            raster.origin[a] + (static_cast<double>(rest % res) + 0.5) * step[static_cast<std::size_t>(a)];
        rest /= res;
      }
      double numerator = 0.0;
      double denominator = 0.0;
      for_each_neighbor(grid, sample_cloud.positions, center.data(), h, [&](Index s, double sq) {
        const double w = samples.weights[s] * detail::cubic_spline(std::sqrt(sq) / h);
        numerator += w * sample_values[s];
        denominator += w;
      });
      if (denominator > 0.0) {
        raster.values[cell] = numerator / denominator;
      } else {
        // No sample in kernel range: nearest sample wins, earlier rank on ties.
        double best = std::numeric_limits<double>::infinity();
        Index pick = 0;
        for (Index s = 0; s < count; ++s) {
          const double sq =
              detail::squared_distance(sample_cloud.positions.data() + s * d, center.data(),
                                       static_cast<int>(d));
          if (sq < best) {
            best = sq;
            pick = s;
          }
        }
        raster.values[cell] = sample_values[pick];
      }
    }
  });
  return raster;
}

double snr_db(const RasterGrid& reference, const RasterGrid& reconstruction) {
  if (reference.resolution != reconstruction.resolution) {
    throw Error(ErrorCode::ShapeMismatch, "raster resolutions differ");
  }
  double signal = 0.0;
  double residual = 0.0;
  for (Index c = 0; c < reference.values.size(); ++c) {
    const double r = reference.values[c];
    const double e = r - reconstruction.values[c];
    signal += r * r;
    residual += e * e;
  }
  if (residual == 0.0) return std::numeric_limits<double>::infinity();
  return 10.0 * std::log10(signal / residual);
}

SpectrumResult sample_spectrum(const Matrix& positions, Index resolution, Index annuli) {
  if (positions.cols() != 2) {
    throw Error(ErrorCode::UnsupportedDimension, "spectrum analysis is limited to 2-D clouds");
  }
  if (resolution < 2) throw Error(ErrorCode::InvalidArgument, "resolution must be at least 2");
  if (annuli < 1) throw Error(ErrorCode::InvalidArgument, "need at least one annulus");
  const Index n = positions.rows();
  if (n < 1) throw Error(ErrorCode::EmptyDataset, "no sample positions");

  const RowVector lo = positions.colwise().minCoeff();
  const RowVector hi = positions.colwise().maxCoeff();
  RowVector extent = hi - lo;
  for (Index a = 0; a < 2; ++a) {
    if (extent[a] <= 0.0) extent[a] = 1.0;
  }

  // Unit impulses binned onto the raster.
  Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic> field =
      Eigen::Matrix<std::complex<double>, Eigen::Dynamic, Eigen::Dynamic>::Zero(resolution,
                                                                                resolution);
  for (Index s = 0; s < n; ++s) {
    Index ix = static_cast<Index>(std::floor((positions(s, 0) - lo[0]) / extent[0] *
                                             static_cast<double>(resolution)));
    Index iy = static_cast<Index>(std::floor((positions(s, 1) - lo[1]) / extent[1] *
                                             static_cast<double>(resolution)));
    ix = std::clamp<Index>(ix, 0, resolution - 1);
    iy = std::clamp<Index>(iy, 0, resolution - 1);
    field(iy, ix) += 1.0;
  }

  Eigen::FFT<double> fft;
  using ComplexVector = Eigen::Matrix<std::complex<double>, Eigen::Dynamic, 1>;
  for (Index r = 0; r < resolution; ++r) {
    ComplexVector row = field.row(r).transpose();
    ComplexVector transformed(resolution);
    fft.fwd(transformed, row);
    field.row(r) = transformed.transpose();
  }
  for (Index c = 0; c < resolution; ++c) {
    ComplexVector col = field.col(c);
    ComplexVector transformed(resolution);
    fft.fwd(transformed, col);
    field.col(c) = transformed;
  }

  SpectrumResult result;
  result.power = make_raster({resolution, resolution}, RowVector::Zero(2),
                             RowVector::Constant(2, static_cast<double>(resolution)));
  for (Index r = 0; r < resolution; ++r) {
    for (Index c = 0; c < resolution; ++c) {
      result.power.values[r * resolution + c] = std::norm(field(r, c));
    }
  }
  result.power.values[0] = 0.0;  // DC

  const double nyquist = static_cast<double>(resolution) / 2.0;
  result.radial_profile = Array::Zero(annuli);
  Array counts = Array::Zero(annuli);
  for (Index r = 0; r < resolution; ++r) {
    const double fy = r <= resolution / 2 ? static_cast<double>(r)
                                          : static_cast<double>(r - resolution);
    for (Index c = 0; c < resolution; ++c) {
      if (r == 0 && c == 0) continue;  // DC excluded
      const double fx = c <= resolution / 2 ? static_cast<double>(c)
                                            : static_cast<double>(c - resolution);
      const double radius = std::hypot(fx, fy);
      if (radius > nyquist) continue;
      Index ring = static_cast<Index>(static_cast<double>(annuli) * radius / nyquist);
      if (ring >= annuli) ring = annuli - 1;
      result.radial_profile[ring] += result.power.values[r * resolution + c];
      counts[ring] += 1.0;
    }
  }
  for (Index k = 0; k < annuli; ++k) {
    if (counts[k] > 0.0) result.radial_profile[k] /= counts[k];
  }
  return result;
}

}  // namespace vcs
