#include "isolight/forward.hpp"

#include <cmath>
#include <random>

#include "isolight/dft.hpp"

namespace isolight {

namespace {

Index wrap(Index i, Index n) {
  const Index r = i % n;
  return r < 0 ? r + n : r;
}

// Offsets d within [lo, hi] with d == target (mod period).
template <typename F>
void for_each_alias(Index target, Index period, Index lo, Index hi, F&& f) {
  Index d = lo + wrap(target - lo, period);
  for (; d <= hi; d += period) f(d);
}

}  // namespace

CircularConvolution::CircularConvolution(const PsfKernel& psf, Index rows, Index cols) {
  if (rows < 1 || cols < 1) throw ShapeError("convolution field must be nonempty");
  const auto& src = psf.source();
  if (src && src->field_rows == rows && src->field_cols == cols) {
    transfer_ = build_otf(*src);
    return;
  }
  ImageGrid embedded = ImageGrid::Zero(rows, cols);
  const ImageGrid& values = psf.values();
  const Cell origin = psf.origin();
  for (Index i = 0; i < values.rows(); ++i)
    for (Index j = 0; j < values.cols(); ++j)
      embedded(wrap(i - origin.row, rows), wrap(j - origin.col, cols)) += values(i, j);
  transfer_ = dft::fft2(embedded);
}

ImageGrid CircularConvolution::operator()(const ImageGrid& ideal) const {
  if (ideal.rows() != transfer_.rows() || ideal.cols() != transfer_.cols()) {
    throw ShapeError("image does not match the convolution field");
  }
  SpectrumGrid spectrum = dft::fft2(ideal);
  spectrum.array() *= transfer_.array();
  return dft::ifft2(spectrum).real();
}

ImageGrid observe_spatial(const ImageGrid& ideal, const PsfKernel& psf) {
  return CircularConvolution(psf, ideal.rows(), ideal.cols())(ideal);
}

Eigen::VectorXd observe_cells(const ImageGrid& ideal, const PsfKernel& psf,
                              std::span<const Cell> cells) {
  const Index rows = ideal.rows();
  const Index cols = ideal.cols();

  Index r0 = rows, r1 = -1, c0 = cols, c1 = -1;
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) {
      if (ideal(r, c) == 0.0) continue;
      r0 = std::min(r0, r);
      r1 = std::max(r1, r);
      c0 = std::min(c0, c);
      c1 = std::max(c1, c);
    }
  }

  const Cell origin = psf.origin();
  const Index du_lo = -origin.row;
  const Index du_hi = psf.values().rows() - 1 - origin.row;
  const Index dv_lo = -origin.col;
  const Index dv_hi = psf.values().cols() - 1 - origin.col;

  Eigen::VectorXd out = Eigen::VectorXd::Zero(static_cast<Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const Cell target = cells[i];
    if (target.row < 0 || target.row >= rows || target.col < 0 || target.col >= cols) {
      throw BoundsError("observation cell outside the image");
    }
    double sum = 0.0;
    for (Index k = r0; k <= r1; ++k) {
      for (Index l = c0; l <= c1; ++l) {
        const double x = ideal(k, l);
        if (x == 0.0) continue;
        for_each_alias(target.row - k, rows, du_lo, du_hi, [&](Index du) {
          for_each_alias(target.col - l, cols, dv_lo, dv_hi,
                         [&](Index dv) { sum += x * psf(du, dv); });
        });
      }
    }
    out(static_cast<Index>(i)) = sum;
  }
  return out;
}

SpectrumGrid observe_spectrum(const ImageGrid& ideal, const SpectrumGrid& otf) {
  if (ideal.rows() != otf.rows() || ideal.cols() != otf.cols()) {
    throw ShapeError("ideal image and OTF shapes differ");
  }
  SpectrumGrid spectrum = dft::normalized_spectrum(ideal);
  for (Index u = 0; u < otf.rows(); ++u)
    for (Index v = 0; v < otf.cols(); ++v)
      spectrum(u, v) = otf(u, v) == 0.0 ? dft::Complex{} : spectrum(u, v) * otf(u, v);
  return spectrum;
}

double noise_sigma(double peak, double psnr_db) { return peak / std::pow(10.0, psnr_db / 20.0); }

ImageGrid add_noise(const ImageGrid& observed, const NoiseSpec& spec) {
  if (observed.size() == 0) throw ShapeError("cannot add noise to an empty image");
  if (!spec.enabled()) return observed;
  if (!(spec.psnr_db > 0.0)) throw ParameterError("PSNR must be positive");

  const double sigma = noise_sigma(observed.maxCoeff(), spec.psnr_db);
  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  ImageGrid noisy = observed;
  for (Index i = 0; i < noisy.size(); ++i) noisy.data()[i] += sigma * normal(rng);
  return noisy;
}

double measured_psnr(const ImageGrid& noisy, const ImageGrid& clean) {
  if (noisy.rows() != clean.rows() || noisy.cols() != clean.cols()) {
    throw ShapeError("PSNR operands differ in shape");
  }
  const double rms = std::sqrt((noisy - clean).squaredNorm() / static_cast<double>(clean.size()));
  return 20.0 * std::log10(clean.maxCoeff() / rms);
}

double extra_light_ratio(const ImageGrid& full_sample, const RoiSpec& roi, const PsfKernel& psf) {
  check_roi(roi, full_sample.rows(), full_sample.cols());
  const ImageGrid isolated =
      scatter_roi(vectorize_roi(full_sample, roi), roi, full_sample.rows(), full_sample.cols());

  const CircularConvolution convolve(psf, full_sample.rows(), full_sample.cols());
  const double with_surround = vectorize_roi(convolve(full_sample), roi).sum();
  const double alone = vectorize_roi(convolve(isolated), roi).sum();
  if (alone == 0.0) throw DegenerateInputError("isolated ROI collects no light");
  return with_surround / alone;
}

}  // namespace isolight
