#include "isolight/dft.hpp"

#include <unsupported/Eigen/FFT>

#include <cmath>
#include <numbers>
#include <vector>

namespace isolight::dft {

Complex twiddle(Index m, Index u, Index period) {
  Index r = (m % period) * (u % period) % period;
  if (r < 0) r += period;
  const double angle = -2.0 * std::numbers::pi * static_cast<double>(r) / static_cast<double>(period);
  return {std::cos(angle), std::sin(angle)};
}

namespace {

// Rows then columns, in place. Eigen::FFT scales the inverse by 1/n.
// A length-1 transform is the identity (and kissfft does not accept it).
void transform_2d(SpectrumGrid& grid, bool inverse) {
  Eigen::FFT<double> fft;
  std::vector<Complex> in;
  std::vector<Complex> out;

  in.resize(static_cast<std::size_t>(grid.cols()));
  for (Index r = 0; grid.cols() > 1 && r < grid.rows(); ++r) {
    for (Index c = 0; c < grid.cols(); ++c) in[static_cast<std::size_t>(c)] = grid(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Index c = 0; c < grid.cols(); ++c) grid(r, c) = out[static_cast<std::size_t>(c)];
  }

  in.resize(static_cast<std::size_t>(grid.rows()));
  for (Index c = 0; grid.rows() > 1 && c < grid.cols(); ++c) {
    for (Index r = 0; r < grid.rows(); ++r) in[static_cast<std::size_t>(r)] = grid(r, c);
    inverse ? fft.inv(out, in) : fft.fwd(out, in);
    for (Index r = 0; r < grid.rows(); ++r) grid(r, c) = out[static_cast<std::size_t>(r)];
  }
}

}  // namespace

SpectrumGrid fft2(const SpectrumGrid& in) {
  SpectrumGrid out = in;
  transform_2d(out, false);
  return out;
}

SpectrumGrid fft2(const ImageGrid& in) { return fft2(SpectrumGrid(in.cast<Complex>())); }

SpectrumGrid ifft2(const SpectrumGrid& in) {
  SpectrumGrid out = in;
  transform_2d(out, true);
  return out;
}

SpectrumGrid normalized_spectrum(const ImageGrid& image) {
  const double scale = static_cast<double>(image.rows()) * static_cast<double>(image.cols());
  return fft2(image) / scale;
}

ImageGrid image_from_normalized_spectrum(const SpectrumGrid& spectrum) {
  const double scale = static_cast<double>(spectrum.rows()) * static_cast<double>(spectrum.cols());
  return (ifft2(spectrum) * scale).real();
}

double conjugate_symmetry_defect(const SpectrumGrid& spectrum) {
  double worst = 0.0;
  const Index rows = spectrum.rows();
  const Index cols = spectrum.cols();
  for (Index u = 0; u < rows; ++u) {
    for (Index v = 0; v < cols; ++v) {
      const Complex mirrored = std::conj(spectrum(mirror(u, rows), mirror(v, cols)));
      worst = std::max(worst, std::abs(spectrum(u, v) - mirrored));
    }
  }
  return worst;
}

}  // namespace isolight::dft
