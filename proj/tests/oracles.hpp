#pragma once

// Independent reference implementations for tests. Deliberately naive:
// direct sums, no FFT, no shared code with the library beyond the types.

#include <cmath>
#include <complex>
#include <numbers>

#include "isolight/grid.hpp"

namespace oracle {

using isolight::ImageGrid;
using isolight::Index;
using isolight::SpectrumGrid;
using cd = std::complex<double>;

inline cd phase(double m, double u, double period) {
  const double angle = -2.0 * std::numbers::pi * m * u / period;
  return {std::cos(angle), std::sin(angle)};
}

/// X(u) = sum_n x(n) exp(-2 pi i n u / N), unnormalized.
inline Eigen::VectorXcd dft_1d(const Eigen::VectorXcd& x) {
  const Index n = x.size();
  Eigen::VectorXcd out = Eigen::VectorXcd::Zero(n);
  for (Index u = 0; u < n; ++u)
    for (Index k = 0; k < n; ++k) out(u) += x(k) * phase(static_cast<double>(k), static_cast<double>(u), static_cast<double>(n));
  return out;
}

/// F(u,v) = 1/(MN) sum f(m,n) exp(-2 pi i (mu/M + nv/N)).
inline SpectrumGrid dft_2d_normalized(const ImageGrid& f) {
  const Index rows = f.rows(), cols = f.cols();
  SpectrumGrid out = SpectrumGrid::Zero(rows, cols);
  for (Index u = 0; u < rows; ++u)
    for (Index v = 0; v < cols; ++v) {
      cd sum{};
      for (Index m = 0; m < rows; ++m)
        for (Index n = 0; n < cols; ++n)
          sum += f(m, n) * phase(static_cast<double>(m), static_cast<double>(u), static_cast<double>(rows)) *
                 phase(static_cast<double>(n), static_cast<double>(v), static_cast<double>(cols));
      out(u, v) = sum / static_cast<double>(rows * cols);
    }
  return out;
}

/// f(m,n) = sum F(u,v) exp(+2 pi i (mu/M + nv/N)).
inline SpectrumGrid idft_2d_from_normalized(const SpectrumGrid& spec) {
  const Index rows = spec.rows(), cols = spec.cols();
  SpectrumGrid out = SpectrumGrid::Zero(rows, cols);
  for (Index m = 0; m < rows; ++m)
    for (Index n = 0; n < cols; ++n) {
      cd sum{};
      for (Index u = 0; u < rows; ++u)
        for (Index v = 0; v < cols; ++v)
          sum += spec(u, v) * std::conj(phase(static_cast<double>(m), static_cast<double>(u), static_cast<double>(rows)) *
                                        phase(static_cast<double>(n), static_cast<double>(v), static_cast<double>(cols)));
      out(m, n) = sum;
    }
  return out;
}

inline double wrap_distance(Index u, Index n) {
  const Index r = ((u % n) + n) % n;
  return static_cast<double>(std::min(r, n - r));
}

/// Ideal low-pass OTF by its definition.
inline SpectrumGrid lowpass(Index rows, Index cols, double radius) {
  SpectrumGrid h = SpectrumGrid::Zero(rows, cols);
  for (Index u = 0; u < rows; ++u)
    for (Index v = 0; v < cols; ++v)
      if (std::hypot(wrap_distance(u, rows), wrap_distance(v, cols)) <= radius) h(u, v) = 1.0;
  return h;
}

/// Full periodic PSF on the field: inverse DFT of the OTF, scaled so that
/// blurring is g = f (*) p with the 1/(MN) spectrum convention.
inline ImageGrid full_psf(Index rows, Index cols, double radius) {
  const SpectrumGrid h = lowpass(rows, cols, radius);
  return (idft_2d_from_normalized(h).real() / static_cast<double>(rows * cols)).eval();
}

/// g(m,n) = sum_{k,l} f(k,l) p((m-k) mod M, (n-l) mod N), by brute force.
inline ImageGrid periodic_convolve(const ImageGrid& f, const ImageGrid& p) {
  const Index rows = f.rows(), cols = f.cols();
  ImageGrid g = ImageGrid::Zero(rows, cols);
  for (Index m = 0; m < rows; ++m)
    for (Index n = 0; n < cols; ++n)
      for (Index k = 0; k < rows; ++k)
        for (Index l = 0; l < cols; ++l)
          g(m, n) += f(k, l) * p(((m - k) % rows + rows) % rows, ((n - l) % cols + cols) % cols);
  return g;
}

}  // namespace oracle
