#pragma once

#include <complex>

#include "isolight/grid.hpp"

// Discrete Fourier transform conventions used by the library.
//
// Two normalizations coexist and are kept apart per operation:
//   - 1D, unnormalized:  X_k = sum_n x_n exp(-2 pi i k n / N)
//   - 2D, normalized:    Y(u,v) = 1/(MN) sum_{m,n} x(m,n) exp(-2 pi i (mu/M + nv/N))
// Spectra are stored unshifted: zero frequency at index (0, 0).
namespace isolight::dft {

using Complex = std::complex<double>;

/// exp(-2 pi i m u / period). The integer product is reduced modulo the
/// period first so the phase stays exact for large indices.
Complex twiddle(Index m, Index u, Index period);

/// 1D basis value for sample n at frequency k, unnormalized convention.
inline Complex basis_1d(Index n, Index k, Index length) { return twiddle(n, k, length); }

/// 2D basis value for pixel (m, n) at frequency (u, v), 1/(MN) convention.
inline Complex basis_2d(Index m, Index n, Index u, Index v, Index rows, Index cols) {
  return twiddle(m, u, rows) * twiddle(n, v, cols) /
         (static_cast<double>(rows) * static_cast<double>(cols));
}

/// Unnormalized forward 2D FFT.
SpectrumGrid fft2(const SpectrumGrid& in);
SpectrumGrid fft2(const ImageGrid& in);

/// Inverse 2D FFT including the 1/(MN) factor, so ifft2(fft2(x)) == x.
SpectrumGrid ifft2(const SpectrumGrid& in);

/// Spectrum in the normalized 2D convention: fft2(image) / (MN).
SpectrumGrid normalized_spectrum(const ImageGrid& image);

/// Image whose normalized spectrum is `spectrum` (inverse of the above);
/// the real part is returned.
ImageGrid image_from_normalized_spectrum(const SpectrumGrid& spectrum);

/// Index of the frequency conjugate to u in a length-n transform.
inline Index mirror(Index u, Index n) { return (n - u % n) % n; }

/// Largest |S(u,v) - conj(S(-u,-v))| over the grid.
double conjugate_symmetry_defect(const SpectrumGrid& spectrum);

}  // namespace isolight::dft
