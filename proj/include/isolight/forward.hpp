#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <vector>

#include "isolight/optics.hpp"

namespace isolight {

/// Periodic convolution with a PSF on a fixed field. When the PSF carries
/// the OTF of this very field the full (uncropped) kernel is applied through
/// that OTF; otherwise the crop is embedded at the origin of the field.
/// The kernel spectrum is computed once, so one instance serves many images.
class CircularConvolution {
 public:
  CircularConvolution(const PsfKernel& psf, Index rows, Index cols);

  ImageGrid operator()(const ImageGrid& ideal) const;

  /// Spectrum multiplier, unnormalized FFT convention.
  const SpectrumGrid& transfer() const { return transfer_; }

 private:
  SpectrumGrid transfer_;
};

/// Observed image = ideal * PSF (periodic, noiseless).
ImageGrid observe_spatial(const ImageGrid& ideal, const PsfKernel& psf);

/// Direct evaluation of the periodic convolution with the cropped kernel at
/// selected cells. Only the bounding box of nonzero ideal cells is visited,
/// so this is cheap for isolated samples.
Eigen::VectorXd observe_cells(const ImageGrid& ideal, const PsfKernel& psf,
                              std::span<const Cell> cells);

/// Normalized spectrum of the ideal image times the OTF; exactly zero
/// outside the passband.
SpectrumGrid observe_spectrum(const ImageGrid& ideal, const SpectrumGrid& otf);

/// Additive white Gaussian noise at a prescribed peak signal-to-noise ratio,
/// PSNR = 20 log10(peak / sigma) with peak the largest noiseless cell.
struct NoiseSpec {
  double psnr_db = std::numeric_limits<double>::infinity();
  std::uint64_t seed = 0;

  bool enabled() const { return psnr_db < std::numeric_limits<double>::infinity(); }
};

/// Noise standard deviation for `spec` against a signal peak.
double noise_sigma(double peak, double psnr_db);

ImageGrid add_noise(const ImageGrid& observed, const NoiseSpec& spec);

/// PSNR of `noisy` against `clean`, same convention as NoiseSpec.
double measured_psnr(const ImageGrid& noisy, const ImageGrid& clean);

/// Light collected in the ROI from the full sample divided by the light
/// collected when everything outside the ROI is dark. 1 means no extra light.
double extra_light_ratio(const ImageGrid& full_sample, const RoiSpec& roi, const PsfKernel& psf);

}  // namespace isolight
