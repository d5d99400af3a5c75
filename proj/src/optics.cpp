#include "isolight/optics.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "isolight/dft.hpp"

namespace isolight {

void OtfSpec::validate() const {
  if (field_rows < 1 || field_cols < 1) {
    throw ParameterError("OTF field dimensions must be positive");
  }
  if (!(cutoff_radius >= 0.0)) throw ParameterError("cutoff radius must be nonnegative");
  if (cutoff_radius >= static_cast<double>(std::min(field_rows, field_cols)) / 2.0) {
    throw ParameterError("cutoff radius " + std::to_string(cutoff_radius) +
                         " must be below half the smaller field dimension");
  }
}

namespace {

Index wrap_distance(Index u, Index n) {
  Index r = u % n;
  if (r < 0) r += n;
  return std::min(r, n - r);
}

}  // namespace

bool in_passband(const OtfSpec& spec, Index u, Index v) {
  const auto du = static_cast<double>(wrap_distance(u, spec.field_rows));
  const auto dv = static_cast<double>(wrap_distance(v, spec.field_cols));
  // Squared distances are integers; the slack only absorbs rounding in a
  // radius computed as a square root, e.g. hypot(6, 6).
  const double r2 = spec.cutoff_radius * spec.cutoff_radius;
  return du * du + dv * dv <= r2 + 1e-9 * std::max(1.0, r2);
}

Index passband_count(const OtfSpec& spec) {
  Index count = 0;
  for (Index u = 0; u < spec.field_rows; ++u)
    for (Index v = 0; v < spec.field_cols; ++v) count += in_passband(spec, u, v) ? 1 : 0;
  return count;
}

SpectrumGrid build_otf(const OtfSpec& spec) {
  spec.validate();
  SpectrumGrid otf = SpectrumGrid::Zero(spec.field_rows, spec.field_cols);
  // Only the corners of the unshifted layout can be inside the disk.
  const auto reach = static_cast<Index>(std::floor(spec.cutoff_radius + 1e-9));
  for (Index du = -reach; du <= reach; ++du) {
    for (Index dv = -reach; dv <= reach; ++dv) {
      if (!in_passband(spec, du, dv)) continue;
      const Index u = (du % spec.field_rows + spec.field_rows) % spec.field_rows;
      const Index v = (dv % spec.field_cols + spec.field_cols) % spec.field_cols;
      otf(u, v) = spec.passband_gain;
    }
  }
  return otf;
}

PsfKernel::PsfKernel(ImageGrid values, Cell origin, std::optional<OtfSpec> source)
    : values_(std::move(values)), origin_(origin), source_(source) {
  if (values_.size() == 0) throw ShapeError("empty PSF");
  if (origin_.row < 0 || origin_.row >= values_.rows() || origin_.col < 0 ||
      origin_.col >= values_.cols()) {
    throw BoundsError("PSF origin outside the crop");
  }
}

PsfKernel PsfKernel::centred(ImageGrid values, std::optional<OtfSpec> source) {
  if (values.rows() % 2 == 0 || values.cols() % 2 == 0) {
    throw ParameterError("a centred PSF needs odd dimensions, got " +
                         std::to_string(values.rows()) + "x" + std::to_string(values.cols()));
  }
  const Cell origin{(values.rows() - 1) / 2, (values.cols() - 1) / 2};
  return PsfKernel(std::move(values), origin, source);
}

void PsfKernel::throw_offset(Index du, Index dv) const {
  throw BoundsError("PSF offset (" + std::to_string(du) + "," + std::to_string(dv) +
                    ") outside the " + std::to_string(values_.rows()) + "x" +
                    std::to_string(values_.cols()) + " crop");
}

PsfKernel build_psf(const OtfSpec& spec, Index crop) {
  spec.validate();
  if (crop < 1 || crop % 2 == 0) {
    throw ParameterError("PSF crop must be a positive odd size, got " + std::to_string(crop));
  }
  if (crop > std::min(spec.field_rows, spec.field_cols)) {
    throw ParameterError("PSF crop " + std::to_string(crop) + " exceeds the OTF field");
  }

  const SpectrumGrid field = dft::ifft2(build_otf(spec));
  const double peak = field(0, 0).real();
  const double residue = field.imag().cwiseAbs().maxCoeff();
  if (residue > 1e-12 * std::abs(peak) && residue > 0.0) {
    throw Error("PSF inverse transform has imaginary residue " + std::to_string(residue) +
                "; the OTF is not conjugate symmetric");
  }

  const Index half = (crop - 1) / 2;
  ImageGrid values(crop, crop);
  for (Index i = 0; i < crop; ++i) {
    const Index u = ((i - half) % spec.field_rows + spec.field_rows) % spec.field_rows;
    for (Index j = 0; j < crop; ++j) {
      const Index v = ((j - half) % spec.field_cols + spec.field_cols) % spec.field_cols;
      values(i, j) = field(u, v).real();
    }
  }
  return PsfKernel(std::move(values), {half, half}, spec);
}

bool effective_psf_positive(const PsfKernel& psf, Index k_rows, Index l_cols) {
  if (k_rows < 1 || l_cols < 1) throw ParameterError("ROI extents must be at least 1");
  if (k_rows - 1 > psf.reach_rows() || l_cols - 1 > psf.reach_cols()) {
    throw BoundsError("effective PSF window exceeds the crop");
  }
  for (Index du = -(k_rows - 1); du <= k_rows - 1; ++du)
    for (Index dv = -(l_cols - 1); dv <= l_cols - 1; ++dv)
      if (!(psf(du, dv) > 0.0)) return false;
  return true;
}

}  // namespace isolight
