#pragma once

#include <optional>

#include "isolight/grid.hpp"

namespace isolight {

/// Ideal circular low-pass filter on an M x N frequency lattice.
struct OtfSpec {
  Index field_rows = 768;
  Index field_cols = 768;
  /// Radius in frequency-index units, measured with wrap-around distance.
  double cutoff_radius = 6.0;
  double passband_gain = 1.0;

  /// Throws ParameterError unless dims are positive and the disk fits.
  void validate() const;

  friend bool operator==(const OtfSpec&, const OtfSpec&) = default;
};

/// Whether frequency (u, v) (any integers, taken modulo the field) lies in
/// the passband disk.
bool in_passband(const OtfSpec& spec, Index u, Index v);

/// Number of passband entries.
Index passband_count(const OtfSpec& spec);

/// Unshifted OTF: passband_gain inside the disk, exactly zero elsewhere.
SpectrumGrid build_otf(const OtfSpec& spec);

/// Point spread function sampled on an odd-sized crop. Offsets are taken
/// from the kernel centre, so psf(0, 0) is the peak p(0,0).
class PsfKernel {
 public:
  /// `origin` is the crop cell holding offset (0, 0).
  PsfKernel(ImageGrid values, Cell origin, std::optional<OtfSpec> source = std::nullopt);

  /// Kernel with the origin at the middle of an odd-sized crop.
  static PsfKernel centred(ImageGrid values, std::optional<OtfSpec> source = std::nullopt);

  /// p(du, dv). Throws BoundsError if the crop does not hold that offset.
  double operator()(Index du, Index dv) const {
    if (!covers(du, dv)) throw_offset(du, dv);
    return values_(origin_.row + du, origin_.col + dv);
  }

  bool covers(Index du, Index dv) const {
    return origin_.row + du >= 0 && origin_.row + du < values_.rows() && origin_.col + dv >= 0 &&
           origin_.col + dv < values_.cols();
  }

  double peak() const { return values_(origin_.row, origin_.col); }

  /// Largest |du| (|dv|) such that every offset up to it is held.
  Index reach_rows() const { return std::min(origin_.row, values_.rows() - 1 - origin_.row); }
  Index reach_cols() const { return std::min(origin_.col, values_.cols() - 1 - origin_.col); }

  const ImageGrid& values() const { return values_; }
  Cell origin() const { return origin_; }

  /// OTF the kernel was generated from, when known.
  const std::optional<OtfSpec>& source() const { return source_; }

 private:
  [[noreturn]] void throw_offset(Index du, Index dv) const;

  ImageGrid values_;
  Cell origin_;
  std::optional<OtfSpec> source_;
};

/// Inverse DFT of build_otf(spec), centred and cropped to crop x crop.
/// Throws ParameterError for an even crop or one larger than the field.
PsfKernel build_psf(const OtfSpec& spec, Index crop);

/// True iff p(u, v) > 0 for all |u| <= k_rows-1, |v| <= l_cols-1, i.e. every
/// kernel value entering the system matrix of a k_rows x l_cols ROI.
bool effective_psf_positive(const PsfKernel& psf, Index k_rows, Index l_cols);

}  // namespace isolight
