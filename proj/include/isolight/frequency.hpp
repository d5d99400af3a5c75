#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "isolight/linalg.hpp"
#include "isolight/optics.hpp"

// Frequency-domain recovery. Under isolated lighting the observed spectrum
// is a sum of one basis function per ROI pixel, so any K*L (or more)
// passband entries give a linear system in the ROI pixels.
namespace isolight::frequency {

using Complex = std::complex<double>;

struct TwoPointSolution {
  double x_a = 0.0;
  double x_b = 0.0;
};

/// Recovers the two nonzero samples x_a (index a) and x_b (index b) of a
/// length-n signal from its unnormalized DFT values X_c and X_d.
///
/// Throws SingularError when a == b or the two frequencies do not separate
/// the samples, and InconsistentInputError when the solution's imaginary part
/// exceeds imag_tolerance relative to its magnitude (the inputs cannot come
/// from a real signal).
TwoPointSolution solve_two_point_1d(Index n, Index a, Index b, Index c, Index d, Complex x_c,
                                    Complex x_d, double imag_tolerance = 1e-9);

/// Chosen spectrum entries, in row order of the resulting system.
struct SpectrumSelection {
  /// Frequency indices (u, v) in the unshifted layout; taken modulo the field.
  std::vector<Cell> frequencies;
  /// Observed spectrum values at `frequencies` (normalized convention).
  Eigen::VectorXcd entries;

  Index size() const { return static_cast<Index>(frequencies.size()); }
};

/// K x L block of frequencies with top-left (c, d), row-major.
std::vector<Cell> block_frequencies(Index c, Index d, Index k_rows, Index l_cols);

/// Frequencies conjugate to `frequencies`: (-u, -v) modulo the field.
std::vector<Cell> mirrored_frequencies(std::span<const Cell> frequencies, Index rows, Index cols);

/// Reads `frequencies` out of an observed spectrum.
SpectrumSelection select(const SpectrumGrid& observed, std::vector<Cell> frequencies);

/// Default selection: the K x L block at zero frequency.
SpectrumSelection default_selection(const SpectrumGrid& observed, const RoiSpec& roi);

struct FrequencySystem {
  /// Entry (f, j) = exp(-2 pi i (m u / M + n v / N)) / (MN) for frequency
  /// f = (u, v) and ROI pixel j = (m, n).
  Eigen::MatrixXcd a_matrix;
  Eigen::VectorXcd rhs;
  RoiSpec roi;
  std::vector<Cell> frequencies;
  Index field_rows = 0;
  Index field_cols = 0;
  /// NaN when not estimated.
  double condition_estimate = 0.0;

  bool square() const { return a_matrix.rows() == a_matrix.cols(); }
};

struct BuildOptions {
  bool estimate_condition = true;
};

/// Builds the system for `roi` on the OTF's field. Every selected frequency
/// must lie in the OTF passband (InvalidSelectionError otherwise).
FrequencySystem build_system(const OtfSpec& otf, const RoiSpec& roi,
                             const SpectrumSelection& selection, BuildOptions options = {});

/// A * x without forming A.
Eigen::VectorXcd apply_operator(Index rows, Index cols, const RoiSpec& roi,
                                std::span<const Cell> frequencies, const PixelVector& x);

/// `direct` solves the complex system and keeps the real part, reporting
/// the discarded imaginary part as leakage. `least_squares` and `truncated`
/// work on the real system formed by stacking real and imaginary parts of
/// each equation, which keeps the unknowns real by construction.
Recovery solve_system(const FrequencySystem& system, SolveMethod method = SolveMethod::direct);

/// The stacked real system [Re A; Im A] x = [Re y; Im y].
std::pair<Eigen::MatrixXd, Eigen::VectorXd> stacked_real(const FrequencySystem& system);

}  // namespace isolight::frequency
