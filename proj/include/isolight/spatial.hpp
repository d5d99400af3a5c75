#pragma once

#include <span>
#include <vector>

#include "isolight/linalg.hpp"
#include "isolight/optics.hpp"

// Spatial-domain recovery. Under isolated lighting every observed cell is a
// PSF-weighted sum of the ROI pixels only, so the ROI solves A x = y with
// A[(m,n),(k,l)] = p(m - k, n - l).
namespace isolight::spatial {

struct TwoPointSolution {
  double x_a = 0.0;
  double x_b = 0.0;
};

/// Solves y_a = p x_a + q_a x_b, y_b = p x_b + q_b x_a.
/// Throws SingularError when p^2 == q_a q_b to working precision.
TwoPointSolution solve_two_point_1d(double p, double q_a, double q_b, double y_a, double y_b);

/// Cells within Chebyshev distance `width` of the ROI but outside it,
/// clipped to the grid, in row-major order.
std::vector<Cell> ring_cells(const RoiSpec& roi, Index width, Index rows, Index cols);

/// Default width of the extra observation ring for overdetermined systems.
inline constexpr Index kDefaultRingWidth = 2;

struct SpatialSystem {
  /// One row per observation cell, one column per ROI pixel (row-major).
  Eigen::MatrixXd a_matrix;
  Eigen::VectorXd rhs;
  RoiSpec roi;
  std::vector<Cell> obs_cells;
  /// 2-norm condition number; NaN when not estimated.
  double condition_estimate = 0.0;
  Index field_rows = 0;
  Index field_cols = 0;

  bool square() const { return a_matrix.rows() == a_matrix.cols(); }
};

struct BuildOptions {
  /// The SVD is the dominant cost for large ROIs.
  bool estimate_condition = true;
};

/// Weight of unknown cell `unknown` in the observation at `obs` on a
/// rows x cols periodic field. Throws BoundsError when the crop does not
/// hold the (shortest periodic) offset.
double coefficient(const PsfKernel& psf, Cell obs, Cell unknown, Index rows, Index cols);

/// Square system on the ROI's own cells, plus one row per `extra_obs` cell.
SpatialSystem build_system(const PsfKernel& psf, const ImageGrid& observed, const RoiSpec& roi,
                           std::span<const Cell> extra_obs = {}, BuildOptions options = {});

/// Same, from observations already gathered at `obs_cells`.
SpatialSystem build_system(const PsfKernel& psf, const RoiSpec& roi, std::vector<Cell> obs_cells,
                           Eigen::VectorXd obs_values, Index rows, Index cols,
                           BuildOptions options = {});

/// A * x without forming A; used for ROIs whose matrix would not fit in memory.
Eigen::VectorXd apply_operator(const PsfKernel& psf, const RoiSpec& roi,
                               std::span<const Cell> obs_cells, const PixelVector& x, Index rows,
                               Index cols);

Recovery solve_system(const SpatialSystem& system, SolveMethod method = SolveMethod::direct);

}  // namespace isolight::spatial
