#pragma once

#include <Eigen/Dense>

#include <complex>
#include <vector>

#include "isolight/errors.hpp"

namespace isolight {

using Eigen::Index;

/// Dense row-major raster. Cell (r, c) of an image, spectrum or kernel.
template <typename Scalar>
using Raster = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using ImageGrid = Raster<double>;
using SpectrumGrid = Raster<std::complex<double>>;

/// ROI pixels in row-major order, starting at the ROI's top-left cell.
using PixelVector = Eigen::VectorXd;

struct Cell {
  Index row = 0;
  Index col = 0;
  friend bool operator==(const Cell&, const Cell&) = default;
};

/// Rectangular K x L region whose top-left cell is (top, left).
struct RoiSpec {
  Index top = 0;
  Index left = 0;
  Index k_rows = 1;
  Index l_cols = 1;

  Index size() const { return k_rows * l_cols; }

  /// Cell holding element i of the row-major vectorization.
  Cell cell(Index i) const { return {top + i / l_cols, left + i % l_cols}; }

  /// Inverse of cell(); the caller guarantees c lies in the ROI.
  Index index_of(Cell c) const { return (c.row - top) * l_cols + (c.col - left); }

  bool contains(Cell c) const {
    return c.row >= top && c.row < top + k_rows && c.col >= left && c.col < left + l_cols;
  }

  bool fits(Index rows, Index cols) const {
    return top >= 0 && left >= 0 && k_rows >= 1 && l_cols >= 1 && top + k_rows <= rows &&
           left + l_cols <= cols;
  }

  std::vector<Cell> cells() const {
    std::vector<Cell> out;
    out.reserve(static_cast<std::size_t>(size()));
    for (Index i = 0; i < size(); ++i) out.push_back(cell(i));
    return out;
  }

  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

inline void check_roi(const RoiSpec& roi, Index rows, Index cols) {
  if (!roi.fits(rows, cols)) {
    throw BoundsError("ROI (" + std::to_string(roi.top) + "," + std::to_string(roi.left) + "," +
                      std::to_string(roi.k_rows) + "x" + std::to_string(roi.l_cols) +
                      ") does not fit a " + std::to_string(rows) + "x" + std::to_string(cols) +
                      " grid");
  }
}

/// Cells of `grid` inside `roi`, row by row from the top-left cell.
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> vectorize_roi(
    const Eigen::MatrixBase<Derived>& grid, const RoiSpec& roi) {
  check_roi(roi, grid.rows(), grid.cols());
  Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1> out(roi.size());
  for (Index i = 0; i < roi.size(); ++i) {
    const Cell c = roi.cell(i);
    out(i) = grid(c.row, c.col);
  }
  return out;
}

/// Zero raster of rows x cols with `values` written row-major into `roi`.
template <typename Derived>
Raster<typename Derived::Scalar> scatter_roi(const Eigen::MatrixBase<Derived>& values,
                                             const RoiSpec& roi, Index rows, Index cols) {
  check_roi(roi, rows, cols);
  if (values.size() != roi.size()) {
    throw ShapeError("scatter_roi: " + std::to_string(values.size()) + " values for a ROI of " +
                     std::to_string(roi.size()) + " cells");
  }
  Raster<typename Derived::Scalar> out = Raster<typename Derived::Scalar>::Zero(rows, cols);
  for (Index i = 0; i < roi.size(); ++i) {
    const Cell c = roi.cell(i);
    out(c.row, c.col) = values(i);
  }
  return out;
}

/// True iff every cell outside `roi` has magnitude at most `tol`.
template <typename Derived>
bool is_isolated(const Eigen::MatrixBase<Derived>& grid, const RoiSpec& roi,
                 typename Eigen::NumTraits<typename Derived::Scalar>::Real tol) {
  using std::abs;
  for (Index r = 0; r < grid.rows(); ++r) {
    for (Index c = 0; c < grid.cols(); ++c) {
      if (roi.contains({r, c})) continue;
      if (abs(grid(r, c)) > tol) return false;
    }
  }
  return true;
}

template <typename Derived>
bool is_nonnegative(const Eigen::MatrixBase<Derived>& grid) {
  return grid.size() == 0 || grid.minCoeff() >= 0;
}

/// ROI of k_rows x l_cols centred on `centre`; for even extents the extra
/// row/column goes below/right of the centre.
inline RoiSpec centred_roi(Cell centre, Index k_rows, Index l_cols) {
  return {centre.row - (k_rows - 1) / 2, centre.col - (l_cols - 1) / 2, k_rows, l_cols};
}

}  // namespace isolight
