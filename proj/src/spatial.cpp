#include "isolight/spatial.hpp"

#include <cmath>
#include <limits>

namespace isolight::spatial {

TwoPointSolution solve_two_point_1d(double p, double q_a, double q_b, double y_a, double y_b) {
  const double det = p * p - q_a * q_b;
  const double scale = std::max(p * p, std::abs(q_a * q_b));
  if (scale == 0.0 || std::abs(det) <= 1e-14 * scale) {
    throw SingularError("two-point system is singular: p^2 == q_a * q_b");
  }
  return {(p * y_a - q_a * y_b) / det, (p * y_b - q_b * y_a) / det};
}

std::vector<Cell> ring_cells(const RoiSpec& roi, Index width, Index rows, Index cols) {
  std::vector<Cell> out;
  const Index r0 = std::max<Index>(0, roi.top - width);
  const Index r1 = std::min(rows - 1, roi.top + roi.k_rows - 1 + width);
  const Index c0 = std::max<Index>(0, roi.left - width);
  const Index c1 = std::min(cols - 1, roi.left + roi.l_cols - 1 + width);
  for (Index r = r0; r <= r1; ++r)
    for (Index c = c0; c <= c1; ++c)
      if (!roi.contains({r, c})) out.push_back({r, c});
  return out;
}

namespace {

Index shortest_offset(Index d, Index period) {
  Index r = d % period;
  if (r < 0) r += period;
  return 2 * r > period ? r - period : r;
}

Index wrap(Index i, Index n) {
  const Index r = i % n;
  return r < 0 ? r + n : r;
}

// p(.) tabulated over every raw cell difference an obs/ROI pair can produce.
class OffsetTable {
 public:
  OffsetTable(const PsfKernel& psf, const RoiSpec& roi, std::span<const Cell> obs, Index rows,
              Index cols) {
    Index obs_r0 = std::numeric_limits<Index>::max(), obs_r1 = std::numeric_limits<Index>::min();
    Index obs_c0 = obs_r0, obs_c1 = obs_r1;
    for (const Cell& c : obs) {
      obs_r0 = std::min(obs_r0, c.row);
      obs_r1 = std::max(obs_r1, c.row);
      obs_c0 = std::min(obs_c0, c.col);
      obs_c1 = std::max(obs_c1, c.col);
    }
    row_lo_ = obs_r0 - (roi.top + roi.k_rows - 1);
    col_lo_ = obs_c0 - (roi.left + roi.l_cols - 1);
    const Index row_hi = obs_r1 - roi.top;
    const Index col_hi = obs_c1 - roi.left;
    table_.resize(row_hi - row_lo_ + 1, col_hi - col_lo_ + 1);
    for (Index i = 0; i < table_.rows(); ++i)
      for (Index j = 0; j < table_.cols(); ++j)
        table_(i, j) = coefficient(psf, {row_lo_ + i, col_lo_ + j}, {0, 0}, rows, cols);
  }

  double operator()(Cell obs, Cell unknown) const {
    return table_(obs.row - unknown.row - row_lo_, obs.col - unknown.col - col_lo_);
  }

 private:
  Eigen::MatrixXd table_;
  Index row_lo_ = 0;
  Index col_lo_ = 0;
};

void check_cells(std::span<const Cell> cells, Index rows, Index cols) {
  for (const Cell& c : cells)
    if (c.row < 0 || c.row >= rows || c.col < 0 || c.col >= cols)
      throw BoundsError("observation cell outside the field");
}

}  // namespace

double coefficient(const PsfKernel& psf, Cell obs, Cell unknown, Index rows, Index cols) {
  const Index du = shortest_offset(obs.row - unknown.row, rows);
  const Index dv = shortest_offset(obs.col - unknown.col, cols);
  if (!psf.covers(du, dv)) {
    throw BoundsError("PSF crop does not cover offset (" + std::to_string(du) + "," +
                      std::to_string(dv) + ")");
  }
  // A crop wider than the field folds several kernel cells onto one offset.
  const Cell origin = psf.origin();
  const Index du_lo = -origin.row;
  const Index du_hi = psf.values().rows() - 1 - origin.row;
  const Index dv_lo = -origin.col;
  const Index dv_hi = psf.values().cols() - 1 - origin.col;
  double sum = 0.0;
  for (Index a = du_lo + wrap(du - du_lo, rows); a <= du_hi; a += rows)
    for (Index b = dv_lo + wrap(dv - dv_lo, cols); b <= dv_hi; b += cols) sum += psf(a, b);
  return sum;
}

SpatialSystem build_system(const PsfKernel& psf, const ImageGrid& observed, const RoiSpec& roi,
                           std::span<const Cell> extra_obs, BuildOptions options) {
  check_roi(roi, observed.rows(), observed.cols());
  std::vector<Cell> cells = roi.cells();
  cells.insert(cells.end(), extra_obs.begin(), extra_obs.end());
  check_cells(cells, observed.rows(), observed.cols());

  Eigen::VectorXd values(static_cast<Index>(cells.size()));
  for (std::size_t i = 0; i < cells.size(); ++i)
    values(static_cast<Index>(i)) = observed(cells[i].row, cells[i].col);
  return build_system(psf, roi, std::move(cells), std::move(values), observed.rows(),
                      observed.cols(), options);
}

SpatialSystem build_system(const PsfKernel& psf, const RoiSpec& roi, std::vector<Cell> obs_cells,
                           Eigen::VectorXd obs_values, Index rows, Index cols,
                           BuildOptions options) {
  check_roi(roi, rows, cols);
  check_cells(obs_cells, rows, cols);
  if (static_cast<Index>(obs_cells.size()) != obs_values.size()) {
    throw ShapeError("one observed value is needed per observation cell");
  }
  if (static_cast<Index>(obs_cells.size()) < roi.size()) {
    throw ShapeError("fewer observation cells than unknowns");
  }

  const OffsetTable table(psf, roi, obs_cells, rows, cols);
  SpatialSystem sys;
  sys.a_matrix.resize(static_cast<Index>(obs_cells.size()), roi.size());
  for (Index i = 0; i < sys.a_matrix.rows(); ++i)
    for (Index j = 0; j < roi.size(); ++j)
      sys.a_matrix(i, j) = table(obs_cells[static_cast<std::size_t>(i)], roi.cell(j));
  sys.rhs = std::move(obs_values);
  sys.roi = roi;
  sys.obs_cells = std::move(obs_cells);
  sys.field_rows = rows;
  sys.field_cols = cols;
  sys.condition_estimate = options.estimate_condition ? condition_number(sys.a_matrix)
                                                      : std::numeric_limits<double>::quiet_NaN();
  return sys;
}

Eigen::VectorXd apply_operator(const PsfKernel& psf, const RoiSpec& roi,
                               std::span<const Cell> obs_cells, const PixelVector& x, Index rows,
                               Index cols) {
  if (x.size() != roi.size()) throw ShapeError("pixel vector does not match the ROI");
  check_roi(roi, rows, cols);
  check_cells(obs_cells, rows, cols);
  const OffsetTable table(psf, roi, obs_cells, rows, cols);
  Eigen::VectorXd out(static_cast<Index>(obs_cells.size()));
  for (std::size_t i = 0; i < obs_cells.size(); ++i) {
    double sum = 0.0;
    for (Index j = 0; j < roi.size(); ++j) sum += table(obs_cells[i], roi.cell(j)) * x(j);
    out(static_cast<Index>(i)) = sum;
  }
  return out;
}

Recovery solve_system(const SpatialSystem& system, SolveMethod method) {
  const double condition = std::isnan(system.condition_estimate)
                               ? condition_number(system.a_matrix)
                               : system.condition_estimate;
  const auto solution = solve_dense(system.a_matrix, system.rhs, method, condition);

  Recovery out;
  out.pixels = solution.x;
  out.method_used = solution.method_used;
  out.condition = condition;
  out.residual = (system.a_matrix * out.pixels - system.rhs).norm() /
                 static_cast<double>(system.roi.size());
  summarize_negatives(out);
  return out;
}

}  // namespace isolight::spatial
