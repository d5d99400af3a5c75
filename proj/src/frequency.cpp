#include "isolight/frequency.hpp"

#include <cmath>
#include <limits>

#include "isolight/dft.hpp"

namespace isolight::frequency {

TwoPointSolution solve_two_point_1d(Index n, Index a, Index b, Index c, Index d, Complex x_c,
                                    Complex x_d, double imag_tolerance) {
  if (n < 2) throw ParameterError("signal length must be at least 2");
  if (a < 0 || a >= n || b < 0 || b >= n) throw BoundsError("sample index outside the signal");
  if (a == b) throw SingularError("the two unknown samples coincide");

  using dft::basis_1d;
  const Complex den = basis_1d(a, c, n) * basis_1d(b, d, n) - basis_1d(a, d, n) * basis_1d(b, c, n);
  if (std::abs(den) < 1e-12) {
    throw SingularError("frequencies " + std::to_string(c) + " and " + std::to_string(d) +
                        " do not separate samples " + std::to_string(a) + " and " +
                        std::to_string(b));
  }
  const Complex xa = (x_c * basis_1d(b, d, n) - x_d * basis_1d(b, c, n)) / den;
  const Complex xb = (x_c - xa * basis_1d(a, c, n)) / basis_1d(b, c, n);

  const double scale = std::max({std::abs(xa), std::abs(xb), std::numeric_limits<double>::min()});
  const double residue = std::max(std::abs(xa.imag()), std::abs(xb.imag()));
  if (residue > imag_tolerance * scale) {
    throw InconsistentInputError("two-point solution has imaginary residue " +
                                 std::to_string(residue / scale) + " relative to its magnitude");
  }
  return {xa.real(), xb.real()};
}

std::vector<Cell> block_frequencies(Index c, Index d, Index k_rows, Index l_cols) {
  std::vector<Cell> out;
  out.reserve(static_cast<std::size_t>(k_rows * l_cols));
  for (Index s = 0; s < k_rows; ++s)
    for (Index t = 0; t < l_cols; ++t) out.push_back({c + s, d + t});
  return out;
}

std::vector<Cell> mirrored_frequencies(std::span<const Cell> frequencies, Index rows, Index cols) {
  std::vector<Cell> out;
  out.reserve(frequencies.size());
  for (const Cell& f : frequencies) out.push_back({dft::mirror(f.row, rows), dft::mirror(f.col, cols)});
  return out;
}

namespace {

Index wrap(Index i, Index n) {
  const Index r = i % n;
  return r < 0 ? r + n : r;
}

}  // namespace

SpectrumSelection select(const SpectrumGrid& observed, std::vector<Cell> frequencies) {
  SpectrumSelection out;
  out.entries.resize(static_cast<Index>(frequencies.size()));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const Cell& f = frequencies[i];
    out.entries(static_cast<Index>(i)) =
        observed(wrap(f.row, observed.rows()), wrap(f.col, observed.cols()));
  }
  out.frequencies = std::move(frequencies);
  return out;
}

SpectrumSelection default_selection(const SpectrumGrid& observed, const RoiSpec& roi) {
  return select(observed, block_frequencies(0, 0, roi.k_rows, roi.l_cols));
}

FrequencySystem build_system(const OtfSpec& otf, const RoiSpec& roi,
                             const SpectrumSelection& selection, BuildOptions options) {
  otf.validate();
  const Index rows = otf.field_rows;
  const Index cols = otf.field_cols;
  check_roi(roi, rows, cols);
  if (selection.entries.size() != selection.size()) {
    throw ShapeError("selection holds a different number of entries and frequencies");
  }
  if (selection.size() < roi.size()) {
    throw ShapeError("fewer selected frequencies than unknowns");
  }
  for (const Cell& f : selection.frequencies) {
    if (!in_passband(otf, f.row, f.col)) {
      throw InvalidSelectionError("frequency (" + std::to_string(f.row) + "," +
                                  std::to_string(f.col) + ") lies outside the passband");
    }
  }

  FrequencySystem sys;
  sys.a_matrix.resize(selection.size(), roi.size());
  for (Index i = 0; i < selection.size(); ++i) {
    const Cell f = selection.frequencies[static_cast<std::size_t>(i)];
    for (Index j = 0; j < roi.size(); ++j) {
      const Cell px = roi.cell(j);
      sys.a_matrix(i, j) = dft::basis_2d(px.row, px.col, f.row, f.col, rows, cols);
    }
  }
  sys.rhs = selection.entries;
  sys.roi = roi;
  sys.frequencies = selection.frequencies;
  sys.field_rows = rows;
  sys.field_cols = cols;
  sys.condition_estimate = options.estimate_condition ? condition_number(sys.a_matrix)
                                                      : std::numeric_limits<double>::quiet_NaN();
  return sys;
}

Eigen::VectorXcd apply_operator(Index rows, Index cols, const RoiSpec& roi,
                                std::span<const Cell> frequencies, const PixelVector& x) {
  if (x.size() != roi.size()) throw ShapeError("pixel vector does not match the ROI");
  check_roi(roi, rows, cols);
  const double scale = 1.0 / (static_cast<double>(rows) * static_cast<double>(cols));
  Eigen::VectorXcd row_phase(roi.k_rows);
  Eigen::VectorXcd col_phase(roi.l_cols);
  Eigen::VectorXcd out(static_cast<Index>(frequencies.size()));
  for (std::size_t i = 0; i < frequencies.size(); ++i) {
    const Cell f = frequencies[i];
    for (Index k = 0; k < roi.k_rows; ++k) row_phase(k) = dft::twiddle(roi.top + k, f.row, rows);
    for (Index l = 0; l < roi.l_cols; ++l) col_phase(l) = dft::twiddle(roi.left + l, f.col, cols);
    Complex sum{};
    for (Index k = 0; k < roi.k_rows; ++k) {
      Complex inner{};
      for (Index l = 0; l < roi.l_cols; ++l) inner += col_phase(l) * x(k * roi.l_cols + l);
      sum += row_phase(k) * inner;
    }
    out(static_cast<Index>(i)) = sum * scale;
  }
  return out;
}

std::pair<Eigen::MatrixXd, Eigen::VectorXd> stacked_real(const FrequencySystem& system) {
  const Index m = system.a_matrix.rows();
  Eigen::MatrixXd a(2 * m, system.a_matrix.cols());
  a.topRows(m) = system.a_matrix.real();
  a.bottomRows(m) = system.a_matrix.imag();
  Eigen::VectorXd y(2 * m);
  y.head(m) = system.rhs.real();
  y.tail(m) = system.rhs.imag();
  return {std::move(a), std::move(y)};
}

Recovery solve_system(const FrequencySystem& system, SolveMethod method) {
  const double condition = std::isnan(system.condition_estimate)
                               ? condition_number(system.a_matrix)
                               : system.condition_estimate;
  Recovery out;
  out.condition = condition;
  if (method == SolveMethod::direct) {
    const auto solution = solve_dense(system.a_matrix, system.rhs, method, condition);
    out.pixels = solution.x.real();
    out.method_used = solution.method_used;
    const double magnitude = solution.x.norm();
    out.imaginary_leakage = magnitude > 0.0 ? solution.x.imag().norm() / magnitude : 0.0;
  } else {
    const auto [a, y] = stacked_real(system);
    const auto solution = solve_dense(a, y, method, condition);
    out.pixels = solution.x;
    out.method_used = solution.method_used;
  }
  out.residual = (system.a_matrix * out.pixels.cast<Complex>() - system.rhs).norm() /
                 static_cast<double>(system.roi.size());
  summarize_negatives(out);
  return out;
}

}  // namespace isolight::frequency
