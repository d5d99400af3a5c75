#pragma once

#include <Eigen/Dense>

#include <limits>
#include <string>
#include <string_view>

#include "isolight/grid.hpp"

namespace isolight {

enum class SolveMethod {
  /// LU with partial pivoting; falls back to `truncated` once the condition
  /// estimate exceeds condition_limit().
  direct,
  /// Column-pivoted Householder QR. For complex systems the equations are
  /// first split into real and imaginary parts.
  least_squares,
  /// SVD with singular values below max(rows, cols) * eps * sigma_max dropped.
  truncated,
};

std::string_view to_string(SolveMethod method);

/// Accepts "direct", "lsq"/"least_squares" and "truncated".
SolveMethod parse_solve_method(std::string_view name);

/// Condition number past which a direct solve loses every significant digit.
constexpr double condition_limit() { return 1.0 / std::numeric_limits<double>::epsilon(); }

/// Above this many columns the condition estimate uses the divide-and-conquer
/// SVD, which is much faster but flushes singular values far below
/// eps * sigma_max to zero (reported as infinite condition).
inline constexpr Index kJacobiConditionColumns = 128;

/// 2-norm condition number sigma_max / sigma_min; infinity when singular.
template <typename Derived>
double condition_number(const Eigen::MatrixBase<Derived>& a) {
  using Plain = typename Derived::PlainObject;
  if (a.size() == 0 || a.rows() < a.cols()) return std::numeric_limits<double>::infinity();
  Eigen::VectorXd s;
  if (a.cols() <= kJacobiConditionColumns) {
    s = Eigen::JacobiSVD<Plain>(a).singularValues();
  } else {
    s = Eigen::BDCSVD<Plain>(a).singularValues();
  }
  const double smallest = s(s.size() - 1);
  if (smallest == 0.0) return std::numeric_limits<double>::infinity();
  return s(0) / smallest;
}

template <typename Scalar>
struct DenseSolution {
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  SolveMethod method_used = SolveMethod::direct;
  Index rank = 0;
};

/// Solves a * x = y (square) or min ||a * x - y|| (overdetermined) with the
/// requested method. `condition` is the caller's estimate for a; it steers
/// the direct solver and is carried by any IllConditionedError.
template <typename MatrixDerived, typename RhsDerived>
DenseSolution<typename MatrixDerived::Scalar> solve_dense(const Eigen::MatrixBase<MatrixDerived>& a,
                                                          const Eigen::MatrixBase<RhsDerived>& y,
                                                          SolveMethod method, double condition) {
  using Scalar = typename MatrixDerived::Scalar;
  using Plain = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  if (a.rows() != y.size()) throw ShapeError("right-hand side length does not match the matrix");
  if (a.rows() < a.cols()) throw ShapeError("underdetermined system: fewer equations than unknowns");

  DenseSolution<Scalar> out;
  if (method == SolveMethod::direct) {
    if (a.rows() != a.cols()) throw ShapeError("direct solve needs a square system");
    if (condition <= condition_limit()) {
      Eigen::PartialPivLU<Plain> lu(a);
      out.x = lu.solve(y);
      out.method_used = SolveMethod::direct;
      out.rank = a.cols();
      if (out.x.allFinite()) return out;
    }
    method = SolveMethod::truncated;
  }

  if (method == SolveMethod::least_squares) {
    Eigen::ColPivHouseholderQR<Plain> qr(a);
    if (qr.rank() < a.cols()) {
      throw IllConditionedError("least-squares system is rank deficient (rank " +
                                    std::to_string(qr.rank()) + " of " + std::to_string(a.cols()) +
                                    ")",
                                condition);
    }
    out.x = qr.solve(y);
    out.method_used = SolveMethod::least_squares;
    out.rank = qr.rank();
    return out;
  }

  Eigen::BDCSVD<Plain> svd(a, Eigen::ComputeThinU | Eigen::ComputeThinV);
  svd.setThreshold(static_cast<double>(std::max(a.rows(), a.cols())) *
                   std::numeric_limits<double>::epsilon());
  out.rank = svd.rank();
  if (out.rank == 0 && y.norm() > 0) {
    throw IllConditionedError("every singular value is below the truncation tolerance", condition);
  }
  out.x = out.rank == 0 ? Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(a.cols())
                        : Eigen::Matrix<Scalar, Eigen::Dynamic, 1>(svd.solve(y));
  out.method_used = SolveMethod::truncated;
  return out;
}

/// Outcome of recovering one ROI.
struct Recovery {
  PixelVector pixels;
  /// ||A * pixels - y|| / (K * L)
  double residual = 0.0;
  double condition = 0.0;
  SolveMethod method_used = SolveMethod::direct;
  /// Negative recovered pixels are reported, not clamped.
  Index negative_count = 0;
  double most_negative = 0.0;
  /// ||Im x|| / ||x|| of a complex solve before projection to real; 0 for
  /// structurally real solves.
  double imaginary_leakage = 0.0;
};

/// Fills the nonnegativity report of `r` from its pixels.
void summarize_negatives(Recovery& r);

/// Optional post-process: negative pixels set to zero.
PixelVector clamp_nonnegative(const PixelVector& pixels);

}  // namespace isolight
