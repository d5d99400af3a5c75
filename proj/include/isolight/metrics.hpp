#pragma once

#include <Eigen/Dense>

#include "isolight/errors.hpp"

namespace isolight {

/// ||recovered - ideal|| / n, with n the number of ROI pixels.
template <typename A, typename B>
double averaged_error(const Eigen::MatrixBase<A>& recovered, const Eigen::MatrixBase<B>& ideal) {
  if (recovered.size() != ideal.size() || ideal.size() == 0) {
    throw ShapeError("averaged_error: vectors of different or zero length");
  }
  return (recovered - ideal).norm() / static_cast<double>(ideal.size());
}

/// ||A x - y|| / n with n = x.size(). Evaluated with the ideal pixels it
/// measures how faithfully the system models the imaging, not solver quality.
template <typename M, typename X, typename Y>
double averaged_difference(const Eigen::MatrixBase<M>& a, const Eigen::MatrixBase<X>& x,
                           const Eigen::MatrixBase<Y>& y) {
  if (a.cols() != x.size() || a.rows() != y.size() || x.size() == 0) {
    throw ShapeError("averaged_difference: operands do not conform");
  }
  using Scalar = typename M::Scalar;
  return (a * x.template cast<Scalar>() - y).norm() / static_cast<double>(x.size());
}

/// Same metric from an already evaluated product A x.
template <typename AX, typename Y>
double averaged_difference_from_product(const Eigen::MatrixBase<AX>& ax,
                                        const Eigen::MatrixBase<Y>& y, Eigen::Index unknowns) {
  if (ax.size() != y.size() || unknowns <= 0) throw ShapeError("averaged_difference: bad operands");
  return (ax - y).norm() / static_cast<double>(unknowns);
}

struct MeanStd {
  double mean = 0.0;
  double stddev = 0.0;
  Eigen::Index count = 0;
};

/// Mean and sample standard deviation of the finite entries.
MeanStd mean_std(const Eigen::Ref<const Eigen::VectorXd>& values);

}  // namespace isolight
