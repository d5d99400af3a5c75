#include <doctest.h>

#include <cmath>
#include <limits>

#include "isolight/metrics.hpp"

using namespace isolight;

TEST_SUITE("metrics") {
  TEST_CASE("averaged error divides the 2-norm by the pixel count") {
    const Eigen::Vector4d x(1, 2, 3, 4);
    const Eigen::Vector4d y(1, 2, 3, 7);
    CHECK(averaged_error(x, y) == doctest::Approx(3.0 / 4.0));
    CHECK(averaged_error(x, x) == 0.0);
    CHECK_THROWS_AS(averaged_error(Eigen::VectorXd(x), Eigen::VectorXd::Ones(3)), ShapeError);
  }

  TEST_CASE("averaged difference") {
    Eigen::MatrixXd a(3, 2);
    a << 1, 0, 0, 1, 1, 1;
    const Eigen::Vector2d x(2, 3);
    const Eigen::Vector3d y(2, 3, 9);
    CHECK(averaged_difference(a, x, y) == doctest::Approx(4.0 / 2.0));
    CHECK(averaged_difference_from_product(a * x, y, 2) == doctest::Approx(2.0));
    const Eigen::MatrixXcd ac = a.cast<std::complex<double>>();
    CHECK(averaged_difference(ac, x, y.cast<std::complex<double>>()) == doctest::Approx(2.0));
  }

  TEST_CASE("mean and sample standard deviation skip non-finite entries") {
    Eigen::VectorXd v(5);
    v << 2, 4, 4, std::numeric_limits<double>::quiet_NaN(), 6;
    const MeanStd m = mean_std(v);
    CHECK(m.count == 4);
    CHECK(m.mean == doctest::Approx(4.0));
    CHECK(m.stddev == doctest::Approx(std::sqrt(8.0 / 3.0)));
    CHECK(std::isnan(mean_std(Eigen::VectorXd::Constant(2, NAN)).mean));
    CHECK(mean_std(Eigen::VectorXd::Constant(1, 3.0)).stddev == 0.0);
  }
}
