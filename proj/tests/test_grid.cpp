#include <doctest.h>

#include "isolight/grid.hpp"

using namespace isolight;

TEST_SUITE("grid") {
  TEST_CASE("roi cell and index_of are inverse, row-major") {
    const RoiSpec roi{4, 7, 3, 5};
    CHECK(roi.size() == 15);
    CHECK(roi.cell(0) == Cell{4, 7});
    CHECK(roi.cell(4) == Cell{4, 11});
    CHECK(roi.cell(5) == Cell{5, 7});
    for (Index i = 0; i < roi.size(); ++i) {
      CHECK(roi.contains(roi.cell(i)));
      CHECK(roi.index_of(roi.cell(i)) == i);
    }
    CHECK_FALSE(roi.contains({3, 7}));
    CHECK_FALSE(roi.contains({4, 12}));
  }

  TEST_CASE("check_roi rejects regions off the grid") {
    CHECK_NOTHROW(check_roi({0, 0, 4, 4}, 4, 4));
    CHECK_THROWS_AS(check_roi({1, 0, 4, 4}, 4, 4), BoundsError);
    CHECK_THROWS_AS(check_roi({-1, 0, 2, 2}, 4, 4), BoundsError);
    CHECK_THROWS_AS(check_roi({0, 0, 0, 2}, 4, 4), BoundsError);
  }

  TEST_CASE("scatter then vectorize returns the values") {
    const RoiSpec roi{2, 1, 2, 3};
    Eigen::VectorXd v(6);
    v << 1, 2, 3, 4, 5, 6;
    const ImageGrid g = scatter_roi(v, roi, 5, 6);
    CHECK(g(2, 1) == 1);
    CHECK(g(2, 3) == 3);
    CHECK(g(3, 1) == 4);
    CHECK(g.sum() == doctest::Approx(21));
    CHECK(vectorize_roi(g, roi) == v);
    CHECK(is_isolated(g, roi, 0.0));
    CHECK_FALSE(is_isolated(g, RoiSpec{2, 1, 2, 2}, 0.0));
  }

  TEST_CASE("scatter with the wrong count is a shape error") {
    CHECK_THROWS_AS(scatter_roi(Eigen::VectorXd::Ones(5), RoiSpec{0, 0, 2, 3}, 4, 4), ShapeError);
  }

  TEST_CASE("complex rasters scatter too") {
    Eigen::VectorXcd v = Eigen::VectorXcd::Constant(4, {1.0, -2.0});
    const SpectrumGrid g = scatter_roi(v, RoiSpec{0, 0, 2, 2}, 3, 3);
    CHECK(g(1, 1) == std::complex<double>(1.0, -2.0));
    CHECK(g(2, 2) == std::complex<double>(0.0, 0.0));
  }

  TEST_CASE("centred_roi puts the extra row below the centre") {
    CHECK(centred_roi({10, 10}, 3, 3) == RoiSpec{9, 9, 3, 3});
    CHECK(centred_roi({10, 10}, 4, 2) == RoiSpec{9, 10, 4, 2});
  }

  TEST_CASE("is_nonnegative") {
    ImageGrid g = ImageGrid::Zero(2, 2);
    CHECK(is_nonnegative(g));
    g(1, 0) = -1e-300;
    CHECK_FALSE(is_nonnegative(g));
  }
}
