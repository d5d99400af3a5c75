#include <doctest.h>

#include <random>

#include "isolight/linalg.hpp"

using namespace isolight;

TEST_SUITE("linalg") {
  TEST_CASE("solver names") {
    CHECK(to_string(SolveMethod::least_squares) == "lsq");
    CHECK(parse_solve_method("lsq") == SolveMethod::least_squares);
    CHECK(parse_solve_method("least_squares") == SolveMethod::least_squares);
    CHECK(parse_solve_method("truncated") == SolveMethod::truncated);
    CHECK_THROWS_AS(parse_solve_method("qr"), ParameterError);
  }

  TEST_CASE("condition number of a diagonal matrix") {
    const Eigen::MatrixXd d = Eigen::Vector3d(4.0, 0.5, 2.0).asDiagonal();
    CHECK(condition_number(d) == doctest::Approx(8.0));
    CHECK(std::isinf(condition_number(Eigen::MatrixXd::Zero(3, 3))));
    CHECK(std::isinf(condition_number(Eigen::MatrixXd::Ones(2, 3))));
    CHECK(condition_number(Eigen::MatrixXcd::Identity(4, 4)) == doctest::Approx(1.0));
  }

  TEST_CASE("condition number keeps tiny singular values above 1/eps") {
    // Graded diagonal spanning 1e-20: the estimate must not flush the tail.
    Eigen::VectorXd s(20);
    for (Index i = 0; i < 20; ++i) s(i) = std::pow(10.0, -static_cast<double>(i));
    Eigen::MatrixXd q = Eigen::MatrixXd::Random(20, 20).householderQr().householderQ();
    const Eigen::MatrixXd a = q * s.asDiagonal() * q.transpose();
    CHECK(condition_number(a) > 1e15);
  }

  TEST_CASE("every method solves a well conditioned square system") {
    std::mt19937_64 rng(1);
    std::normal_distribution<double> n;
    Eigen::MatrixXd a(6, 6);
    for (Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
    a += 6.0 * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd x = Eigen::VectorXd::LinSpaced(6, -1.0, 4.0);
    const Eigen::VectorXd y = a * x;
    const double cond = condition_number(a);
    for (auto m : {SolveMethod::direct, SolveMethod::least_squares, SolveMethod::truncated}) {
      const auto s = solve_dense(a, y, m, cond);
      CHECK(s.method_used == m);
      CHECK((s.x - x).norm() < 1e-12);
      CHECK(s.rank == 6);
    }
  }

  TEST_CASE("least squares on a consistent overdetermined system is exact") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(9, 4);
    const Eigen::Vector4d x(1, 2, 3, 4);
    const auto s = solve_dense(a, a * x, SolveMethod::least_squares, condition_number(a));
    CHECK((s.x - x).norm() < 1e-12);
    CHECK_THROWS_AS(solve_dense(a, a * x, SolveMethod::direct, 1.0), ShapeError);
  }

  TEST_CASE("least squares residual is orthogonal to the columns") {
    Eigen::MatrixXd a = Eigen::MatrixXd::Random(12, 5);
    Eigen::VectorXd y = Eigen::VectorXd::Random(12);
    const auto s = solve_dense(a, y, SolveMethod::least_squares, condition_number(a));
    CHECK((a.transpose() * (a * s.x - y)).norm() < 1e-12);
  }

  TEST_CASE("direct falls back to truncation past the condition limit") {
    Eigen::MatrixXd a(3, 3);
    a << 1, 2, 3, 2, 4, 6, 1, 0, 1;  // rank 2
    const Eigen::VectorXd y = a * Eigen::Vector3d(1, 1, 1);
    const auto s = solve_dense(a, y, SolveMethod::direct, condition_number(a));
    CHECK(s.method_used == SolveMethod::truncated);
    CHECK(s.rank == 2);
    CHECK((a * s.x - y).norm() < 1e-12);
    CHECK_THROWS_AS(solve_dense(a, y, SolveMethod::least_squares, condition_number(a)), IllConditionedError);
  }

  TEST_CASE("shape errors") {
    CHECK_THROWS_AS(solve_dense(Eigen::MatrixXd::Identity(3, 3), Eigen::VectorXd::Ones(2), SolveMethod::direct, 1.0), ShapeError);
    CHECK_THROWS_AS(solve_dense(Eigen::MatrixXd::Ones(2, 3), Eigen::VectorXd::Ones(2), SolveMethod::truncated, 1.0), ShapeError);
  }

  TEST_CASE("ill-conditioned error carries the estimate") {
    try {
      solve_dense(Eigen::MatrixXd::Zero(2, 2), Eigen::VectorXd::Ones(2), SolveMethod::truncated, 7.0);
      FAIL("expected an exception");
    } catch (const IllConditionedError& e) {
      CHECK(e.condition() == 7.0);
    }
  }

  TEST_CASE("complex direct solve") {
    Eigen::MatrixXcd a = Eigen::MatrixXcd::Random(5, 5) + 4.0 * Eigen::MatrixXcd::Identity(5, 5);
    Eigen::VectorXcd x = Eigen::VectorXcd::Random(5);
    const auto s = solve_dense(a, a * x, SolveMethod::direct, condition_number(a));
    CHECK((s.x - x).norm() < 1e-12);
  }

  TEST_CASE("negatives are reported and optionally clamped") {
    Recovery r;
    r.pixels = Eigen::Vector4d(1.0, -0.5, 2.0, -3.0);
    summarize_negatives(r);
    CHECK(r.negative_count == 2);
    CHECK(r.most_negative == -3.0);
    CHECK(clamp_nonnegative(r.pixels) == Eigen::Vector4d(1.0, 0.0, 2.0, 0.0));
  }
}
