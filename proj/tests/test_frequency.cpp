#include <doctest.h>

#include <numbers>
#include <random>

#include "isolight/forward.hpp"
#include "isolight/frequency.hpp"
#include "isolight/metrics.hpp"

using namespace isolight;
using frequency::Complex;

namespace {

Eigen::VectorXd random_pixels(Index n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(0.0, 256.0);
  Eigen::VectorXd x(n);
  for (Index i = 0; i < n; ++i) x(i) = u(rng);
  return x;
}

// X(u) of a length-n signal with x_a at a and x_b at b.
Complex two_point_spectrum(Index n, Index a, Index b, double xa, double xb, Index u) {
  auto e = [n](Index m, Index k) { return std::polar(1.0, -2.0 * std::numbers::pi * static_cast<double>(m * k) / static_cast<double>(n)); };
  return xa * e(a, u) + xb * e(b, u);
}

}  // namespace

TEST_SUITE("frequency") {
  TEST_CASE("two-point with exact spectrum values") {
    const Complex xc = two_point_spectrum(8, 3, 4, 6.7, 8.9, 0);
    const Complex xd = two_point_spectrum(8, 3, 4, 6.7, 8.9, 1);
    CHECK(std::abs(xc - 15.6) < 1e-12);
    CHECK(std::abs(xd - Complex(-8.9 - 6.7 / std::sqrt(2.0), -6.7 / std::sqrt(2.0))) < 1e-12);
    const auto s = frequency::solve_two_point_1d(8, 3, 4, 0, 1, xc, xd);
    CHECK(std::abs(s.x_a - 6.7) < 1e-10);
    CHECK(std::abs(s.x_b - 8.9) < 1e-10);
  }

  TEST_CASE("two-point with four-digit spectrum values") {
    const Complex xd(-13.6376, -4.7376);
    CHECK_THROWS_AS(frequency::solve_two_point_1d(8, 3, 4, 0, 1, 15.6, xd), InconsistentInputError);
    const auto s = frequency::solve_two_point_1d(8, 3, 4, 0, 1, 15.6, xd, 1e-4);
    CHECK(std::abs(s.x_a - 6.7) < 1e-3);
    CHECK(std::abs(s.x_b - 8.9) < 1e-3);
  }

  TEST_CASE("two-point over random configurations") {
    std::mt19937_64 rng(4);
    for (int t = 0; t < 100; ++t) {
      const Index n = 3 + static_cast<Index>(rng() % 30);
      const Index a = static_cast<Index>(rng() % n);
      const Index b = (a + 1 + static_cast<Index>(rng() % (n - 1))) % n;
      const Index c = static_cast<Index>(rng() % n);
      const Index d = (c + 1 + static_cast<Index>(rng() % (n - 1))) % n;
      const double xa = 10.0 * static_cast<double>(rng() % 1000) / 1000.0;
      const double xb = 10.0 * static_cast<double>(rng() % 1000) / 1000.0 + 0.1;
      try {
        const auto s = frequency::solve_two_point_1d(n, a, b, c, d, two_point_spectrum(n, a, b, xa, xb, c),
                                                     two_point_spectrum(n, a, b, xa, xb, d));
        CHECK(std::abs(s.x_a - xa) < 1e-8);
        CHECK(std::abs(s.x_b - xb) < 1e-8);
      } catch (const SingularError&) {
        // (c - d)(a - b) a multiple of n: the two equations coincide.
        CHECK(((c - d) * (a - b)) % n == 0);
      }
    }
  }

  TEST_CASE("two-point singular cases") {
    CHECK_THROWS_AS(frequency::solve_two_point_1d(8, 2, 2, 0, 1, 1.0, 1.0), SingularError);
    CHECK_THROWS_AS(frequency::solve_two_point_1d(8, 0, 4, 0, 2, 1.0, 1.0), SingularError);
    CHECK_THROWS_AS(frequency::solve_two_point_1d(8, 0, 9, 0, 2, 1.0, 1.0), BoundsError);
  }

  TEST_CASE("block and mirrored frequencies") {
    const auto block = frequency::block_frequencies(1, 2, 2, 3);
    REQUIRE(block.size() == 6);
    CHECK(block[0] == Cell{1, 2});
    CHECK(block[3] == Cell{2, 2});
    const auto mirrored = frequency::mirrored_frequencies(block, 16, 16);
    CHECK(mirrored[0] == Cell{15, 14});
  }

  TEST_CASE("system reproduces the observed spectrum") {
    const OtfSpec spec{768, 768, 6.0, 1.0};
    std::mt19937_64 rng(1);
    const RoiSpec roi{383, 383, 3, 3};
    const Eigen::VectorXd x = random_pixels(9, rng);
    const SpectrumGrid observed = observe_spectrum(scatter_roi(x, roi, 768, 768), build_otf(spec));
    const auto sys = frequency::build_system(spec, roi, frequency::default_selection(observed, roi));
    CHECK(averaged_difference(sys.a_matrix, x, sys.rhs) < 1e-16);
    CHECK(std::abs(sys.a_matrix(0, 0) - 1.0 / (768.0 * 768.0)) < 1e-20);
  }

  TEST_CASE("selection outside the passband is rejected") {
    const OtfSpec spec{64, 64, 3.0, 1.0};
    const SpectrumGrid observed = SpectrumGrid::Zero(64, 64);
    const RoiSpec roi{10, 10, 4, 4};
    CHECK_THROWS_AS(frequency::build_system(spec, roi, frequency::default_selection(observed, roi)), InvalidSelectionError);
    CHECK_THROWS_AS(frequency::build_system(spec, {10, 10, 2, 2}, frequency::select(observed, {{0, 0}, {0, 1}})), ShapeError);
  }

  TEST_CASE("round trip on 200 randomized 2x2 and 3x3 instances") {
    std::mt19937_64 rng(20190401);
    const Index fields[] = {24, 32, 33, 40, 48};
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      const Index m = fields[rng() % 5];
      const Index k = 2 + static_cast<Index>(rng() % 2);
      const Index l = 2 + static_cast<Index>(rng() % 2);
      const OtfSpec spec{m, m, 3.0 + static_cast<double>(rng() % 4), 1.0};
      const RoiSpec roi{static_cast<Index>(rng() % (m - k + 1)), static_cast<Index>(rng() % (m - l + 1)), k, l};
      const Eigen::VectorXd x = random_pixels(roi.size(), rng);
      const SpectrumGrid observed = observe_spectrum(scatter_roi(x, roi, m, m), build_otf(spec));
      const auto sys = frequency::build_system(spec, roi, frequency::default_selection(observed, roi));
      const Recovery r = frequency::solve_system(sys);
      worst = std::max(worst, averaged_error(r.pixels, x));
      CHECK(r.imaginary_leakage < 1e-8);
    }
    CHECK(worst < 1e-6);
  }

  TEST_CASE("any valid selection recovers the same pixels") {
    const Index m = 32;
    const OtfSpec spec{m, m, 6.0, 1.0};
    std::mt19937_64 rng(8);
    for (Index k : {2, 3}) {
      const RoiSpec roi{11, 17, k, k};
      const Eigen::VectorXd x = random_pixels(roi.size(), rng);
      const SpectrumGrid observed = observe_spectrum(scatter_roi(x, roi, m, m), build_otf(spec));
      const auto base = frequency::default_selection(observed, roi);
      std::vector<std::vector<Cell>> choices = {
          frequency::block_frequencies(1, -1, k, k),
          frequency::block_frequencies(-2, 0, k, k),
          frequency::mirrored_frequencies(base.frequencies, m, m),
      };
      std::vector<Cell> wide = base.frequencies;
      for (const Cell& f : frequency::block_frequencies(-1, 2, k, k)) wide.push_back(f);
      choices.push_back(wide);

      const Eigen::VectorXd ref = frequency::solve_system(frequency::build_system(spec, roi, base)).pixels;
      for (const auto& freqs : choices) {
        const auto sys = frequency::build_system(spec, roi, frequency::select(observed, freqs));
        const SolveMethod method = sys.square() ? SolveMethod::direct : SolveMethod::least_squares;
        const Eigen::VectorXd got = frequency::solve_system(sys, method).pixels;
        CHECK((got - ref).cwiseAbs().maxCoeff() < 1e-8);
      }
    }
  }

  TEST_CASE("stacked real system and every solver agree") {
    const Index m = 32;
    const OtfSpec spec{m, m, 5.0, 1.0};
    std::mt19937_64 rng(12);
    const RoiSpec roi{3, 29, 2, 3};
    const Eigen::VectorXd x = random_pixels(roi.size(), rng);
    const SpectrumGrid observed = observe_spectrum(scatter_roi(x, roi, m, m), build_otf(spec));
    const auto sys = frequency::build_system(spec, roi, frequency::default_selection(observed, roi));
    const auto [a, y] = frequency::stacked_real(sys);
    CHECK(a.rows() == 2 * sys.a_matrix.rows());
    CHECK((a * x - y).norm() < 1e-15);
    for (auto method : {SolveMethod::direct, SolveMethod::least_squares, SolveMethod::truncated}) {
      CHECK(averaged_error(frequency::solve_system(sys, method).pixels, x) < 1e-8);
    }
  }

  TEST_CASE("matrix-free operator equals the dense product") {
    const OtfSpec spec{96, 80, 9.0, 1.0};
    std::mt19937_64 rng(3);
    const RoiSpec roi{90, 70, 5, 6};
    const Eigen::VectorXd x = random_pixels(roi.size(), rng);
    const auto freqs = frequency::block_frequencies(-2, -3, 5, 6);
    const auto sys = frequency::build_system(spec, roi, frequency::select(SpectrumGrid::Zero(96, 80), freqs));
    const Eigen::VectorXcd dense = sys.a_matrix * x.cast<Complex>();
    const Eigen::VectorXcd free = frequency::apply_operator(96, 80, roi, freqs, x);
    CHECK((dense - free).cwiseAbs().maxCoeff() < 1e-13 * dense.cwiseAbs().maxCoeff());
  }
}
