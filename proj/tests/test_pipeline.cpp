#include <doctest.h>

#include <set>

#include "isolight/pipeline.hpp"

using namespace isolight;

namespace {

TableProtocol small_protocol() {
  TableProtocol p;
  p.field_rows = p.field_cols = 64;
  p.psf_field = p.psf_crop = 31;
  p.cutoff_radius = 6.0;
  p.sizes = {2, 3};
  p.trials = 3;
  return p;
}

}  // namespace

TEST_SUITE("pipeline") {
  TEST_CASE("seed derivation is deterministic and spreads the coordinates") {
    CHECK(derive_seed(1, 2, 3, 4) == derive_seed(1, 2, 3, 4));
    std::set<std::uint64_t> seen;
    for (std::uint64_t a = 0; a < 20; ++a)
      for (std::uint64_t b = 0; b < 20; ++b) seen.insert(derive_seed(20190401, a, b, 1));
    CHECK(seen.size() == 400);
    CHECK(derive_seed(1, 2, 3, 1) != derive_seed(1, 2, 3, 2));
    CHECK(derive_seed(1, 2, 3) != derive_seed(1, 3, 2));
  }

  TEST_CASE("domain names") {
    CHECK(to_string(Domain::frequency) == "frequency");
    CHECK(parse_domain("spatial") == Domain::spatial);
    CHECK_THROWS_AS(parse_domain("fourier"), ParameterError);
  }

  TEST_CASE("locate_roi centres on the blob") {
    const PsfKernel psf = build_psf({64, 64, 6.0, 1.0}, 31);
    const RoiSpec truth{20, 37, 3, 3};
    const ImageGrid observed = observe_spatial(scatter_roi(Eigen::VectorXd::Constant(9, 100.0), truth, 64, 64), psf);
    CHECK(locate_roi(observed, 3, 3) == truth);
    const RoiSpec wide = locate_roi(observed, 5, 5);
    CHECK(wide == RoiSpec{19, 36, 5, 5});
    // Near an edge the ROI is clamped inside the image.
    ImageGrid corner = ImageGrid::Zero(16, 16);
    corner(0, 0) = 1.0;
    CHECK(locate_roi(corner, 3, 3) == RoiSpec{0, 0, 3, 3});
  }

  TEST_CASE("locate_roi without signal") {
    CHECK_THROWS_AS(locate_roi(ImageGrid::Zero(8, 8), 2, 2), NoSignalError);
    CHECK_THROWS_AS(locate_roi(ImageGrid::Constant(8, 8, -1.0), 2, 2), NoSignalError);
    CHECK_THROWS_AS(locate_roi(ImageGrid::Ones(8, 8), 9, 2), ParameterError);
  }

  TEST_CASE("protocol validation") {
    TableProtocol p = small_protocol();
    CHECK_NOTHROW(p.validate());
    p.psf_crop = 30;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_protocol();
    p.sizes = {17};
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_protocol();
    p.trials = 0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
    p = small_protocol();
    p.cutoff_radius = 40.0;
    CHECK_THROWS_AS(p.validate(), ParameterError);
  }

  TEST_CASE("effective cutoff widens only when the block needs it") {
    const TableProtocol p;
    CHECK(p.effective_cutoff(3, 3) == 6.0);
    CHECK(p.effective_cutoff(5, 5) == 6.0);
    CHECK(p.effective_cutoff(6, 6) == doctest::Approx(std::hypot(5.0, 5.0)));
    CHECK(p.field_otf(20, 20).cutoff_radius == doctest::Approx(std::hypot(19.0, 19.0)));
  }

  TEST_CASE("table experiment rows, aggregates and determinism") {
    const TableProtocol p = small_protocol();
    for (Domain d : {Domain::spatial, Domain::frequency}) {
      const ExperimentReport r = run_table_experiment(d, p);
      REQUIRE(r.trials.size() == 6);
      REQUIRE(r.summaries.size() == 2);
      CHECK(r.summary(2).ae.count == 3);
      CHECK_THROWS_AS(r.summary(4), ParameterError);
      for (const auto& t : r.trials) {
        CHECK_FALSE(t.failed);
        CHECK(t.ad < 1e-10);
        CHECK(t.ae < 1e-3);
        CHECK(t.mean_pixel > 0.0);
      }
      const TrialResult again = run_trial(d, p, 3, 1);
      CHECK(again.seed == r.trials[4].seed);
      CHECK(again.ae == r.trials[4].ae);
      CHECK(again.ad == r.trials[4].ad);
      const ExperimentReport r2 = run_table_experiment(d, p);
      CHECK(r2.summaries[1].ae.mean == r.summaries[1].ae.mean);
    }
  }

  TEST_CASE("summaries use the sample standard deviation") {
    std::vector<TrialResult> rows(3);
    for (int i = 0; i < 3; ++i) {
      rows[i].roi_size = 2;
      rows[i].ae = i;
      rows[i].ad = 0.0;
    }
    rows[2].failed = true;
    const auto s = summarize(rows, small_protocol(), Domain::frequency);
    REQUIRE(s.size() == 1);
    CHECK(s[0].ae.mean == doctest::Approx(1.0));
    CHECK(s[0].ae.stddev == doctest::Approx(1.0));
    CHECK(s[0].failures == 1);
  }

  TEST_CASE("ad spot check agrees with the dense route") {
    const TableProtocol p = small_protocol();
    CHECK(ad_spot_check(Domain::spatial, p, 3, 7) < 1e-12);
    CHECK(ad_spot_check(Domain::frequency, p, 3, 7) < 1e-12);
  }

  TEST_CASE("scan reconstruct on a tiny sample") {
    const ImageGrid sample = synthetic_sample(12, 12, 3);
    CHECK(sample.minCoeff() >= 0.0);
    CHECK(sample.maxCoeff() < 256.0);
    const PsfKernel psf = build_psf({31, 31, 6.0, 1.0}, 31);
    const ImageGrid s = scan_reconstruct(sample, 2, 2, psf, {Domain::spatial, SolveMethod::direct, 6.0});
    CHECK(relative_scan_error(s, sample) < 1e-9);
    const ImageGrid f = scan_reconstruct(sample, 3, 3, psf, {Domain::frequency, SolveMethod::direct, 4.0});
    CHECK(relative_scan_error(f, sample) < 1e-9);
    CHECK_THROWS_AS(scan_reconstruct(sample, 5, 3, psf), ShapeError);
    CHECK_THROWS_AS(relative_scan_error(s, ImageGrid::Zero(12, 12)), DegenerateInputError);
  }

  TEST_CASE("dark tiles stay dark") {
    ImageGrid sample = ImageGrid::Zero(6, 6);
    sample(4, 4) = 9.0;
    const PsfKernel psf = build_psf({31, 31, 6.0, 1.0}, 31);
    const ImageGrid s = scan_reconstruct(sample, 3, 3, psf);
    CHECK(s.topLeftCorner(3, 6).isZero(0.0));
    CHECK(s(4, 4) == doctest::Approx(9.0));
  }

  TEST_CASE("psnr conversions") {
    CHECK(psnr_ratio(40.0) == doctest::Approx(100.0));
    CHECK(psnr_db_from_ratio(250.0) == doctest::Approx(47.9588).epsilon(1e-5));
    CHECK(psnr_db_from_ratio(psnr_ratio(250.0)) == doctest::Approx(250.0));
  }

  TEST_CASE("noise sweep structure") {
    NoiseSweepConfig c;
    c.protocol = small_protocol();
    c.roi_size = 2;
    c.psnr_db = {120, 20, 60};
    c.domains = {Domain::spatial};
    const NoiseSweepReport r = noise_sweep(c);
    REQUIRE(r.points.size() == 4);
    CHECK(r.points[0].psnr_db == 20.0);
    CHECK(std::isinf(r.points[3].psnr_db));
    CHECK(r.points[3].acceptable);
    CHECK(r.points[0].ae.mean > r.points[2].ae.mean);
    REQUIRE(r.crossings.size() == 1);
    CHECK(r.crossings[0].found);
    CHECK(r.crossings[0].psnr_db <= 120.0);
  }
}
