#include "isolight/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <random>

#include "isolight/dft.hpp"
#include "isolight/frequency.hpp"
#include "isolight/spatial.hpp"

namespace isolight {

std::string_view to_string(Domain domain) {
  return domain == Domain::spatial ? "spatial" : "frequency";
}

Domain parse_domain(std::string_view name) {
  if (name == "spatial") return Domain::spatial;
  if (name == "frequency") return Domain::frequency;
  throw ParameterError("unknown domain '" + std::string(name) + "'");
}

std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b, std::uint64_t c) {
  auto mix = [](std::uint64_t z) {
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  };
  std::uint64_t h = mix(root);
  h = mix(h ^ a);
  h = mix(h ^ b);
  return mix(h ^ c);
}

RoiSpec locate_roi(const ImageGrid& observed, Index k_rows, Index l_cols) {
  if (k_rows < 1 || l_cols < 1 || k_rows > observed.rows() || l_cols > observed.cols()) {
    throw ParameterError("ROI extent does not fit the observed image");
  }
  const double peak = observed.size() ? observed.maxCoeff() : 0.0;
  if (!(peak > 0.0)) throw NoSignalError("observed image has no signal to localize");

  const double floor = 0.5 * peak;
  double weight = 0.0, row_sum = 0.0, col_sum = 0.0;
  for (Index r = 0; r < observed.rows(); ++r) {
    for (Index c = 0; c < observed.cols(); ++c) {
      const double v = observed(r, c);
      if (v < floor) continue;
      weight += v;
      row_sum += v * static_cast<double>(r);
      col_sum += v * static_cast<double>(c);
    }
  }
  const double row_centre = row_sum / weight;
  const double col_centre = col_sum / weight;

  // Centre of a K-cell span starting at t is t + (K-1)/2.
  auto place = [](double centre, Index extent, Index limit) {
    const auto start = static_cast<Index>(std::llround(centre - 0.5 * static_cast<double>(extent - 1)));
    return std::clamp<Index>(start, 0, limit - extent);
  };
  return {place(row_centre, k_rows, observed.rows()), place(col_centre, l_cols, observed.cols()),
          k_rows, l_cols};
}

std::vector<Index> TableProtocol::default_sizes() {
  std::vector<Index> sizes;
  for (Index k = 2; k <= 20; ++k) sizes.push_back(k);
  return sizes;
}

double TableProtocol::effective_cutoff(Index k_rows, Index l_cols) const {
  const double needed = std::hypot(static_cast<double>(k_rows - 1), static_cast<double>(l_cols - 1));
  return std::max(cutoff_radius, needed);
}

void TableProtocol::validate() const {
  if (field_rows < 1 || field_cols < 1) throw ParameterError("field dimensions must be positive");
  if (trials < 1) throw ParameterError("at least one trial per size is required");
  if (sizes.empty()) throw ParameterError("no ROI sizes requested");
  if (psf_crop < 1 || psf_crop % 2 == 0) throw ParameterError("PSF crop must be odd");
  if (psf_crop > psf_field) throw ParameterError("PSF crop exceeds the PSF field");
  if (!(pixel_max > 0.0)) throw ParameterError("pixel upper limit must be positive");
  psf_otf().validate();
  for (Index k : sizes) {
    if (k < 1 || k > field_rows || k > field_cols) {
      throw ParameterError("ROI size " + std::to_string(k) + " does not fit the field");
    }
    if (k - 1 > (psf_crop - 1) / 2) {
      throw ParameterError("PSF crop too small for ROI size " + std::to_string(k));
    }
    field_otf(k, k).validate();
  }
}

const SizeSummary& ExperimentReport::summary(Index roi_size) const {
  for (const auto& s : summaries)
    if (s.roi_size == roi_size) return s;
  throw ParameterError("report has no ROI size " + std::to_string(roi_size));
}

namespace {

RoiSpec centre_roi(const TableProtocol& p, Index k) {
  return {(p.field_rows - k) / 2, (p.field_cols - k) / 2, k, k};
}

PixelVector random_pixels(Index count, double upper, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uniform(0.0, upper);
  PixelVector x(count);
  for (Index i = 0; i < count; ++i) x(i) = uniform(rng);
  return x;
}

std::uint64_t pixel_seed(const TableProtocol& p, Index size, Index trial) {
  return derive_seed(p.root_seed, static_cast<std::uint64_t>(size),
                     static_cast<std::uint64_t>(trial), 1);
}

std::uint64_t noise_seed(const TableProtocol& p, Index size, Index trial) {
  return derive_seed(p.root_seed, static_cast<std::uint64_t>(size),
                     static_cast<std::uint64_t>(trial), 2);
}

// Optics shared by every trial of one protocol.
class TableRunner {
 public:
  TableRunner(Domain domain, const TableProtocol& protocol) : domain_(domain), p_(protocol) {
    p_.validate();
    if (domain_ == Domain::spatial) {
      psf_ = std::make_unique<PsfKernel>(build_psf(p_.psf_otf(), p_.psf_crop));
      convolve_ =
          std::make_unique<CircularConvolution>(*psf_, p_.field_rows, p_.field_cols);
    }
  }

  TrialResult run(Index k, Index trial) {
    TrialResult out;
    out.domain = domain_;
    out.roi_size = k;
    out.trial = trial;
    out.seed = pixel_seed(p_, k, trial);
    try {
      domain_ == Domain::spatial ? run_spatial(k, trial, out) : run_frequency(k, trial, out);
    } catch (const Error& e) {
      out.failed = true;
      out.error = e.what();
    }
    return out;
  }

  double spot_check(Index k, std::uint64_t seed) {
    const RoiSpec roi = centre_roi(p_, k);
    const PixelVector x = random_pixels(roi.size(), p_.pixel_max, seed);
    const ImageGrid ideal = scatter_roi(x, roi, p_.field_rows, p_.field_cols);
    if (domain_ == Domain::spatial) {
      const ImageGrid observed = (*convolve_)(ideal);
      const std::vector<Cell> cells = roi.cells();
      const Eigen::VectorXd ax =
          spatial::apply_operator(*psf_, roi, cells, x, p_.field_rows, p_.field_cols);
      return averaged_difference_from_product(ax, vectorize_roi(observed, roi), roi.size());
    }
    const SpectrumGrid spectrum = observe_spectrum(ideal, otf(k));
    const auto selection = frequency::default_selection(spectrum, roi);
    const Eigen::VectorXcd ax = frequency::apply_operator(p_.field_rows, p_.field_cols, roi,
                                                          selection.frequencies, x);
    return averaged_difference_from_product(ax, selection.entries, roi.size());
  }

 private:
  const SpectrumGrid& otf(Index k) {
    auto it = otfs_.find(k);
    if (it == otfs_.end()) it = otfs_.emplace(k, build_otf(p_.field_otf(k, k))).first;
    return it->second;
  }

  void run_spatial(Index k, Index trial, TrialResult& out) {
    const RoiSpec roi = centre_roi(p_, k);
    const PixelVector x = random_pixels(roi.size(), p_.pixel_max, out.seed);
    out.mean_pixel = x.mean();
    const ImageGrid ideal = scatter_roi(x, roi, p_.field_rows, p_.field_cols);
    ImageGrid observed = (*convolve_)(ideal);
    if (std::isfinite(p_.psnr_db)) observed = add_noise(observed, {p_.psnr_db, noise_seed(p_, k, trial)});

    const auto sys = spatial::build_system(*psf_, observed, roi);
    out.ad = averaged_difference(sys.a_matrix, x, sys.rhs);
    out.condition = sys.condition_estimate;
    if (p_.run_alternate) {
      const auto ring = spatial::ring_cells(roi, spatial::kDefaultRingWidth, p_.field_rows, p_.field_cols);
      const auto over = spatial::build_system(*psf_, observed, roi, ring, {.estimate_condition = false});
      try {
        out.ae_alternate = averaged_error(
            spatial::solve_system(over, SolveMethod::least_squares).pixels, x);
      } catch (const Error&) {
        // Reported as NaN; the primary solve decides whether the trial failed.
      }
    }
    const Recovery rec = spatial::solve_system(sys, p_.method);
    out.ae = averaged_error(rec.pixels, x);
    out.residual = rec.residual;
    out.method_used = rec.method_used;
  }

  void run_frequency(Index k, Index trial, TrialResult& out) {
    const RoiSpec roi = centre_roi(p_, k);
    const PixelVector x = random_pixels(roi.size(), p_.pixel_max, out.seed);
    out.mean_pixel = x.mean();
    const ImageGrid ideal = scatter_roi(x, roi, p_.field_rows, p_.field_cols);
    const SpectrumGrid& pass = otf(k);
    SpectrumGrid spectrum = observe_spectrum(ideal, pass);
    if (std::isfinite(p_.psnr_db)) {
      // Noise enters the observed (blurred) image; the microscope passes
      // only the low-frequency part of it.
      const ImageGrid blurred = dft::image_from_normalized_spectrum(spectrum);
      spectrum = observe_spectrum(add_noise(blurred, {p_.psnr_db, noise_seed(p_, k, trial)}), pass);
    }

    const OtfSpec otf_spec = p_.field_otf(k, k);
    const auto sys = frequency::build_system(otf_spec, roi, frequency::default_selection(spectrum, roi));
    out.ad = averaged_difference(sys.a_matrix, x, sys.rhs);
    out.condition = sys.condition_estimate;
    if (p_.run_alternate) {
      try {
        out.ae_alternate =
            averaged_error(frequency::solve_system(sys, SolveMethod::least_squares).pixels, x);
      } catch (const Error&) {
      }
    }
    const Recovery rec = frequency::solve_system(sys, p_.method);
    out.ae = averaged_error(rec.pixels, x);
    out.residual = rec.residual;
    out.method_used = rec.method_used;
  }

  Domain domain_;
  TableProtocol p_;
  std::unique_ptr<PsfKernel> psf_;
  std::unique_ptr<CircularConvolution> convolve_;
  std::map<Index, SpectrumGrid> otfs_;
};

}  // namespace

std::vector<SizeSummary> summarize(const std::vector<TrialResult>& trials,
                                   const TableProtocol& protocol, Domain domain) {
  std::vector<Index> order;
  for (const auto& t : trials)
    if (std::find(order.begin(), order.end(), t.roi_size) == order.end()) order.push_back(t.roi_size);

  std::vector<SizeSummary> out;
  for (Index size : order) {
    std::vector<double> ae, ad, alt, cond;
    SizeSummary s;
    s.roi_size = size;
    s.effective_cutoff = domain == Domain::frequency ? protocol.effective_cutoff(size, size)
                                                      : protocol.cutoff_radius;
    for (const auto& t : trials) {
      if (t.roi_size != size) continue;
      if (t.failed) ++s.failures;
      ae.push_back(t.ae);
      ad.push_back(t.ad);
      alt.push_back(t.ae_alternate);
      cond.push_back(t.condition);
    }
    auto stats = [](const std::vector<double>& v) {
      return mean_std(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Index>(v.size())));
    };
    s.ae = stats(ae);
    s.ad = stats(ad);
    s.ae_alternate = stats(alt);
    // Same matrix in every trial up to noise; the median keeps infinite
    // estimates instead of dropping them.
    std::erase_if(cond, [](double c) { return std::isnan(c); });
    if (!cond.empty()) {
      std::sort(cond.begin(), cond.end());
      s.condition = cond[(cond.size() - 1) / 2];
    }
    out.push_back(s);
  }
  return out;
}

ExperimentReport run_table_experiment(Domain domain, const TableProtocol& protocol) {
  TableRunner runner(domain, protocol);
  ExperimentReport report;
  report.domain = domain;
  report.protocol = protocol;
  for (Index k : protocol.sizes)
    for (Index t = 0; t < protocol.trials; ++t) report.trials.push_back(runner.run(k, t));
  report.summaries = summarize(report.trials, protocol, domain);
  return report;
}

TrialResult run_trial(Domain domain, const TableProtocol& protocol, Index roi_size, Index trial) {
  TableProtocol single = protocol;
  single.sizes = {roi_size};
  return TableRunner(domain, single).run(roi_size, trial);
}

double ad_spot_check(Domain domain, const TableProtocol& protocol, Index roi_size,
                     std::uint64_t seed) {
  TableProtocol single = protocol;
  single.sizes = {roi_size};
  return TableRunner(domain, single).spot_check(roi_size, seed);
}

ImageGrid scan_reconstruct(const ImageGrid& sample, Index tile_rows, Index tile_cols,
                           const PsfKernel& psf, const ScanOptions& options) {
  const Index rows = sample.rows();
  const Index cols = sample.cols();
  if (tile_rows < 1 || tile_cols < 1 || rows % tile_rows != 0 || cols % tile_cols != 0) {
    throw ShapeError("sample " + std::to_string(rows) + "x" + std::to_string(cols) +
                     " is not divisible into " + std::to_string(tile_rows) + "x" +
                     std::to_string(tile_cols) + " tiles");
  }

  std::optional<OtfSpec> otf_spec;
  SpectrumGrid otf;
  if (options.domain == Domain::frequency) {
    otf_spec = OtfSpec{rows, cols, options.cutoff_radius, 1.0};
    otf = build_otf(*otf_spec);
  }

  // The sample sits in a dark field at least as large as the PSF, so a lit
  // tile's light does not wrap back onto itself and every tile sees the same
  // system whatever the sample size.
  const Index field_rows = std::max(rows, psf.values().rows());
  const Index field_cols = std::max(cols, psf.values().cols());

  ImageGrid mosaic = ImageGrid::Zero(rows, cols);
  for (Index tr = 0; tr < rows / tile_rows; ++tr) {
    for (Index tc = 0; tc < cols / tile_cols; ++tc) {
      const RoiSpec roi{tr * tile_rows, tc * tile_cols, tile_rows, tile_cols};
      const PixelVector tile = vectorize_roi(sample, roi);
      if (tile.isZero(0.0)) continue;  // a dark tile emits nothing to recover

      Recovery rec;
      if (options.domain == Domain::spatial) {
        const ImageGrid lit = scatter_roi(tile, roi, field_rows, field_cols);
        std::vector<Cell> cells = roi.cells();
        Eigen::VectorXd values = observe_cells(lit, psf, cells);
        const auto sys = spatial::build_system(psf, roi, std::move(cells), std::move(values),
                                               field_rows, field_cols);
        rec = spatial::solve_system(sys, options.method);
      } else {
        const SpectrumGrid spectrum = observe_spectrum(scatter_roi(tile, roi, rows, cols), otf);
        const auto sys = frequency::build_system(*otf_spec, roi,
                                                 frequency::default_selection(spectrum, roi));
        rec = frequency::solve_system(sys, options.method);
      }
      for (Index i = 0; i < roi.size(); ++i) {
        const Cell c = roi.cell(i);
        mosaic(c.row, c.col) = rec.pixels(i);
      }
    }
  }
  return mosaic;
}

double relative_scan_error(const ImageGrid& recovered, const ImageGrid& sample) {
  if (recovered.rows() != sample.rows() || recovered.cols() != sample.cols()) {
    throw ShapeError("recovered image and sample differ in shape");
  }
  const double mean = sample.mean();
  if (!(mean > 0.0)) throw DegenerateInputError("sample has no light");
  return (recovered - sample).cwiseAbs().mean() / mean;
}

ImageGrid synthetic_sample(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  ImageGrid img(rows, cols);
  for (Index r = 0; r < rows; ++r)
    for (Index c = 0; c < cols; ++c)
      img(r, c) = 20.0 + 30.0 * static_cast<double>(r + c) / static_cast<double>(rows + cols);

  const int blobs = 6 + static_cast<int>(rows * cols / 4000);
  for (int b = 0; b < blobs; ++b) {
    const double cr = unit(rng) * static_cast<double>(rows);
    const double cc = unit(rng) * static_cast<double>(cols);
    const double radius = 1.0 + unit(rng) * 0.08 * static_cast<double>(std::min(rows, cols));
    const double amp = 40.0 + 120.0 * unit(rng);
    for (Index r = 0; r < rows; ++r) {
      for (Index c = 0; c < cols; ++c) {
        const double d2 = (static_cast<double>(r) - cr) * (static_cast<double>(r) - cr) +
                          (static_cast<double>(c) - cc) * (static_cast<double>(c) - cc);
        img(r, c) += amp * std::exp(-d2 / (2.0 * radius * radius));
      }
    }
  }
  // Thin bars: detail below any realistic diffraction limit.
  for (Index c = cols / 8; c < cols - cols / 8; c += std::max<Index>(2, cols / 12)) {
    for (Index r = rows / 3; r < 2 * rows / 3; ++r) img(r, c) += 60.0;
  }
  return img.cwiseMax(0.0).cwiseMin(255.0);
}

NoiseSweepReport noise_sweep(const NoiseSweepConfig& config) {
  NoiseSweepReport report;
  report.config = config;
  std::vector<double> levels = config.psnr_db;
  std::sort(levels.begin(), levels.end());
  levels.push_back(std::numeric_limits<double>::infinity());

  for (Domain domain : config.domains) {
    std::vector<NoisePoint> points;
    for (double psnr : levels) {
      TableProtocol p = config.protocol;
      p.sizes = {config.roi_size};
      p.psnr_db = psnr;
      p.run_alternate = false;
      const ExperimentReport r = run_table_experiment(domain, p);

      NoisePoint point;
      point.domain = domain;
      point.psnr_db = psnr;
      point.ae = r.summaries.front().ae;
      double mean_pixel = 0.0;
      for (const auto& t : r.trials) mean_pixel += t.mean_pixel;
      mean_pixel /= static_cast<double>(r.trials.size());
      point.threshold = config.acceptable_fraction * mean_pixel;
      point.acceptable = point.ae.count > 0 && point.ae.mean <= point.threshold;
      points.push_back(point);
    }

    NoiseCrossing crossing;
    crossing.domain = domain;
    for (std::size_t i = points.size(); i-- > 0;) {
      if (!points[i].acceptable) break;
      if (std::isfinite(points[i].psnr_db)) {
        crossing.found = true;
        crossing.psnr_db = points[i].psnr_db;
      }
    }
    report.crossings.push_back(crossing);
    report.points.insert(report.points.end(), points.begin(), points.end());
  }
  return report;
}

}  // namespace isolight
