#pragma once

#include <cmath>
#include <cstdint>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "isolight/forward.hpp"
#include "isolight/linalg.hpp"
#include "isolight/metrics.hpp"

namespace isolight {

enum class Domain { spatial, frequency };

std::string_view to_string(Domain domain);
Domain parse_domain(std::string_view name);

/// Deterministic seed for one unit of work, mixed from the root seed and
/// the work coordinates (splitmix64 finalizer). Independent of run order.
std::uint64_t derive_seed(std::uint64_t root, std::uint64_t a, std::uint64_t b = 0,
                          std::uint64_t c = 0);

/// Estimated K x L ROI centred on the observed blob: intensity-weighted
/// centroid of the cells at or above half the maximum, rounded to the
/// nearest cell and clamped so the ROI fits. Throws NoSignalError when the
/// image has no positive cell.
RoiSpec locate_roi(const ImageGrid& observed, Index k_rows, Index l_cols);

/// Parameters of the size-sweep experiment.
struct TableProtocol {
  /// Ideal-image field; also the frequency-domain DFT field.
  Index field_rows = 768;
  Index field_cols = 768;
  double cutoff_radius = 6.0;
  /// Square grid on which the PSF's low-pass OTF is defined, and its crop.
  Index psf_field = 501;
  Index psf_crop = 501;
  std::vector<Index> sizes = default_sizes();
  Index trials = 20;
  std::uint64_t root_seed = 20190401;
  SolveMethod method = SolveMethod::direct;
  /// Also solve each trial with the alternate route: least squares with the
  /// extra observation ring (spatial) or the stacked real system (frequency).
  bool run_alternate = true;
  double psnr_db = std::numeric_limits<double>::infinity();
  /// Pixels are drawn uniformly from [0, pixel_max).
  double pixel_max = 256.0;

  static std::vector<Index> default_sizes();

  OtfSpec psf_otf() const { return {psf_field, psf_field, cutoff_radius, 1.0}; }

  /// Passband radius used for a K x L frequency-domain trial: wide enough
  /// for the K x L block at zero frequency, never below cutoff_radius.
  double effective_cutoff(Index k_rows, Index l_cols) const;

  OtfSpec field_otf(Index k_rows, Index l_cols) const {
    return {field_rows, field_cols, effective_cutoff(k_rows, l_cols), 1.0};
  }

  /// Throws ParameterError for values outside the modules' preconditions.
  void validate() const;
};

struct TrialResult {
  Domain domain = Domain::spatial;
  Index roi_size = 0;
  Index trial = 0;
  std::uint64_t seed = 0;
  /// Averaged error of the recovered pixels.
  double ae = std::numeric_limits<double>::quiet_NaN();
  /// Averaged difference evaluated with the ideal pixels.
  double ad = std::numeric_limits<double>::quiet_NaN();
  double condition = std::numeric_limits<double>::quiet_NaN();
  double residual = std::numeric_limits<double>::quiet_NaN();
  double ae_alternate = std::numeric_limits<double>::quiet_NaN();
  SolveMethod method_used = SolveMethod::direct;
  double mean_pixel = 0.0;
  bool failed = false;
  std::string error;
};

struct SizeSummary {
  Index roi_size = 0;
  MeanStd ae;
  MeanStd ad;
  MeanStd ae_alternate;
  /// Median over trials; infinite once the system is numerically singular.
  double condition = std::numeric_limits<double>::quiet_NaN();
  double effective_cutoff = 0.0;
  Index failures = 0;
};

struct ExperimentReport {
  Domain domain = Domain::spatial;
  TableProtocol protocol;
  std::vector<TrialResult> trials;
  std::vector<SizeSummary> summaries;

  const SizeSummary& summary(Index roi_size) const;
};

/// Per-size aggregates of trial rows, in order of first appearance.
std::vector<SizeSummary> summarize(const std::vector<TrialResult>& trials,
                                   const TableProtocol& protocol, Domain domain);

/// For every size and trial: random ROI pixels at the field centre, simulated
/// observation, recovery, AE and AD. Solver failures become failed rows.
ExperimentReport run_table_experiment(Domain domain, const TableProtocol& protocol);

/// Single trial of the protocol, identical to the corresponding report row.
TrialResult run_trial(Domain domain, const TableProtocol& protocol, Index roi_size, Index trial);

/// AD of one random ROI without forming the system matrix; for ROIs whose
/// dense system would not fit in memory.
double ad_spot_check(Domain domain, const TableProtocol& protocol, Index roi_size,
                     std::uint64_t seed);

struct ScanOptions {
  Domain domain = Domain::spatial;
  SolveMethod method = SolveMethod::direct;
  /// Frequency domain only: passband radius on the sample's own field.
  double cutoff_radius = 6.0;
};

/// Scan-and-stitch: each tile is lit alone (everything else dark), observed,
/// recovered and written into the mosaic. Spatial tiles are observed on a
/// dark field of at least the PSF crop size; frequency tiles on the sample's
/// own field with a passband of options.cutoff_radius.
ImageGrid scan_reconstruct(const ImageGrid& sample, Index tile_rows, Index tile_cols,
                           const PsfKernel& psf, const ScanOptions& options = {});

/// Mean absolute error divided by the mean sample value.
double relative_scan_error(const ImageGrid& recovered, const ImageGrid& sample);

/// Synthetic test scene with blobs, bars and a ramp; values in [0, 256).
ImageGrid synthetic_sample(Index rows, Index cols, std::uint64_t seed);

struct NoiseSweepConfig {
  TableProtocol protocol;
  Index roi_size = 3;
  std::vector<double> psnr_db = {40, 80, 120, 160, 200, 240, 280, 320};
  /// AE is acceptable at or below this fraction of the mean ideal pixel.
  double acceptable_fraction = 0.01;
  std::vector<Domain> domains = {Domain::spatial, Domain::frequency};
};

struct NoisePoint {
  Domain domain = Domain::spatial;
  /// Infinity for the noiseless reference.
  double psnr_db = 0.0;
  MeanStd ae;
  double threshold = 0.0;
  bool acceptable = false;
};

struct NoiseCrossing {
  Domain domain = Domain::spatial;
  bool found = false;
  /// Lowest tested PSNR from which every higher PSNR is acceptable.
  double psnr_db = std::numeric_limits<double>::quiet_NaN();
};

struct NoiseSweepReport {
  NoiseSweepConfig config;
  std::vector<NoisePoint> points;
  std::vector<NoiseCrossing> crossings;
};

/// Peak-to-sigma amplitude ratio for a PSNR in dB, and back.
inline double psnr_ratio(double psnr_db) { return std::pow(10.0, psnr_db / 20.0); }
inline double psnr_db_from_ratio(double ratio) { return 20.0 * std::log10(ratio); }

/// Runs the table protocol at one ROI size for each PSNR (plus the noiseless
/// reference) and locates the acceptability crossing per domain.
NoiseSweepReport noise_sweep(const NoiseSweepConfig& config);

}  // namespace isolight
