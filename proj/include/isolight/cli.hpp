#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "isolight/io.hpp"
#include "isolight/pipeline.hpp"

namespace isolight::cli {

namespace exit_code {
constexpr int ok = 0;
constexpr int failure = 1;
constexpr int config = 2;
constexpr int io = 3;
constexpr int singular = 4;
constexpr int no_signal = 5;
}  // namespace exit_code

enum class Command { psf, table, scan, noise, recover, two_point };

std::string_view to_string(Command command);

struct RunConfig {
  Command command = Command::psf;
  Index field_rows = 768;
  Index field_cols = 768;
  double cutoff_radius = 6.0;
  Index psf_crop = 501;
  /// Side of the square grid the PSF's OTF lives on; 0 means psf_crop.
  Index psf_field = 0;
  std::optional<RoiSpec> roi;
  /// Unset: both domains where the command supports it.
  std::optional<Domain> domain;
  SolveMethod method = SolveMethod::direct;
  Index trials = 20;
  std::uint64_t root_seed = 20190401;
  std::vector<Index> sizes = TableProtocol::default_sizes();
  std::vector<double> psnr_db = {40, 80, 120, 160, 200, 240, 280, 320};
  bool alternate = true;
  std::filesystem::path out_dir = "out";

  // recover
  std::filesystem::path observed_path;
  std::filesystem::path psf_path;
  bool dump_system = false;
  bool clamp = false;
  // scan
  std::filesystem::path sample_path;
  Index tile_rows = 3;
  Index tile_cols = 3;
  // two-point
  struct TwoPoint {
    double peak = 1.0, q_a = 0.0, q_b = 0.0, y_a = 0.0, y_b = 0.0;
    Index length = 0, a = 0, b = 1, c = 0, d = 1;
    std::complex<double> x_c, x_d;
  } two_point;
  double imag_tolerance = 1e-4;

  Index effective_psf_field() const { return psf_field > 0 ? psf_field : psf_crop; }
  /// Noise sweep ROI side: K of --roi, else 3.
  Index noise_roi_size() const { return roi ? roi->k_rows : 3; }
  TableProtocol protocol() const;
  /// Throws ParameterError for values outside the modules' preconditions.
  void validate() const;
  /// Every parameter as "key = value" pairs, loadable again with --config.
  io::Manifest manifest() const;
};

/// "MxN" -> (M, N).
std::pair<Index, Index> parse_dims(std::string_view text);
/// "a,b,K,L" -> ROI with top-left (a, b).
RoiSpec parse_roi(std::string_view text);
/// "2-20" or "2,3,5" (ranges and lists may be mixed).
std::vector<Index> parse_sizes(std::string_view text);

int exit_code_for(const std::exception& error);

/// Runs a parsed configuration; diagnostics go to out.
void execute(const RunConfig& config, std::ostream& out);

/// Full command line entry point. Returns the process exit code.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace isolight::cli
