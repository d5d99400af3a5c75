#include "isolight/cli.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <cmath>
#include <ostream>
#include <sstream>

#include "isolight/dft.hpp"
#include "isolight/frequency.hpp"
#include "isolight/spatial.hpp"

namespace isolight::cli {

namespace {

template <typename T>
T parse_number(std::string_view text, std::string_view what) {
  T value{};
  const auto [end, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc() || end != text.data() + text.size()) {
    throw ParameterError("bad " + std::string(what) + " '" + std::string(text) + "'");
  }
  return value;
}

std::vector<std::string_view> split(std::string_view text, char sep) {
  std::vector<std::string_view> parts;
  std::size_t start = 0;
  for (std::size_t i = 0; i <= text.size(); ++i) {
    if (i == text.size() || text[i] == sep) {
      parts.push_back(text.substr(start, i - start));
      start = i + 1;
    }
  }
  return parts;
}

std::complex<double> parse_complex(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() == 1) return {parse_number<double>(parts[0], "complex value"), 0.0};
  if (parts.size() != 2) throw ParameterError("complex value must be 're,im'");
  return {parse_number<double>(parts[0], "real part"), parse_number<double>(parts[1], "imaginary part")};
}

std::string join_sizes(const std::vector<Index>& sizes) {
  std::string out;
  for (std::size_t i = 0; i < sizes.size(); ++i) out += (i ? "," : "") + std::to_string(sizes[i]);
  return out;
}

std::string join_numbers(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) out += (i ? "," : "") + io::format_number(values[i]);
  return out;
}

std::vector<Domain> domains_of(const RunConfig& c) {
  if (c.domain) return {*c.domain};
  return {Domain::spatial, Domain::frequency};
}

std::string join(const std::vector<std::string>& parts) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) out += (i ? "," : "") + parts[i];
  return out;
}

std::string fmt(double v) { return io::format_number(v); }

// ---- commands ----

void cmd_psf(const RunConfig& c, std::ostream& out) {
  const OtfSpec spec{c.effective_psf_field(), c.effective_psf_field(), c.cutoff_radius, 1.0};
  const PsfKernel psf = build_psf(spec, c.psf_crop);
  io::ensure_directory(c.out_dir);
  io::write_raw(c.out_dir / "psf.raw", psf.values());
  io::write_pgm(c.out_dir / "psf.pgm", psf.values());
  io::write_raw(c.out_dir / "otf.raw", build_otf(spec));
  io::write_manifest(c.out_dir / "manifest.txt", c.manifest());
  out << "psf " << psf.values().rows() << "x" << psf.values().cols() << " on " << spec.field_rows
      << "x" << spec.field_cols << " field, cutoff " << fmt(c.cutoff_radius) << "\n"
      << "passband cells = " << passband_count(spec) << "\n"
      << "peak = " << fmt(psf.peak()) << "\n";
}

io::Table trial_table(const ExperimentReport& r) {
  io::Table t;
  t.header = {"domain", "size", "trial", "seed", "ae", "ad", "ae_alternate",
              "condition", "residual", "method_used", "failed", "error"};
  for (const auto& row : r.trials) {
    t.add_row({std::string(to_string(row.domain)), std::to_string(row.roi_size),
               std::to_string(row.trial), std::to_string(row.seed), fmt(row.ae), fmt(row.ad),
               fmt(row.ae_alternate), fmt(row.condition), fmt(row.residual),
               std::string(to_string(row.method_used)), row.failed ? "1" : "0", row.error});
  }
  return t;
}

io::Table summary_table(const ExperimentReport& r, bool ad) {
  io::Table t;
  t.header = {"size", "mean", "std", "count", "failures", "condition", "cutoff"};
  if (!ad) t.header.insert(t.header.begin() + 4, {"alternate_mean", "alternate_std"});
  for (const auto& s : r.summaries) {
    const MeanStd& m = ad ? s.ad : s.ae;
    std::vector<std::string> row = {std::to_string(s.roi_size), fmt(m.mean), fmt(m.stddev),
                                    std::to_string(m.count), std::to_string(s.failures),
                                    fmt(s.condition), fmt(s.effective_cutoff)};
    if (!ad) row.insert(row.begin() + 4, {fmt(s.ae_alternate.mean), fmt(s.ae_alternate.stddev)});
    t.add_row(std::move(row));
  }
  return t;
}

void cmd_table(const RunConfig& c, std::ostream& out) {
  const TableProtocol protocol = c.protocol();
  io::ensure_directory(c.out_dir);
  for (Domain d : domains_of(c)) {
    const ExperimentReport r = run_table_experiment(d, protocol);
    const std::string name(to_string(d));
    io::write_csv(c.out_dir / ("table_" + name + "_ae.csv"), summary_table(r, false));
    io::write_csv(c.out_dir / ("table_" + name + "_ad.csv"), summary_table(r, true));
    io::write_csv(c.out_dir / ("trials_" + name + ".csv"), trial_table(r));
    out << name << " size  AE mean +- std  AD mean +- std\n";
    for (const auto& s : r.summaries) {
      out << name << " " << s.roi_size << "  " << fmt(s.ae.mean) << " +- " << fmt(s.ae.stddev)
          << "  " << fmt(s.ad.mean) << " +- " << fmt(s.ad.stddev);
      if (s.failures) out << "  (" << s.failures << " failed)";
      out << "\n";
    }
  }
  io::write_manifest(c.out_dir / "manifest.txt", c.manifest());
}

void cmd_scan(const RunConfig& c, std::ostream& out) {
  const ImageGrid sample = c.sample_path.empty()
                               ? synthetic_sample(c.field_rows, c.field_cols, c.root_seed)
                               : io::read_raw_real(c.sample_path);
  const OtfSpec spec{c.effective_psf_field(), c.effective_psf_field(), c.cutoff_radius, 1.0};
  const PsfKernel psf = build_psf(spec, c.psf_crop);
  io::ensure_directory(c.out_dir);
  io::write_raw(c.out_dir / "sample.raw", sample);
  io::write_pgm(c.out_dir / "sample.pgm", sample);
  io::write_pgm(c.out_dir / "blurred.pgm", observe_spatial(sample, psf));
  for (Domain d : domains_of(c)) {
    const ImageGrid mosaic =
        scan_reconstruct(sample, c.tile_rows, c.tile_cols, psf, {d, c.method, c.cutoff_radius});
    const std::string name(to_string(d));
    io::write_raw(c.out_dir / ("recovered_" + name + ".raw"), mosaic);
    io::write_pgm(c.out_dir / ("recovered_" + name + ".pgm"), mosaic);
    out << name << " relative error = " << fmt(relative_scan_error(mosaic, sample)) << "\n";
  }
  io::write_manifest(c.out_dir / "manifest.txt", c.manifest());
}

void cmd_noise(const RunConfig& c, std::ostream& out) {
  NoiseSweepConfig sweep;
  sweep.protocol = c.protocol();
  sweep.roi_size = c.noise_roi_size();
  sweep.psnr_db = c.psnr_db;
  sweep.domains = domains_of(c);
  const NoiseSweepReport r = noise_sweep(sweep);

  io::Table t;
  t.header = {"domain", "psnr_db", "psnr_ratio", "ae_mean", "ae_std", "count", "threshold", "acceptable"};
  for (const auto& p : r.points) {
    t.add_row({std::string(to_string(p.domain)), fmt(p.psnr_db), fmt(psnr_ratio(p.psnr_db)),
               fmt(p.ae.mean), fmt(p.ae.stddev), std::to_string(p.ae.count), fmt(p.threshold),
               p.acceptable ? "1" : "0"});
  }
  io::ensure_directory(c.out_dir);
  io::write_csv(c.out_dir / "noise.csv", t);
  io::write_manifest(c.out_dir / "manifest.txt", c.manifest());
  for (const auto& x : r.crossings) {
    out << to_string(x.domain) << " crossing: ";
    if (x.found) {
      out << fmt(x.psnr_db) << " dB (amplitude ratio " << fmt(psnr_ratio(x.psnr_db)) << ")\n";
    } else {
      out << "none within the tested range\n";
    }
  }
  out << "threshold 250 read as dB = amplitude ratio " << fmt(psnr_ratio(250.0))
      << "; read as a ratio = " << fmt(psnr_db_from_ratio(250.0)) << " dB\n";
}

RoiSpec recover_roi(const RunConfig& c, const ImageGrid& image, std::ostream& out) {
  if (c.roi) return *c.roi;
  const Index k = c.sizes.size() == 1 ? c.sizes.front() : 3;
  const RoiSpec roi = locate_roi(image, k, k);
  out << "no --roi given; located " << roi.top << "," << roi.left << "," << roi.k_rows << ","
      << roi.l_cols << "\n";
  return roi;
}

void cmd_recover(const RunConfig& c, std::ostream& out) {
  if (c.observed_path.empty()) throw ParameterError("recover needs --observed");
  const Domain domain = c.domain.value_or(Domain::spatial);
  Recovery rec;
  RoiSpec roi;
  Index rows = 0, cols = 0;
  io::ensure_directory(c.out_dir);
  if (domain == Domain::spatial) {
    const ImageGrid observed = io::read_raw_real(c.observed_path);
    const PsfKernel psf =
        c.psf_path.empty()
            ? build_psf({c.effective_psf_field(), c.effective_psf_field(), c.cutoff_radius, 1.0}, c.psf_crop)
            : PsfKernel::centred(io::read_raw_real(c.psf_path));
    rows = observed.rows();
    cols = observed.cols();
    roi = recover_roi(c, observed, out);
    const auto sys = spatial::build_system(psf, observed, roi);
    if (c.dump_system) {
      io::write_raw(c.out_dir / "a.raw", sys.a_matrix);
      io::write_raw(c.out_dir / "y.raw", sys.rhs);
    }
    rec = spatial::solve_system(sys, c.method);
  } else {
    const SpectrumGrid observed = io::read_raw_complex(c.observed_path);
    rows = observed.rows();
    cols = observed.cols();
    roi = recover_roi(c, dft::image_from_normalized_spectrum(observed), out);
    const OtfSpec spec{rows, cols, c.cutoff_radius, 1.0};
    const auto sys = frequency::build_system(spec, roi, frequency::default_selection(observed, roi));
    if (c.dump_system) {
      io::write_raw(c.out_dir / "a.raw", sys.a_matrix);
      io::write_raw(c.out_dir / "y.raw", sys.rhs);
    }
    rec = frequency::solve_system(sys, c.method);
  }
  if (c.clamp) rec.pixels = clamp_nonnegative(rec.pixels);

  ImageGrid block(roi.k_rows, roi.l_cols);
  for (Index i = 0; i < roi.size(); ++i) block(i / roi.l_cols, i % roi.l_cols) = rec.pixels(i);
  io::write_raw(c.out_dir / "recovered.raw", block);
  io::write_pgm(c.out_dir / "recovered.pgm", block);
  if (c.dump_system) io::write_raw(c.out_dir / "x.raw", rec.pixels);
  io::write_manifest(c.out_dir / "manifest.txt", c.manifest());
  out << "roi = " << roi.top << "," << roi.left << "," << roi.k_rows << "," << roi.l_cols << " on "
      << rows << "x" << cols << "\n"
      << "method = " << to_string(rec.method_used) << "\n"
      << "residual = " << fmt(rec.residual) << "\n"
      << "condition = " << fmt(rec.condition) << "\n"
      << "negative pixels = " << rec.negative_count << "\n";
}

void cmd_two_point(const RunConfig& c, std::ostream& out) {
  const auto& t = c.two_point;
  if (c.domain.value_or(Domain::spatial) == Domain::spatial) {
    const auto s = spatial::solve_two_point_1d(t.peak, t.q_a, t.q_b, t.y_a, t.y_b);
    out << "x_a = " << fmt(s.x_a) << "\nx_b = " << fmt(s.x_b) << "\n";
  } else {
    const auto s = frequency::solve_two_point_1d(t.length, t.a, t.b, t.c, t.d, t.x_c, t.x_d,
                                                 c.imag_tolerance);
    out << "x_a = " << fmt(s.x_a) << "\nx_b = " << fmt(s.x_b) << "\n";
  }
}

}  // namespace

std::string_view to_string(Command command) {
  switch (command) {
    case Command::psf: return "psf";
    case Command::table: return "table";
    case Command::scan: return "scan";
    case Command::noise: return "noise";
    case Command::recover: return "recover";
    case Command::two_point: return "two-point";
  }
  return "?";
}

std::pair<Index, Index> parse_dims(std::string_view text) {
  const auto x = text.find_first_of("xX");
  if (x == std::string_view::npos) throw ParameterError("dimensions must be MxN, got '" + std::string(text) + "'");
  return {parse_number<Index>(text.substr(0, x), "row count"),
          parse_number<Index>(text.substr(x + 1), "column count")};
}

RoiSpec parse_roi(std::string_view text) {
  const auto parts = split(text, ',');
  if (parts.size() != 4) throw ParameterError("ROI must be a,b,K,L, got '" + std::string(text) + "'");
  return {parse_number<Index>(parts[0], "ROI row"), parse_number<Index>(parts[1], "ROI column"),
          parse_number<Index>(parts[2], "ROI rows"), parse_number<Index>(parts[3], "ROI columns")};
}

std::vector<Index> parse_sizes(std::string_view text) {
  std::vector<Index> sizes;
  for (std::string_view part : split(text, ',')) {
    const auto dash = part.find('-');
    if (dash == std::string_view::npos) {
      sizes.push_back(parse_number<Index>(part, "size"));
      continue;
    }
    const auto lo = parse_number<Index>(part.substr(0, dash), "size");
    const auto hi = parse_number<Index>(part.substr(dash + 1), "size");
    if (hi < lo) throw ParameterError("empty size range '" + std::string(part) + "'");
    for (Index k = lo; k <= hi; ++k) sizes.push_back(k);
  }
  return sizes;
}

TableProtocol RunConfig::protocol() const {
  TableProtocol p;
  p.field_rows = field_rows;
  p.field_cols = field_cols;
  p.cutoff_radius = cutoff_radius;
  p.psf_field = effective_psf_field();
  p.psf_crop = psf_crop;
  p.sizes = sizes;
  p.trials = trials;
  p.root_seed = root_seed;
  p.method = method;
  p.run_alternate = alternate;
  return p;
}

void RunConfig::validate() const {
  if (field_rows < 1 || field_cols < 1) throw ParameterError("--field must be positive");
  if (!(cutoff_radius >= 0.0)) throw ParameterError("--cutoff must be nonnegative");
  if (psf_crop < 1 || psf_crop % 2 == 0) throw ParameterError("--psf-crop must be odd and positive");
  if (effective_psf_field() < psf_crop) throw ParameterError("--psf-field smaller than --psf-crop");
  if (trials < 1) throw ParameterError("--trials must be positive");
  if (tile_rows < 1 || tile_cols < 1) throw ParameterError("--tile must be positive");
  if (roi && (roi->k_rows < 1 || roi->l_cols < 1 || roi->top < 0 || roi->left < 0)) {
    throw ParameterError("--roi needs a nonnegative corner and positive extent");
  }
  OtfSpec{effective_psf_field(), effective_psf_field(), cutoff_radius, 1.0}.validate();
  if (command == Command::table) protocol().validate();
  if (command == Command::noise) {
    TableProtocol p = protocol();
    p.sizes = {noise_roi_size()};
    p.validate();
  }
  if (command == Command::scan && domain != Domain::spatial) {
    OtfSpec{field_rows, field_cols, cutoff_radius, 1.0}.validate();
  }
}

io::Manifest RunConfig::manifest() const {
  io::Manifest m;
  m["command"] = std::string(to_string(command));
  m["field"] = std::to_string(field_rows) + "x" + std::to_string(field_cols);
  m["cutoff"] = fmt(cutoff_radius);
  m["psf-crop"] = std::to_string(psf_crop);
  m["psf-field"] = std::to_string(effective_psf_field());
  if (roi) {
    m["roi"] = std::to_string(roi->top) + "," + std::to_string(roi->left) + "," +
               std::to_string(roi->k_rows) + "," + std::to_string(roi->l_cols);
  }
  if (domain) m["domain"] = std::string(isolight::to_string(*domain));
  m["solver"] = std::string(isolight::to_string(method));
  m["trials"] = std::to_string(trials);
  m["seed"] = std::to_string(root_seed);
  m["sizes"] = join_sizes(sizes);
  m["psnr"] = join_numbers(psnr_db);
  m["alternate"] = alternate ? "true" : "false";
  m["tile"] = std::to_string(tile_rows) + "x" + std::to_string(tile_cols);
  if (!sample_path.empty()) m["sample"] = sample_path.string();
  if (!observed_path.empty()) m["observed"] = observed_path.string();
  if (!psf_path.empty()) m["psf"] = psf_path.string();
  if (command == Command::table) {
    // Per-trial seeds are derived, not drawn: derive_seed(seed, size, trial, 1)
    // for the pixels and (..., 2) for the noise.
    m["seed-derivation"] = "splitmix64(seed, size, trial, stream)";
  }
  return m;
}

int exit_code_for(const std::exception& error) {
  if (dynamic_cast<const CLI::Error*>(&error)) return exit_code::config;
  if (dynamic_cast<const ParameterError*>(&error) || dynamic_cast<const BoundsError*>(&error) ||
      dynamic_cast<const ShapeError*>(&error) || dynamic_cast<const InvalidSelectionError*>(&error)) {
    return exit_code::config;
  }
  if (dynamic_cast<const IoError*>(&error) || dynamic_cast<const ParseError*>(&error)) return exit_code::io;
  if (dynamic_cast<const IllConditionedError*>(&error)) return exit_code::singular;
  if (dynamic_cast<const NoSignalError*>(&error)) return exit_code::no_signal;
  return exit_code::failure;
}

void execute(const RunConfig& config, std::ostream& out) {
  config.validate();
  switch (config.command) {
    case Command::psf: return cmd_psf(config, out);
    case Command::table: return cmd_table(config, out);
    case Command::scan: return cmd_scan(config, out);
    case Command::noise: return cmd_noise(config, out);
    case Command::recover: return cmd_recover(config, out);
    case Command::two_point: return cmd_two_point(config, out);
  }
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Isolated-lighting image recovery experiments"};
  app.set_config("--config", "", "key = value file; command-line flags take precedence");
  app.require_subcommand(1);

  std::string field = "768x768", domain, solver = "direct", tile = "3x3";
  // Comma lists arrive split when read from a config file; rejoined below.
  std::vector<std::string> roi, sizes, psnr, x_c{"0"}, x_d{"0"};
  RunConfig c;
  Index psf_field = 0;
  app.add_option("--field", field, "ideal-image field MxN");
  app.add_option("--cutoff", c.cutoff_radius, "passband radius in frequency cells");
  app.add_option("--psf-crop", c.psf_crop, "odd side of the cropped PSF");
  app.add_option("--psf-field", psf_field, "side of the grid the PSF's OTF is defined on (default: crop)");
  app.add_option("--roi", roi, "region of interest a,b,K,L (top, left, rows, cols)")->delimiter(',');
  app.add_option("--domain", domain, "spatial or frequency")->check(CLI::IsMember({"spatial", "frequency"}));
  app.add_option("--solver", solver, "direct, lsq or truncated")
      ->check(CLI::IsMember({"direct", "lsq", "least_squares", "truncated"}));
  app.add_option("--trials", c.trials, "trials per ROI size");
  app.add_option("--seed", c.root_seed, "root seed");
  app.add_option("--sizes", sizes, "ROI sizes, e.g. 2-20 or 2,3,5")->delimiter(',');
  app.add_option("--psnr", psnr, "comma-separated PSNR levels in dB")->delimiter(',');
  app.add_option("--alternate", c.alternate, "also run the alternate (overdetermined) route");
  app.add_option("--out", c.out_dir, "output directory");
  app.add_option("--observed", c.observed_path, "observed image (real raw) or spectrum (complex raw)");
  app.add_option("--psf", c.psf_path, "PSF raw file, odd and centred");
  app.add_flag("--dump-system", c.dump_system, "write A, y and the solution as raw files");
  app.add_flag("--clamp", c.clamp, "clamp recovered pixels at zero");
  app.add_option("--sample", c.sample_path, "sample raw file (default: synthetic)");
  app.add_option("--tile", tile, "scan tile KxL");
  app.add_option("--peak", c.two_point.peak, "two-point: PSF peak p");
  app.add_option("--q-a", c.two_point.q_a, "two-point: weight of x_b in y_a");
  app.add_option("--q-b", c.two_point.q_b, "two-point: weight of x_a in y_b");
  app.add_option("--y-a", c.two_point.y_a, "two-point: observation at a");
  app.add_option("--y-b", c.two_point.y_b, "two-point: observation at b");
  app.add_option("--length", c.two_point.length, "two-point: signal length");
  app.add_option("--a", c.two_point.a, "two-point: first unknown sample");
  app.add_option("--b", c.two_point.b, "two-point: second unknown sample");
  app.add_option("--c", c.two_point.c, "two-point: first frequency");
  app.add_option("--d", c.two_point.d, "two-point: second frequency");
  app.add_option("--x-c", x_c, "two-point: spectrum at c as re,im")->delimiter(',');
  app.add_option("--x-d", x_d, "two-point: spectrum at d as re,im")->delimiter(',');
  app.add_option("--imag-tol", c.imag_tolerance, "two-point: allowed relative imaginary residue");

  const std::pair<const char*, Command> commands[] = {
      {"psf", Command::psf},         {"table", Command::table},     {"scan", Command::scan},
      {"noise", Command::noise},     {"recover", Command::recover}, {"two-point", Command::two_point}};
  const char* help[] = {"build and export the PSF and OTF",
                        "size sweep of AE and AD",
                        "scan-and-stitch reconstruction of a sample",
                        "noise sweep and acceptability crossing",
                        "recover an ROI from an observed image or spectrum",
                        "closed-form two-pixel recovery"};
  std::vector<CLI::App*> subs;
  for (std::size_t i = 0; i < std::size(commands); ++i) {
    subs.push_back(app.add_subcommand(commands[i].first, help[i])->fallthrough());
  }

  try {
    app.parse(argc, argv);
    for (std::size_t i = 0; i < subs.size(); ++i)
      if (subs[i]->parsed()) c.command = commands[i].second;
    std::tie(c.field_rows, c.field_cols) = parse_dims(field);
    std::tie(c.tile_rows, c.tile_cols) = parse_dims(tile);
    c.psf_field = psf_field;
    if (!roi.empty()) c.roi = parse_roi(join(roi));
    if (!domain.empty()) c.domain = parse_domain(domain);
    c.method = parse_solve_method(solver);
    if (!sizes.empty()) c.sizes = parse_sizes(join(sizes));
    if (!psnr.empty()) {
      c.psnr_db.clear();
      for (const auto& part : psnr) c.psnr_db.push_back(parse_number<double>(part, "PSNR"));
    }
    c.two_point.x_c = parse_complex(join(x_c));
    c.two_point.x_d = parse_complex(join(x_d));
    if (c.command == Command::two_point && c.two_point.length == 0 && c.domain == Domain::frequency) {
      throw ParameterError("two-point --domain frequency needs --length");
    }
    execute(c, out);
    return exit_code::ok;
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? exit_code::ok : exit_code::config;
  } catch (const std::exception& e) {
    err << "error: " << e.what();
    if (const auto* ill = dynamic_cast<const IllConditionedError*>(&e)) {
      err << " (condition " << fmt(ill->condition()) << ")";
    }
    err << "\n";
    return exit_code_for(e);
  }
}

}  // namespace isolight::cli
