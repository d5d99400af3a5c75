#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "isolight/grid.hpp"

namespace isolight::io {

namespace fs = std::filesystem;

/// Raw matrix file: "rows cols kind\n" then little-endian float64 values in
/// row-major order, complex entries as (re, im) pairs.
void write_raw_real(const fs::path& path, const ImageGrid& grid);
void write_raw_complex(const fs::path& path, const SpectrumGrid& grid);

/// Any real or complex dense expression; the kind follows the scalar type.
template <typename Derived>
void write_raw(const fs::path& path, const Eigen::MatrixBase<Derived>& m) {
  if constexpr (Eigen::NumTraits<typename Derived::Scalar>::IsComplex) {
    write_raw_complex(path, SpectrumGrid(m.template cast<std::complex<double>>()));
  } else {
    write_raw_real(path, ImageGrid(m.template cast<double>()));
  }
}

enum class RawKind { real64, complex64_pairs };

struct RawMatrix {
  RawKind kind = RawKind::real64;
  ImageGrid real;
  SpectrumGrid complex;
};

/// Throws IoError when the file cannot be opened and ParseError (with the
/// byte offset) for a malformed header or a payload of the wrong length.
RawMatrix read_raw(const fs::path& path);
ImageGrid read_raw_real(const fs::path& path);
SpectrumGrid read_raw_complex(const fs::path& path);

/// 16-bit binary graymap, min-max scaled to [0, 65535]. Lossy; for viewing.
void write_pgm(const fs::path& path, const ImageGrid& image);
/// Reads a binary graymap (8 or 16 bit) as raw sample values.
ImageGrid read_pgm(const fs::path& path);

/// Comma-separated table with a header row.
struct Table {
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;

  void add_row(std::vector<std::string> row);
};

/// Shortest text that reads back to the same double; "nan" and "inf" as such.
std::string format_number(double value);

void write_csv(const fs::path& path, const Table& table);
Table read_csv(const fs::path& path);

/// "key = value" lines; '#' starts a comment. Keys are written sorted.
using Manifest = std::map<std::string, std::string>;

void write_manifest(const fs::path& path, const Manifest& manifest);
Manifest read_manifest(const fs::path& path);

/// Creates the directory (and parents) or throws IoError.
void ensure_directory(const fs::path& dir);

}  // namespace isolight::io
