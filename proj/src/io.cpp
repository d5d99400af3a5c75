#include "isolight/io.hpp"

#include <algorithm>
#include <bit>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iterator>
#include <sstream>

#include "isolight/errors.hpp"

namespace isolight::io {

namespace {

constexpr const char* kReal = "real64";
constexpr const char* kComplex = "complex64-pairs";

void put_f64(std::string& out, double v) {
  auto bits = std::bit_cast<std::uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((bits >> (8 * i)) & 0xff));
}

double get_f64(const unsigned char* p) {
  std::uint64_t bits = 0;
  for (int i = 0; i < 8; ++i) bits |= static_cast<std::uint64_t>(p[i]) << (8 * i);
  return std::bit_cast<double>(bits);
}

void write_bytes(const fs::path& path, const std::string& bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write to '" + path.string() + "' failed");
}

std::string read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string header(Index rows, Index cols, const char* kind) {
  return std::to_string(rows) + " " + std::to_string(cols) + " " + kind + "\n";
}

template <typename Derived>
void write_real(const fs::path& path, const Eigen::MatrixBase<Derived>& m) {
  std::string bytes = header(m.rows(), m.cols(), kReal);
  bytes.reserve(bytes.size() + static_cast<std::size_t>(m.size()) * 8);
  for (Index r = 0; r < m.rows(); ++r)
    for (Index c = 0; c < m.cols(); ++c) put_f64(bytes, m(r, c));
  write_bytes(path, bytes);
}

template <typename Derived>
void write_complex(const fs::path& path, const Eigen::MatrixBase<Derived>& m) {
  std::string bytes = header(m.rows(), m.cols(), kComplex);
  bytes.reserve(bytes.size() + static_cast<std::size_t>(m.size()) * 16);
  for (Index r = 0; r < m.rows(); ++r) {
    for (Index c = 0; c < m.cols(); ++c) {
      put_f64(bytes, m(r, c).real());
      put_f64(bytes, m(r, c).imag());
    }
  }
  write_bytes(path, bytes);
}

Index parse_dim(std::string_view token, std::size_t offset) {
  Index value = 0;
  const auto [end, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || end != token.data() + token.size() || value < 0) {
    throw ParseError("bad dimension '" + std::string(token) + "' in raw header", offset);
  }
  return value;
}

}  // namespace

void write_raw_real(const fs::path& path, const ImageGrid& grid) { write_real(path, grid); }
void write_raw_complex(const fs::path& path, const SpectrumGrid& grid) { write_complex(path, grid); }

RawMatrix read_raw(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  const auto newline = bytes.find('\n');
  if (newline == std::string::npos || newline > 256) {
    throw ParseError("raw file '" + path.string() + "' has no header line", std::min<std::size_t>(bytes.size(), 256));
  }

  // Header tokens with their byte offsets.
  std::vector<std::pair<std::string_view, std::size_t>> tokens;
  const std::string_view line(bytes.data(), newline);
  for (std::size_t i = 0; i < line.size();) {
    if (line[i] == ' ') {
      ++i;
      continue;
    }
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ') ++i;
    tokens.emplace_back(line.substr(start, i - start), start);
  }
  if (tokens.size() != 3) throw ParseError("raw header needs 'rows cols kind'", 0);

  RawMatrix out;
  const Index rows = parse_dim(tokens[0].first, tokens[0].second);
  const Index cols = parse_dim(tokens[1].first, tokens[1].second);
  std::size_t width = 0;
  if (tokens[2].first == kReal) {
    out.kind = RawKind::real64;
    width = 8;
  } else if (tokens[2].first == kComplex) {
    out.kind = RawKind::complex64_pairs;
    width = 16;
  } else {
    throw ParseError("unknown raw kind '" + std::string(tokens[2].first) + "'", tokens[2].second);
  }

  const std::size_t payload = bytes.size() - newline - 1;
  const std::size_t expected = static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols) * width;
  if (payload != expected) {
    throw ParseError("raw payload holds " + std::to_string(payload) + " bytes, header implies " +
                         std::to_string(expected),
                     newline + 1 + std::min(payload, expected));
  }

  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + newline + 1;
  if (out.kind == RawKind::real64) {
    out.real.resize(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c, p += 8) out.real(r, c) = get_f64(p);
  } else {
    out.complex.resize(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c, p += 16) out.complex(r, c) = {get_f64(p), get_f64(p + 8)};
  }
  return out;
}

ImageGrid read_raw_real(const fs::path& path) {
  RawMatrix m = read_raw(path);
  if (m.kind != RawKind::real64) throw ParseError("expected a real64 raw file", 0);
  return std::move(m.real);
}

SpectrumGrid read_raw_complex(const fs::path& path) {
  RawMatrix m = read_raw(path);
  if (m.kind == RawKind::real64) return m.real.cast<std::complex<double>>();
  return std::move(m.complex);
}

void write_pgm(const fs::path& path, const ImageGrid& image) {
  std::string bytes = "P5\n" + std::to_string(image.cols()) + " " + std::to_string(image.rows()) + "\n65535\n";
  const double lo = image.size() ? image.minCoeff() : 0.0;
  const double hi = image.size() ? image.maxCoeff() : 0.0;
  const double scale = hi > lo ? 65535.0 / (hi - lo) : 0.0;
  for (Index r = 0; r < image.rows(); ++r) {
    for (Index c = 0; c < image.cols(); ++c) {
      const auto v = static_cast<std::uint16_t>(std::lround((image(r, c) - lo) * scale));
      bytes.push_back(static_cast<char>(v >> 8));
      bytes.push_back(static_cast<char>(v & 0xff));
    }
  }
  write_bytes(path, bytes);
}

ImageGrid read_pgm(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  std::size_t pos = 0;
  auto skip_space = [&] {
    while (pos < bytes.size()) {
      if (bytes[pos] == '#') {
        while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
      } else if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
        ++pos;
      } else {
        break;
      }
    }
  };
  auto number = [&] {
    skip_space();
    Index value = 0;
    const auto [end, ec] = std::from_chars(bytes.data() + pos, bytes.data() + bytes.size(), value);
    if (ec != std::errc() || value <= 0) throw ParseError("bad graymap header field", pos);
    pos = static_cast<std::size_t>(end - bytes.data());
    return value;
  };

  if (bytes.compare(0, 2, "P5") != 0) throw ParseError("not a binary graymap", 0);
  pos = 2;
  const Index cols = number();
  const Index rows = number();
  const Index maxval = number();
  if (maxval > 65535) throw ParseError("graymap maxval above 65535", pos);
  ++pos;  // single whitespace before the raster
  const std::size_t width = maxval > 255 ? 2 : 1;
  const std::size_t expected = static_cast<std::size_t>(rows * cols) * width;
  if (pos > bytes.size() || bytes.size() - pos != expected) {
    throw ParseError("graymap raster has the wrong length", std::min(pos, bytes.size()));
  }
  ImageGrid out(rows, cols);
  const auto* p = reinterpret_cast<const unsigned char*>(bytes.data()) + pos;
  for (Index i = 0; i < rows * cols; ++i, p += width)
    out(i / cols, i % cols) = width == 2 ? static_cast<double>((p[0] << 8) | p[1]) : p[0];
  return out;
}

void Table::add_row(std::vector<std::string> row) {
  if (row.size() != header.size()) throw ShapeError("table row width differs from the header");
  rows.push_back(std::move(row));
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, value);
  return {buf, end};
}

void write_csv(const fs::path& path, const Table& table) {
  std::string out;
  auto line = [&out](const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      if (i) out += ',';
      if (cells[i].find_first_of(",\"\n") != std::string::npos) {
        out += '"';
        for (char ch : cells[i]) out += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        out += '"';
      } else {
        out += cells[i];
      }
    }
    out += '\n';
  };
  line(table.header);
  for (const auto& row : table.rows) line(row);
  write_bytes(path, out);
}

Table read_csv(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  std::vector<std::vector<std::string>> lines;
  std::vector<std::string> row;
  std::string cell;
  bool quoted = false;
  for (std::size_t i = 0; i < bytes.size(); ++i) {
    const char ch = bytes[i];
    if (quoted) {
      if (ch == '"' && i + 1 < bytes.size() && bytes[i + 1] == '"') {
        cell += '"';
        ++i;
      } else if (ch == '"') {
        quoted = false;
      } else {
        cell += ch;
      }
    } else if (ch == '"') {
      quoted = true;
    } else if (ch == ',') {
      row.push_back(std::move(cell));
      cell.clear();
    } else if (ch == '\n') {
      row.push_back(std::move(cell));
      cell.clear();
      lines.push_back(std::move(row));
      row.clear();
    } else if (ch != '\r') {
      cell += ch;
    }
  }
  if (quoted) throw ParseError("unterminated quoted field", bytes.size());
  if (!cell.empty() || !row.empty()) {
    row.push_back(std::move(cell));
    lines.push_back(std::move(row));
  }
  if (lines.empty()) throw ParseError("table has no header row", 0);

  Table table;
  table.header = std::move(lines.front());
  for (std::size_t i = 1; i < lines.size(); ++i) {
    if (lines[i].size() != table.header.size()) {
      throw ParseError("row " + std::to_string(i) + " width differs from the header", 0);
    }
    table.rows.push_back(std::move(lines[i]));
  }
  return table;
}

void write_manifest(const fs::path& path, const Manifest& manifest) {
  std::string out;
  for (const auto& [key, value] : manifest) out += key + " = " + value + "\n";
  write_bytes(path, out);
}

Manifest read_manifest(const fs::path& path) {
  const std::string bytes = read_bytes(path);
  Manifest out;
  std::size_t offset = 0;
  std::istringstream in(bytes);
  for (std::string line; std::getline(in, line); offset += line.size() + 1) {
    auto trim = [](std::string s) {
      const auto first = s.find_first_not_of(" \t\r");
      if (first == std::string::npos) return std::string();
      return s.substr(first, s.find_last_not_of(" \t\r") - first + 1);
    };
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) throw ParseError("expected 'key = value'", offset);
    const std::string key = trim(body.substr(0, eq));
    if (key.empty()) throw ParseError("empty key", offset);
    out[key] = trim(body.substr(eq + 1));
  }
  return out;
}

void ensure_directory(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) {
    throw IoError("cannot create output directory '" + dir.string() + "'");
  }
}

}  // namespace isolight::io
