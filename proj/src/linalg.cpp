#include "isolight/linalg.hpp"

namespace isolight {

std::string_view to_string(SolveMethod method) {
  switch (method) {
    case SolveMethod::direct:
      return "direct";
    case SolveMethod::least_squares:
      return "lsq";
    case SolveMethod::truncated:
      return "truncated";
  }
  return "unknown";
}

SolveMethod parse_solve_method(std::string_view name) {
  if (name == "direct") return SolveMethod::direct;
  if (name == "lsq" || name == "least_squares") return SolveMethod::least_squares;
  if (name == "truncated") return SolveMethod::truncated;
  throw ParameterError("unknown solver '" + std::string(name) + "'");
}

void summarize_negatives(Recovery& r) {
  r.negative_count = 0;
  r.most_negative = 0.0;
  for (Index i = 0; i < r.pixels.size(); ++i) {
    if (r.pixels(i) < 0.0) {
      ++r.negative_count;
      r.most_negative = std::min(r.most_negative, r.pixels(i));
    }
  }
}

PixelVector clamp_nonnegative(const PixelVector& pixels) { return pixels.cwiseMax(0.0); }

}  // namespace isolight
