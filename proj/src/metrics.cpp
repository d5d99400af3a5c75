#include "isolight/metrics.hpp"

#include <cmath>
#include <limits>

namespace isolight {

MeanStd mean_std(const Eigen::Ref<const Eigen::VectorXd>& values) {
  MeanStd out;
  double sum = 0.0;
  for (Eigen::Index i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values(i))) continue;
    sum += values(i);
    ++out.count;
  }
  if (out.count == 0) {
    out.mean = out.stddev = std::numeric_limits<double>::quiet_NaN();
    return out;
  }
  out.mean = sum / static_cast<double>(out.count);
  if (out.count > 1) {
    double sq = 0.0;
    for (Eigen::Index i = 0; i < values.size(); ++i)
      if (std::isfinite(values(i))) sq += (values(i) - out.mean) * (values(i) - out.mean);
    out.stddev = std::sqrt(sq / static_cast<double>(out.count - 1));
  }
  return out;
}

}  // namespace isolight
