#include "qlocate/stats.hpp"

#include <cmath>

namespace qlocate {

Summary summarize_values(const std::vector<double>& values) {
  Summary s;
  s.count = static_cast<int>(values.size());
  if (values.empty()) return s;
  double sum = 0.0;
  s.min = s.max = values[0];
  s.argmin = s.argmax = 0;
  for (size_t i = 0; i < values.size(); ++i) {
    sum += values[i];
    if (values[i] < s.min) {
      s.min = values[i];
      s.argmin = static_cast<int>(i);
    }
    if (values[i] > s.max) {
      s.max = values[i];
      s.argmax = static_cast<int>(i);
    }
  }
  s.mean = sum / s.count;
  double ss = 0.0;
  for (double v : values) ss += (v - s.mean) * (v - s.mean);
  s.sd_of_mean = std::sqrt(ss / s.count) / std::sqrt(static_cast<double>(s.count));
  s.error = 2.0 * s.sd_of_mean;
  return s;
}

}  // namespace qlocate
