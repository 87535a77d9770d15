#pragma once

#include <vector>

namespace qlocate {

struct Summary {
  double mean = 0.0;
  double sd_of_mean = 0.0;  ///< population SD / sqrt(count)
  double error = 0.0;       ///< 2 * sd_of_mean
  double min = 0.0;
  double max = 0.0;
  int argmin = -1;
  int argmax = -1;
  int count = 0;
};

Summary summarize_values(const std::vector<double>& values);

}  // namespace qlocate
