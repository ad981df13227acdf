#pragma once

#include <vector>

namespace snowflake {

struct LineFit {
  double slope = 0;
  double intercept = 0;
  double residual = 0;  // root mean square
  int points = 0;
};

// Least squares y = slope * x + intercept. Throws InsufficientData below
// three points.
LineFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace snowflake
