#pragma once

#include <cstddef>
#include <span>

namespace nhscat {

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double slope_stderr = 0.0;
  double r_squared = 0.0;
  double residual_sum_squares = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = intercept + slope * x. Needs at least 3 points
/// with distinct x. When y is constant, r_squared is reported as 1.
LinearFit fit_line(std::span<const double> x, std::span<const double> y);

/// Two data sets sharing one slope with independent intercepts (one per lead).
struct SharedSlopeFit {
  double slope = 0.0;
  double slope_stderr = 0.0;
  double intercept_a = 0.0;
  double intercept_b = 0.0;
  double r_squared = 0.0;
  std::size_t points = 0;
};

SharedSlopeFit fit_shared_slope(std::span<const double> xa, std::span<const double> ya,
                                std::span<const double> xb, std::span<const double> yb);

}  // namespace nhscat
