#pragma once

#include <span>

namespace fibspec {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

/// Ordinary least squares y ~ slope * x + intercept. Throws
/// std::invalid_argument for fewer than two points, mismatched sizes or
/// constant x.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace fibspec
