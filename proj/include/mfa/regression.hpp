#pragma once

#include <span>

namespace mfa {

struct LineFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;  // coefficient of determination, clamped to [0, 1]
};

/// Ordinary least squares y = slope*x + intercept. Summation runs in index
/// order, so results do not depend on how the inputs were produced.
/// Throws DegenerateRegression when fewer than two points or zero x variance.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace mfa
