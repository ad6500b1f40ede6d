#pragma once

#include <span>
#include <vector>

namespace outflow::fit {

struct LineFit {
    double slope = 0;
    double intercept = 0;
    double r2 = 0;
    std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept. Needs at least two
/// distinct abscissae.
LineFit fit_line(std::span<const double> x, std::span<const double> y);

/// Slope of log|y| against log(1 + delta x) over x in [x_lo, x_hi], skipping
/// points where |y| is zero.
LineFit fit_algebraic_decay(std::span<const double> x, std::span<const double> y, double delta, double x_lo,
                            double x_hi);

/// Slope of log|y| against x over [x_lo, x_hi]; the decay rate is -slope.
LineFit fit_exponential_decay(std::span<const double> x, std::span<const double> y, double x_lo, double x_hi);

} // namespace outflow::fit
