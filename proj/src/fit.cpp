#include "outflow/fit.hpp"

#include <cmath>
#include <stdexcept>

namespace outflow::fit {

LineFit fit_line(std::span<const double> x, std::span<const double> y)
{
    if (x.size() != y.size() || x.size() < 2) {
        throw std::invalid_argument("fit_line needs two equally sized series with at least two points");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0, syy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        sxx += (x[i] - mx) * (x[i] - mx);
        sxy += (x[i] - mx) * (y[i] - my);
        syy += (y[i] - my) * (y[i] - my);
    }
    if (sxx == 0.0) {
        throw std::invalid_argument("fit_line: abscissae are all equal");
    }
    LineFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    f.r2 = syy > 0.0 ? (sxy * sxy) / (sxx * syy) : 1.0;
    f.points = x.size();
    return f;
}

namespace {

template <class Transform>
LineFit fit_log_window(std::span<const double> x, std::span<const double> y, double x_lo, double x_hi,
                       Transform abscissa)
{
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < x.size() && i < y.size(); ++i) {
        if (x[i] < x_lo || x[i] > x_hi || y[i] == 0.0 || !std::isfinite(y[i])) {
            continue;
        }
        xs.push_back(abscissa(x[i]));
        ys.push_back(std::log(std::abs(y[i])));
    }
    return fit_line(xs, ys);
}

} // namespace

LineFit fit_algebraic_decay(std::span<const double> x, std::span<const double> y, double delta, double x_lo,
                            double x_hi)
{
    return fit_log_window(x, y, x_lo, x_hi, [delta](double xi) { return std::log1p(delta * xi); });
}

LineFit fit_exponential_decay(std::span<const double> x, std::span<const double> y, double x_lo, double x_hi)
{
    return fit_log_window(x, y, x_lo, x_hi, [](double xi) { return xi; });
}

} // namespace outflow::fit
