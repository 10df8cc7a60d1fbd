#include <cmath>
#include <stdexcept>

#include "sclab/coverage.hpp"
#include "sclab/experiments.hpp"

namespace sclab::lab {

SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y) {
    SCLAB_TOUCH("experiments_cli.fit_slope");
    if (x.size() != y.size()) throw std::invalid_argument("fit_slope: size mismatch");
    if (x.size() < 4) throw std::invalid_argument("fit_slope: need at least 4 points");
    for (std::size_t i = 0; i < x.size(); ++i) {
        if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw std::invalid_argument("fit_slope: values must be positive");
        if (i && !(x[i] > x[i - 1])) throw std::invalid_argument("fit_slope: x must be strictly increasing");
    }
    const double n = static_cast<double>(x.size());
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        mx += std::log(x[i]);
        my += std::log(y[i]);
    }
    mx /= n;
    my /= n;
    double sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double dx = std::log(x[i]) - mx, dy = std::log(y[i]) - my;
        sxx += dx * dx;
        sxy += dx * dy;
    }
    if (!(sxx > 1e-24)) throw std::invalid_argument("fit_slope: degenerate x range");
    SlopeFit f;
    f.slope = sxy / sxx;
    f.intercept = my - f.slope * mx;
    double rss = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double r = std::log(y[i]) - (f.intercept + f.slope * std::log(x[i]));
        rss += r * r;
    }
    f.stderr_ = std::sqrt(rss / (n - 2.0) / sxx);
    return f;
}

}  // namespace sclab::lab
