#pragma once

#include <functional>
#include <vector>

namespace sclab {

struct GaussRule {
    std::vector<double> theta;  // nodes as angles, ascending in (0, pi)
    std::vector<double> x;      // cos(theta), descending
    std::vector<double> w;      // weights for integrals over [-1, 1]
};

// n-point Gauss-Legendre rule; Newton runs in the angle so nodes near
// the endpoints keep full relative accuracy.
GaussRule gauss_legendre(int n);

// Fixed rule on [a, b] split into equal panels.
double composite_gauss(const std::function<double(double)>& f, double a, double b,
                       int panels, int order = 16);

struct IntegralResult {
    double value = 0.0;
    double rel_change = 0.0;  // last doubling step
    int panels = 0;
    bool converged = false;
};

// Doubles the panel count until two successive values agree to rel_tol.
IntegralResult adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol = 1e-12, int start_panels = 1,
                                 int max_panels = 1 << 14, int order = 16);

}  // namespace sclab
