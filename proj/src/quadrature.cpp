#include "sclab/quadrature.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>
#include <stdexcept>

namespace sclab {

namespace {

// P_n and P_{n-1} at x by the three-term recurrence
void legendre_pair(int n, double x, double& pn, double& pn1) {
    double p0 = 1.0, p1 = x;
    if (n == 0) {
        pn = 1.0;
        pn1 = 0.0;
        return;
    }
    for (int k = 2; k <= n; ++k) {
        const double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    pn = p1;
    pn1 = p0;
}

}  // namespace

GaussRule gauss_legendre(int n) {
    if (n < 1) throw std::invalid_argument("gauss_legendre: n must be >= 1");
    GaussRule r;
    r.theta.resize(n);
    r.x.resize(n);
    r.w.resize(n);
    const int half = (n + 1) / 2;
    for (int k = 1; k <= half; ++k) {
        double th = std::numbers::pi * (k - 0.25) / (n + 0.5);
        double pn = 0, pn1 = 0;
        for (int it = 0; it < 100; ++it) {
            const double x = std::cos(th);
            legendre_pair(n, x, pn, pn1);
            // d/dtheta P_n(cos theta) = n (x P_n - P_{n-1}) / sin theta
            const double s = std::sin(th);
            const double dp = n * (x * pn - pn1) / s;
            const double step = pn / dp;
            th -= step;
            if (std::abs(step) < 1e-16 * std::max(1.0, th)) break;
        }
        const double x = std::cos(th);
        legendre_pair(n, x, pn, pn1);
        const double s = std::sin(th);
        const double d = n * (x * pn - pn1);
        const double w = 2.0 * s * s / (d * d);
        const int i = k - 1, j = n - k;
        r.theta[i] = th;
        r.x[i] = x;
        r.w[i] = w;
        r.theta[j] = std::numbers::pi - th;
        r.x[j] = -x;
        r.w[j] = w;
    }
    if (n % 2 == 1) {
        r.x[half - 1] = 0.0;
        r.theta[half - 1] = std::numbers::pi / 2;
    }
    return r;
}

namespace {
const GaussRule& cached_rule(int order) {
    static std::mutex m;
    static std::map<int, GaussRule> cache;
    std::lock_guard<std::mutex> g(m);
    auto it = cache.find(order);
    if (it == cache.end()) it = cache.emplace(order, gauss_legendre(order)).first;
    return it->second;
}
}  // namespace

double composite_gauss(const std::function<double(double)>& f, double a, double b, int panels,
                       int order) {
    if (panels < 1) throw std::invalid_argument("composite_gauss: panels must be >= 1");
    const GaussRule& g = cached_rule(order);
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int p = 0; p < panels; ++p) {
        const double lo = a + p * h;
        const double mid = lo + 0.5 * h;
        double acc = 0.0;
        for (int i = 0; i < order; ++i) acc += g.w[i] * f(mid + 0.5 * h * g.x[i]);
        total += 0.5 * h * acc;
    }
    return total;
}

IntegralResult adaptive_integral(const std::function<double(double)>& f, double a, double b,
                                 double rel_tol, int start_panels, int max_panels, int order) {
    IntegralResult res;
    if (a == b) {
        res.converged = true;
        res.panels = start_panels;
        return res;
    }
    int panels = std::max(1, start_panels);
    double prev = composite_gauss(f, a, b, panels, order);
    while (panels < max_panels) {
        panels *= 2;
        const double cur = composite_gauss(f, a, b, panels, order);
        const double diff = std::abs(cur - prev);
        res.rel_change = cur == 0.0 ? diff : diff / std::abs(cur);
        prev = cur;
        if (res.rel_change <= rel_tol) {
            res.converged = true;
            break;
        }
    }
    res.value = prev;
    res.panels = panels;
    return res;
}

}  // namespace sclab
