#include "sclab/cluster_density.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sclab/coverage.hpp"

namespace sclab::cluster {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> rho_on(const ClusterSpec& spec, const std::vector<double>& polar) {
    const auto [lo, hi] = spec.window();
    const Eigen::MatrixXd g = sphere::g_band(spec.ell, lo, hi, polar);
    std::vector<double> rho(polar.size(), 0.0);
    for (int i = 0; i < g.rows(); ++i) {
        const double nu = spec.weight(i);
        for (std::size_t j = 0; j < polar.size(); ++j) rho[j] += nu * g(i, j) * g(i, j);
    }
    return rho;
}

double raw_norm(const std::vector<double>& w, const std::vector<double>& rho, double p) {
    if (std::isinf(p)) return *std::max_element(rho.begin(), rho.end());
    const double q = p / 2.0;
    double acc = 0.0;
    for (std::size_t i = 0; i < rho.size(); ++i) acc += w[i] * std::pow(std::max(rho[i], 0.0), q);
    return std::pow(2.0 * kPi * acc, 1.0 / q);
}

// golden-section search for a local max of rho on [a, b]
double refine_max(const ClusterSpec& spec, double a, double b) {
    const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - gr * (b - a), d = a + gr * (b - a);
    double fc = density_at(spec, c), fd = density_at(spec, d);
    for (int it = 0; it < 80 && (b - a) > 1e-14; ++it) {
        if (fc > fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - gr * (b - a);
            fc = density_at(spec, c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + gr * (b - a);
            fd = density_at(spec, d);
        }
    }
    return std::max(fc, fd);
}

// crossing of rho = level between two polar angles by bisection
double crossing(const ClusterSpec& spec, double level, double a, double b) {
    double fa = density_at(spec, a) - level;
    for (int it = 0; it < 60; ++it) {
        const double mid = 0.5 * (a + b);
        const double fm = density_at(spec, mid) - level;
        if ((fm > 0) == (fa > 0)) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    return 0.5 * (a + b);
}

const std::vector<double> kCheckP = {2.0, 4.0, 6.0, 8.0};
}  // namespace

double ClusterSpec::trace() const {
    double t = 0.0;
    for (int j = 0; j < r; ++j) t += weight(j);
    return t;
}

void ClusterSpec::validate() const {
    if (r < 1 || 2 * r > ell) throw std::invalid_argument("ClusterSpec: need 1 <= r <= l/2");
    if (!nu.empty() && static_cast<int>(nu.size()) != r)
        throw std::invalid_argument("ClusterSpec: nu must have r entries");
}

double density_at(const ClusterSpec& spec, double theta) {
    return rho_on(spec, {theta})[0];
}

DensityProfile profile_from_values(const sphere::SphereGrid& grid, std::vector<double> rho) {
    if (rho.size() != grid.theta_nodes.size())
        throw std::invalid_argument("profile_from_values: size mismatch");
    DensityProfile p;
    p.thetas = grid.theta_nodes;
    p.weights = grid.theta_weights;
    p.rho = std::move(rho);
    return p;
}

DensityProfile density(const ClusterSpec& spec, const sphere::SphereGrid& grid, bool check_resolution) {
    SCLAB_TOUCH("cluster_density.density");
    spec.validate();
    DensityProfile p = profile_from_values(grid, rho_on(spec, grid.theta_nodes));
    p.spec = spec;
    if (check_resolution) {
        const auto fine = sphere::build_grid(2 * grid.n_theta(), grid.n_phi);
        const auto rho_f = rho_on(spec, fine.theta_nodes);
        double worst = 0.0;
        for (double q : kCheckP) {
            const double a = raw_norm(p.weights, p.rho, q);
            const double b = raw_norm(fine.theta_weights, rho_f, q);
            worst = std::max(worst, std::abs(a - b) / std::abs(b));
        }
        p.resolution_change = worst;
        p.under_resolved = worst > 1e-6;
    }
    return p;
}

double lp_norm(const DensityProfile& profile, double p) {
    SCLAB_TOUCH("cluster_density.lp_norm");
    if (!(p >= 2.0)) throw std::invalid_argument("lp_norm: need p >= 2");
    if (!std::isinf(p) || !profile.spec) return raw_norm(profile.weights, profile.rho, p);
    const auto& th = profile.thetas;
    const auto it = std::max_element(profile.rho.begin(), profile.rho.end());
    const std::size_t k = static_cast<std::size_t>(it - profile.rho.begin());
    const double a = k == 0 ? 0.5 * th[0] : th[k - 1];
    const double b = k + 1 == th.size() ? 0.5 * (th[k] + kPi) : th[k + 1];
    return std::max(*it, refine_max(*profile.spec, a, b));
}

Exponents exponents(double p, int N) {
    SCLAB_TOUCH("cluster_density.exponents");
    if (!(p >= 2.0) || N < 2) throw std::invalid_argument("exponents: need p >= 2, N >= 2");
    Exponents e;
    if (std::isinf(p)) {
        e.s = (N - 1) / 2.0;
        e.alpha = kInf;
        return e;
    }
    if (p >= breakpoint(N)) {
        e.s = N * (0.5 - 1.0 / p) - 0.5;
        e.alpha = p * (N - 1) / (2.0 * N);
    } else {
        e.s = (N - 1) / 2.0 * (0.5 - 1.0 / p);
        e.alpha = 2.0 * p / (p + 2.0);
    }
    return e;
}

double breakpoint(int N) { return 2.0 * (N + 1) / (N - 1); }

Concentration concentration_measure(const DensityProfile& profile, double p) {
    SCLAB_TOUCH("cluster_density.concentration_measure");
    if (!(p > 2.0)) throw std::invalid_argument("concentration_measure: need p > 2");
    const double l1 = raw_norm(profile.weights, profile.rho, 2.0);
    const double lp = lp_norm(profile, p);
    const double level = l1 / (16.0 * kPi);
    Concentration c;
    if (std::isinf(p))
        c.lower_bound = 0.5 * (l1 / lp);
    else
        c.lower_bound = 0.5 * std::pow(p / 8.0, 2.0 / (p - 2.0)) * std::pow(l1 / lp, p / (p - 2.0));
    const auto& th = profile.thetas;
    const auto& rho = profile.rho;
    if (!profile.spec) {
        double acc = 0.0;
        for (std::size_t i = 0; i < rho.size(); ++i)
            if (rho[i] > level) acc += profile.weights[i];
        c.measured = 2.0 * kPi * acc;
    } else {
        // superlevel set as a union of polar bands, ends located by bisection
        std::vector<double> pts{0.0};
        std::vector<bool> above{density_at(*profile.spec, 1e-300) > level};
        for (std::size_t i = 0; i < th.size(); ++i) {
            pts.push_back(th[i]);
            above.push_back(rho[i] > level);
        }
        pts.push_back(kPi);
        above.push_back(density_at(*profile.spec, kPi - 1e-15) > level);
        double acc = 0.0;
        double start = above[0] ? 0.0 : -1.0;
        for (std::size_t i = 1; i < pts.size(); ++i) {
            if (above[i] != above[i - 1]) {
                const double x = crossing(*profile.spec, level, pts[i - 1], pts[i]);
                if (above[i]) {
                    start = x;
                } else {
                    acc += std::cos(start) - std::cos(x);
                    start = -1.0;
                }
            }
        }
        if (start >= 0.0) acc += std::cos(start) - std::cos(kPi);
        c.measured = 2.0 * kPi * acc;
    }
    c.holds = c.measured >= c.lower_bound;
    return c;
}

double heuristic_density(int ell, int a_m, int b_m, double theta) {
    SCLAB_TOUCH("cluster_density.heuristic_density");
    if (a_m < 0 || a_m > b_m || b_m > ell) throw std::invalid_argument("heuristic_density: need 0 <= a <= b <= l");
    const double s = std::sin(theta);
    if (!(s > 0.0)) return 0.0;
    const double ls = ell * s;
    const double hi = std::asin(std::min(1.0, b_m / ls));
    const double lo = std::asin(std::min(1.0, a_m / ls));
    return ell / (2.0 * kPi * kPi) * (hi - lo);
}

double heuristic_density_literal(int ell, int a_m, int b_m, double theta) {
    const double s2 = std::sin(theta) * std::sin(theta);
    const double L = ell * (ell + 1.0);
    const auto part = [&](double m) { return std::sqrt(std::max(0.0, (s2 - m * m / L) / s2)); };
    return ell / (kPi * std::sin(theta)) * (part(b_m) - part(a_m));
}

}  // namespace sclab::cluster
