#include "sclab/sphere_basis.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sclab/coverage.hpp"
#include "sclab/csv.hpp"
#include "sclab/quadrature.hpp"
#include "sclab/special.hpp"

namespace sclab::sphere {

namespace {
constexpr double kBig = 0x1p300;
constexpr double kTiny = 0x1p-300;
constexpr int kBigExp = 300;
}  // namespace

double SphereGrid::phi(int k) const { return 2.0 * std::numbers::pi * k / n_phi; }
double SphereGrid::phi_weight() const { return 2.0 * std::numbers::pi / n_phi; }

SphereGrid build_grid(int n_theta, int n_phi) {
    SCLAB_TOUCH("sphere_basis.build_grid");
    if (n_theta < 2) throw std::invalid_argument("build_grid: n_theta must be >= 2");
    if (n_phi < 1) throw std::invalid_argument("build_grid: n_phi must be >= 1");
    const GaussRule g = gauss_legendre(n_theta);
    SphereGrid grid;
    grid.theta_nodes = g.theta;
    grid.theta_weights = g.w;
    grid.n_phi = n_phi;
    grid.degree = 2 * n_theta - 1;
    return grid;
}

void legendre_column(int m, int lmax, double x, double s, double* out) {
    if (m < 0 || lmax < m) throw std::invalid_argument("legendre_column: need 0 <= m <= lmax");
    // Pbar_m^m with a separate binary exponent
    double p = 1.0 / std::sqrt(4.0 * std::numbers::pi);
    int e = 0;
    for (int k = 1; k <= m; ++k) {
        p *= -s * std::sqrt((2.0 * k + 1.0) / (2.0 * k));
        if (p != 0.0 && std::abs(p) < kTiny) {
            p *= kBig;
            e -= kBigExp;
        }
    }
    out[0] = std::ldexp(p, e);
    if (lmax == m) return;
    double prev = p;
    double cur = x * std::sqrt(2.0 * m + 3.0) * p;
    out[1] = std::ldexp(cur, e);
    double a_prev = std::sqrt(2.0 * m + 3.0);
    for (int l = m + 2; l <= lmax; ++l) {
        const double ll = static_cast<double>(l);
        const double a = std::sqrt((4.0 * ll * ll - 1.0) / ((ll - m) * (ll + m)));
        const double next = a * (x * cur - prev / a_prev);
        prev = cur;
        cur = next;
        a_prev = a;
        if (e < 0 && std::abs(cur) > kBig) {
            cur *= kTiny;
            prev *= kTiny;
            e += kBigExp;
        }
        out[l - m] = std::ldexp(cur, e);
    }
}

double normalized_legendre(int ell, int m, double x) {
    if (m < 0 || m > ell) throw std::invalid_argument("normalized_legendre: need 0 <= m <= ell");
    std::vector<double> col(ell - m + 1);
    legendre_column(m, ell, x, std::sqrt(std::max(0.0, (1.0 - x) * (1.0 + x))), col.data());
    return col.back();
}

double g_value(int ell, int m, double theta) {
    std::vector<double> col(ell - m + 1);
    legendre_column(m, ell, std::cos(theta), std::abs(std::sin(theta)), col.data());
    return col.back();
}

double v_value(int ell, int m, double theta) {
    if (std::abs(theta) >= std::numbers::pi / 2)
        throw std::domain_error("v_value: |theta| must be < pi/2");
    std::vector<double> col(ell - m + 1);
    const double c = std::cos(theta);
    legendre_column(m, ell, std::sin(theta), c, col.data());
    return std::sqrt(c) * col.back();
}

RadialTable legendre_band(int ell, int m_lo, int m_hi, const std::vector<double>& thetas) {
    SCLAB_TOUCH("sphere_basis.legendre_band");
    if (m_lo < 0 || m_lo > m_hi) throw std::invalid_argument("legendre_band: need 0 <= m_lo <= m_hi");
    if (m_hi > ell) throw std::invalid_argument("legendre_band: m_hi exceeds ell");
    for (double t : thetas)
        if (!(std::abs(t) < std::numbers::pi / 2))
            throw std::domain_error("legendre_band: nodes must lie strictly inside (-pi/2, pi/2)");
    RadialTable t;
    t.ell = ell;
    t.m_lo = m_lo;
    t.m_hi = m_hi;
    t.thetas = thetas;
    const int nm = m_hi - m_lo + 1;
    const int nt = static_cast<int>(thetas.size());
    t.values_v.resize(nm, nt);
    t.values_g.resize(nm, nt);
    std::vector<double> col(ell + 1);
    for (int j = 0; j < nt; ++j) {
        const double c = std::cos(thetas[j]);
        const double x = std::sin(thetas[j]);
        const double sc = std::sqrt(c);
        for (int m = m_lo; m <= m_hi; ++m) {
            legendre_column(m, ell, x, c, col.data());
            const double g = col[ell - m];
            t.values_g(m - m_lo, j) = g;
            t.values_v(m - m_lo, j) = sc * g;
        }
    }
    return t;
}

Eigen::MatrixXd g_band(int ell, int m_lo, int m_hi, const std::vector<double>& polar) {
    if (m_lo < 0 || m_lo > m_hi || m_hi > ell) throw std::invalid_argument("g_band: bad m range");
    Eigen::MatrixXd out(m_hi - m_lo + 1, polar.size());
    std::vector<double> col(ell + 1);
    for (std::size_t j = 0; j < polar.size(); ++j) {
        const double x = std::cos(polar[j]);
        const double s = std::abs(std::sin(polar[j]));
        for (int m = m_lo; m <= m_hi; ++m) {
            legendre_column(m, ell, x, s, col.data());
            out(m - m_lo, j) = col[ell - m];
        }
    }
    return out;
}

LegendreAtZero legendre_at_zero(int ell, int m) {
    SCLAB_TOUCH("sphere_basis.legendre_at_zero");
    if (m < 0 || m > ell) throw std::invalid_argument("legendre_at_zero: need 0 <= m <= ell");
    LegendreAtZero r;
    const double log_sqrt_pi = 0.5 * std::log(std::numbers::pi);
    // Normalized values: after the duplication formula the normalizer and the
    // closed form collapse to ratios Gamma(k + 1/2) / Gamma(k + c) of nearby
    // arguments, which keeps the log-gamma cancellation small.
    const double pref = 0.5 * std::log((2.0 * ell + 1.0) / (4.0 * std::numbers::pi * std::numbers::pi));
    if ((ell + m) % 2 == 0) {
        const double a = (ell + m) / 2, b = (ell - m) / 2;
        r.log_abs = m * std::log(2.0) - log_sqrt_pi + lgamma_lanczos(a + 0.5) - lgamma_lanczos(b + 1.0);
        r.sign = (((ell + m) / 2) % 2 == 0) ? 1 : -1;
        r.value = r.sign * std::exp(r.log_abs);
        const double log_norm_val = pref + 0.5 * (lgamma_lanczos(a + 0.5) - lgamma_lanczos(a + 1.0) +
                                                  lgamma_lanczos(b + 0.5) - lgamma_lanczos(b + 1.0));
        r.normalized_value = r.sign * std::exp(log_norm_val);
    } else {
        r.value_is_zero = true;
        const double a = (ell + m + 1) / 2, b = (ell - m + 1) / 2;
        r.log_abs = (m + 1) * std::log(2.0) - log_sqrt_pi + lgamma_lanczos(a + 0.5) - lgamma_lanczos(b);
        r.sign = (((ell + m - 1) / 2) % 2 == 0) ? 1 : -1;
        r.derivative = r.sign * std::exp(r.log_abs);
        const double log_norm_der = pref + std::log(2.0) +
                                    0.5 * (lgamma_lanczos(a + 0.5) - lgamma_lanczos(a) +
                                           lgamma_lanczos(b + 0.5) - lgamma_lanczos(b));
        r.normalized_derivative = r.sign * std::exp(log_norm_der);
    }
    return r;
}

std::pair<double, double> legendre_at_zero_recurrence(int ell, int m) {
    if (m < 0 || m > ell) throw std::invalid_argument("legendre_at_zero_recurrence: bad (l, m)");
    std::vector<double> col(ell - m + 1);
    legendre_column(m, ell, 0.0, 1.0, col.data());
    const double value = col.back();
    double deriv = 0.0;
    if (ell > m) {
        const double l = ell;
        deriv = std::sqrt((2.0 * l + 1.0) * (l - m) * (l + m) / (2.0 * l - 1.0)) * col[ell - m - 1];
    }
    return {value, deriv};
}

long long weyl_count(double lambda) {
    SCLAB_TOUCH("sphere_basis.weyl_count");
    if (!(lambda >= 0.0)) throw std::invalid_argument("weyl_count: lambda must be >= 0");
    const double lam2 = lambda * lambda;
    if (!(lam2 > 0.0)) return 0;
    long long L = static_cast<long long>(std::floor(std::sqrt(lam2 + 0.25) - 0.5));
    while (L >= 0 && static_cast<double>(L) * (L + 1) >= lam2) --L;
    while (static_cast<double>(L + 1) * (L + 2) < lam2) ++L;
    return (L + 1) * (L + 1);
}

ClusterRank cluster_rank(double lambda) {
    SCLAB_TOUCH("sphere_basis.cluster_rank");
    if (!(lambda >= 1.0)) throw std::invalid_argument("cluster_rank: lambda must be >= 1");
    ClusterRank r;
    const double lo = lambda * lambda;
    const double hi = (lambda + 1.0) * (lambda + 1.0);
    int l = std::max(0, static_cast<int>(std::floor(lambda)) - 1);
    while (static_cast<double>(l) * (l + 1) < hi) {
        if (static_cast<double>(l) * (l + 1) >= lo) {
            r.ells.push_back(l);
            r.rank += 2 * l + 1;
        }
        ++l;
    }
    return r;
}

std::string radial_table_csv(const RadialTable& t) {
    csv::Writer w({"m", "theta", "v", "g"});
    for (int i = 0; i < t.rows(); ++i)
        for (std::size_t j = 0; j < t.thetas.size(); ++j)
            w.row({std::to_string(t.m_lo + i), csv::num(t.thetas[j]), csv::num(t.values_v(i, j)),
                   csv::num(t.values_g(i, j))});
    return w.str();
}

}  // namespace sclab::sphere
