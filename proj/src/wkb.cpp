#include "sclab/wkb.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

#include "sclab/coverage.hpp"
#include "sclab/csv.hpp"
#include "sclab/quadrature.hpp"
#include "sclab/sphere_basis.hpp"

namespace sclab::wkb {

namespace {
constexpr double kHalfPi = std::numbers::pi / 2;

void check_angle(double theta) {
    if (!(std::abs(theta) < kHalfPi)) throw std::domain_error("wkb: |theta| must be < pi/2");
}

double qv(int ell, int m, double theta) {
    const double c = std::cos(theta);
    return (m * static_cast<double>(m) - 0.25) / (c * c) - 0.25 - ell * (ell + 1.0);
}

// Q is monotone in |theta|, so the sign on [0, theta] is settled by the ends.
void check_no_turning_point(int ell, int m, double theta) {
    check_angle(theta);
    const double q0 = qv(ell, m, 0.0), q1 = qv(ell, m, theta);
    if (q0 >= 0.0 || q1 >= 0.0)
        throw TurningPointError("wkb: Q changes sign on [0, theta] for l=" + std::to_string(ell) +
                                ", m=" + std::to_string(m));
}

double error_integrand(int ell, int m, double t) {
    const double q = qv(ell, m, t);
    const double q1 = q_prime(ell, m, t);
    const double q2 = q_second(ell, m, t);
    const double aq = std::abs(q);
    return std::abs(q2 - 5.0 * q1 * q1 / (4.0 * q)) / (8.0 * aq * std::sqrt(aq));
}
}  // namespace

std::string case_name(CaseTag c) { return c == CaseTag::Equatorial ? "2" : "inf"; }

CaseTag parse_case(const std::string& s) {
    if (s == "2") return CaseTag::Equatorial;
    if (s == "inf" || s == "infinity" || s == "oo") return CaseTag::Polar;
    throw std::invalid_argument("unknown case tag '" + s + "' (expected 2 or inf)");
}

int default_r(int ell, double zeta) {
    return static_cast<int>(std::ceil(std::pow(static_cast<double>(ell), zeta) - 1e-12));
}

std::pair<int, int> m_window(int ell, int r, CaseTag c) {
    if (r < 1 || 2 * r > ell) throw std::invalid_argument("m_window: need 1 <= r <= l/2");
    if (c == CaseTag::Equatorial) return {ell - 2 * r + 1, ell - r};
    return {r, 2 * r - 1};
}

std::pair<double, double> wkb_interval(int ell, int r, CaseTag c, const WindowParams& w) {
    double b;
    if (c == CaseTag::Equatorial)
        b = w.eta2 * std::sqrt(static_cast<double>(r) / ell);
    else
        b = kHalfPi - w.eta1 * static_cast<double>(r) / ell;
    if (!(b > 0.0) || !(b < kHalfPi)) throw std::invalid_argument("wkb_interval: empty interval");
    return {-b, b};
}

double q_potential(int ell, int m, double theta) {
    SCLAB_TOUCH("wkb_engine.q_potential");
    check_angle(theta);
    return qv(ell, m, theta);
}

double q_prime(int, int m, double theta) {
    check_angle(theta);
    const double c = std::cos(theta);
    return (m * static_cast<double>(m) - 0.25) * 2.0 * std::sin(theta) / (c * c * c);
}

double q_second(int, int m, double theta) {
    check_angle(theta);
    const double c = std::cos(theta), s = std::sin(theta);
    const double c2 = c * c;
    return (m * static_cast<double>(m) - 0.25) * (2.0 / c2 + 6.0 * s * s / (c2 * c2));
}

double action_integral(int ell, int m, double theta, int quad_pts) {
    SCLAB_TOUCH("wkb_engine.action_integral");
    if (theta == 0.0) return 0.0;
    check_no_turning_point(ell, m, theta);
    const auto f = [&](double t) { return std::sqrt(-qv(ell, m, t)); };
    const auto r = adaptive_integral(f, 0.0, std::abs(theta), 1e-13, 1, 1 << 16, quad_pts);
    return theta > 0 ? r.value : -r.value;
}

double action_difference(int ell, int m, double theta, int quad_pts) {
    if (m < 1) throw std::invalid_argument("action_difference: need m >= 1");
    if (theta == 0.0) return 0.0;
    check_no_turning_point(ell, m - 1, theta);
    check_no_turning_point(ell, m, theta);
    const auto f = [&](double t) {
        const double c = std::cos(t);
        return (2.0 * m - 1.0) /
               (c * c * (std::sqrt(-qv(ell, m - 1, t)) + std::sqrt(-qv(ell, m, t))));
    };
    const auto r = adaptive_integral(f, 0.0, std::abs(theta), 1e-13, 1, 1 << 16, quad_pts);
    return theta > 0 ? r.value : -r.value;
}

double wkb_error_functional(int ell, int m, double theta, int quad_pts) {
    SCLAB_TOUCH("wkb_engine.wkb_error_functional");
    if (theta == 0.0) return 0.0;
    check_no_turning_point(ell, m, theta);
    const auto f = [&](double t) { return error_integrand(ell, m, t); };
    return adaptive_integral(f, 0.0, std::abs(theta), 1e-12, 1, 1 << 16, quad_pts).value;
}

double matching_constant(int ell, int m, bool wrong_parity) {
    const double q0 = std::abs(qv(ell, m, 0.0));
    if (!(q0 > 0.0)) throw std::domain_error("matching_constant: Q(0) vanishes");
    const auto z = sphere::legendre_at_zero(ell, m);
    bool even = (ell + m) % 2 == 0;
    if (wrong_parity) even = !even;
    return even ? z.normalized_value * std::pow(q0, 0.25) : z.normalized_derivative / std::pow(q0, 0.25);
}

WkbProfile wkb_approximant(const ProfileRequest& req) {
    SCLAB_TOUCH("wkb_engine.wkb_approximant");
    WkbProfile p;
    p.ell = req.ell;
    p.m = req.m;
    p.case_tag = req.case_tag;
    p.eta1 = req.window.eta1;
    p.eta2 = req.window.eta2;
    if (req.m < 0 || req.m > req.ell) throw std::invalid_argument("wkb_approximant: need 0 <= m <= l");
    p.interval = wkb_interval(req.ell, req.r, req.case_tag, req.window);
    const double b = p.interval.second;
    check_no_turning_point(req.ell, req.m, b);

    if (!req.thetas.empty()) {
        p.thetas = req.thetas;
        for (double t : p.thetas)
            if (std::abs(t) > b) throw std::invalid_argument("wkb_approximant: sample outside the interval");
    } else {
        int n = req.samples;
        if (n <= 0) {
            const double k0 = std::sqrt(std::abs(qv(req.ell, req.m, 0.0)));
            n = std::max(64, static_cast<int>(std::ceil(12.0 * 2.0 * b * k0 / (2.0 * std::numbers::pi))));
        }
        p.thetas.resize(n);
        for (int j = 0; j < n; ++j) p.thetas[j] = -b + (j + 0.5) * (2.0 * b / n);
    }
    const std::size_t n = p.thetas.size();

    // cumulative S and E outward from 0 over the sorted |theta|
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t c) { return std::abs(p.thetas[a]) < std::abs(p.thetas[c]); });
    std::vector<double> s_abs(n), e_abs(n);
    const auto fs = [&](double t) { return std::sqrt(-qv(req.ell, req.m, t)); };
    const auto fe = [&](double t) { return error_integrand(req.ell, req.m, t); };
    double last = 0.0, s_acc = 0.0, e_acc = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double a = std::abs(p.thetas[order[k]]);
        if (a > last) {
            s_acc += adaptive_integral(fs, last, a, 1e-14, 1, 1 << 12, 16).value;
            e_acc += adaptive_integral(fe, last, a, 1e-12, 1, 1 << 12, 16).value;
            last = a;
        }
        s_abs[order[k]] = s_acc;
        e_abs[order[k]] = e_acc;
    }

    const bool even = p.even() != req.wrong_parity;
    p.c = matching_constant(req.ell, req.m, false);
    const std::vector<double> thetas_v = p.thetas;
    const auto table = sphere::legendre_band(req.ell, req.m, req.m, thetas_v);
    p.Q.resize(n);
    p.S.resize(n);
    p.y.resize(n);
    p.err.resize(n);
    p.v_exact.resize(n);
    p.envelope.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double t = p.thetas[j];
        const double q = qv(req.ell, req.m, t);
        const double s = t >= 0 ? s_abs[j] : -s_abs[j];
        const double amp = std::pow(std::abs(q), -0.25);
        p.Q[j] = q;
        p.S[j] = s;
        p.y[j] = (even ? std::cos(s) : std::sin(s)) * amp;
        p.err[j] = e_abs[j];
        p.v_exact[j] = table.values_v(0, j);
        p.envelope[j] = 2.0 * std::expm1(2.0 * e_abs[j]) * std::abs(p.c) * amp;
    }
    return p;
}

double WkbProfile::scaled_deviation() const {
    double worst = 0.0;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        const double d = std::abs(v_exact[j] - c * y[j]) * std::pow(std::abs(Q[j]), 0.25) / std::abs(c);
        worst = std::max(worst, d);
    }
    return worst;
}

int WkbProfile::envelope_violations() const {
    int bad = 0;
    for (std::size_t j = 0; j < thetas.size(); ++j) {
        // rounding allowance relative to the local amplitude
        const double floor = 1e-10 * std::abs(c) * std::pow(std::abs(Q[j]), -0.25);
        if (std::abs(v_exact[j] - c * y[j]) > envelope[j] + floor) ++bad;
    }
    return bad;
}

std::string profile_csv(const WkbProfile& p) {
    csv::Writer w({"theta", "Q", "S", "y", "v_exact", "envelope"});
    for (std::size_t j = 0; j < p.thetas.size(); ++j)
        w.row({csv::num(p.thetas[j]), csv::num(p.Q[j]), csv::num(p.S[j]), csv::num(p.y[j]),
               csv::num(p.v_exact[j]), csv::num(p.envelope[j])});
    return w.str();
}

}  // namespace sclab::wkb
