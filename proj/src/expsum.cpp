#include "sclab/expsum.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "sclab/coverage.hpp"

namespace sclab::expsum {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

SequenceCheck validate(const PhaseSequence& seq) {
    SequenceCheck c;
    if (!(seq.eps > 0.0 && seq.eps <= std::numbers::pi)) {
        c.reason = "eps must lie in (0, pi]";
        return c;
    }
    const std::size_t n = seq.phases.size();
    if (n < 2) {
        c.valid = true;
        return c;
    }
    std::vector<double> h(n - 1);
    for (std::size_t k = 1; k < n; ++k) h[k - 1] = seq.phases[k] - seq.phases[k - 1];
    c.min_increment = *std::min_element(h.begin(), h.end());
    c.max_increment = *std::max_element(h.begin(), h.end());
    // increments are differences of rounded phases
    double scale = 0.0;
    for (double p : seq.phases) scale = std::max(scale, std::abs(p));
    const double slack = 8.0 * std::numeric_limits<double>::epsilon() * std::max(1.0, scale);
    if (c.min_increment < seq.eps - slack || c.max_increment > kTwoPi - seq.eps + slack) {
        c.reason = "increment outside [eps, 2pi - eps]";
        return c;
    }
    bool up = true, down = true;
    for (std::size_t k = 1; k < h.size(); ++k) {
        if (h[k] < h[k - 1] - slack) up = false;
        if (h[k] > h[k - 1] + slack) down = false;
    }
    if (!up && !down) {
        c.reason = "increments are not monotone";
        return c;
    }
    c.direction = up && down ? Direction::Constant : (down ? Direction::Nonincreasing : Direction::Nondecreasing);
    c.valid = true;
    return c;
}

double kuzmin_landau_bound(double eps) {
    SCLAB_TOUCH("expsum.kuzmin_landau_bound");
    if (!(eps > 0.0 && eps <= std::numbers::pi))
        throw std::invalid_argument("kuzmin_landau_bound: eps must lie in (0, pi]");
    return 1.0 / std::tan(eps / 4.0);
}

std::complex<double> exp_sum(const PhaseSequence& seq) {
    SCLAB_TOUCH("expsum.exp_sum");
    const auto c = validate(seq);
    if (!c.valid) throw std::invalid_argument(std::string("exp_sum: ") + c.reason);
    std::complex<double> s = 0.0;
    for (double ph : seq.phases) s += std::polar(1.0, ph);
    return s;
}

ClusterPhaseSum cluster_phase_sum(int ell, wkb::CaseTag c, int r, const wkb::WindowParams& w,
                                  double theta, double min_eps) {
    SCLAB_TOUCH("expsum.cluster_phase_sum");
    const auto iv = wkb::wkb_interval(ell, r, c, w);
    if (!(theta > iv.first && theta < iv.second))
        throw std::invalid_argument("cluster_phase_sum: theta outside the interval");
    const auto [lo, hi] = wkb::m_window(ell, r, c);
    ClusterPhaseSum out;
    // Phi_m = 2 S_m + m pi, built from the first action plus stable differences
    const double s_lo = wkb::action_integral(ell, lo, theta);
    std::vector<double> h;
    double phi = 2.0 * s_lo + lo * std::numbers::pi;
    out.sum = std::polar(1.0, phi);
    for (int m = lo + 1; m <= hi; ++m) {
        const double inc = -2.0 * wkb::action_difference(ell, m, theta) + std::numbers::pi;
        h.push_back(inc);
        phi += inc;
        out.sum += std::polar(1.0, phi);
    }
    out.abs = std::abs(out.sum);
    if (h.empty()) {
        out.monotone = out.separated = true;
        out.eps_observed = std::numbers::pi;
        out.bound_holds = out.abs <= 1.0;
        return out;
    }
    out.min_increment = *std::min_element(h.begin(), h.end());
    out.max_increment = *std::max_element(h.begin(), h.end());
    out.monotone = true;
    for (std::size_t k = 1; k < h.size(); ++k)
        if (h[k] > h[k - 1]) out.monotone = false;
    out.eps_observed = std::min({out.min_increment, kTwoPi - out.max_increment, std::numbers::pi});
    out.separated = out.eps_observed >= min_eps;
    out.bound_holds = out.eps_observed > 0.0 && out.abs <= 1.0 / std::tan(out.eps_observed / 4.0);
    return out;
}

}  // namespace sclab::expsum
