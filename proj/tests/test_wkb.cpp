#include <cmath>
#include <numbers>

#include "doctest.h"
#include "sclab/sphere_basis.hpp"
#include "sclab/wkb.hpp"

using namespace sclab;
using namespace sclab::wkb;
constexpr double kPi = std::numbers::pi;

namespace {

WkbProfile profile(int l, int m, CaseTag c, int samples = 0, bool wrong = false) {
    ProfileRequest req;
    req.ell = l;
    req.m = m;
    req.r = default_r(l);
    req.case_tag = c;
    req.samples = samples;
    req.wrong_parity = wrong;
    return wkb_approximant(req);
}

}  // namespace

TEST_CASE("potential at the centre") {
    CHECK(q_potential(10, 0, 0.0) == doctest::Approx(-110.5).epsilon(1e-15));
    CHECK(q_potential(10, 10, 0.0) == doctest::Approx(-10.5).epsilon(1e-15));
    CHECK(q_prime(10, 4, 0.0) == 0.0);
    // derivatives against centred differences
    const double h = 1e-5, t = 0.3;
    CHECK(q_prime(40, 20, t) ==
          doctest::Approx((q_potential(40, 20, t + h) - q_potential(40, 20, t - h)) / (2 * h)).epsilon(1e-7));
    CHECK(q_second(40, 20, t) ==
          doctest::Approx((q_prime(40, 20, t + h) - q_prime(40, 20, t - h)) / (2 * h)).epsilon(1e-7));
}

TEST_CASE("equatorial window potential is of size l r") {
    const int l = 400, r = default_r(l);
    CHECK(r == 20);
    const auto [lo, hi] = m_window(l, r, CaseTag::Equatorial);
    CHECK(lo == l - 2 * r + 1);
    CHECK(hi == l - r);
    const double b = wkb_interval(l, r, CaseTag::Equatorial).second;
    CHECK(b == doctest::Approx(0.5 * std::sqrt(20.0 / 400.0)));
    double c1 = 0.0, c2 = 1e300;
    for (int m = lo; m <= hi; ++m)
        for (int j = 0; j <= 100; ++j) {
            const double q = q_potential(l, m, b * j / 100.0 * (1 - 1e-12)) / (l * r);
            CHECK(q < 0.0);
            c1 = std::max(c1, -q);
            c2 = std::min(c2, -q);
        }
    CHECK(c2 > 0.0);
    CHECK(c2 < c1);
}

TEST_CASE("polar window") {
    const auto [lo, hi] = m_window(100, 10, CaseTag::Polar);
    CHECK(lo == 10);
    CHECK(hi == 19);
    CHECK(wkb_interval(100, 10, CaseTag::Polar).second == doctest::Approx(kPi / 2 - 0.8));
    CHECK_THROWS(m_window(10, 6, CaseTag::Polar));
    CHECK(parse_case("inf") == CaseTag::Polar);
    CHECK(case_name(CaseTag::Equatorial) == "2");
    CHECK_THROWS(parse_case("3"));
}

TEST_CASE("action integral") {
    CHECK(action_integral(100, 50, 0.0) == 0.0);
    CHECK(action_integral(100, 50, -0.2) == doctest::Approx(-action_integral(100, 50, 0.2)).epsilon(1e-15));
    // 10^6-point midpoint rule oracle
    const int n = 1000000;
    const double t = 0.2;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::sqrt(-q_potential(100, 50, t * (i + 0.5) / n));
    acc *= t / n;
    CHECK(std::abs(action_integral(100, 50, t) - acc) < 1e-9 * acc);
    // difference of neighbouring actions without cancellation
    CHECK(action_difference(100, 50, t) ==
          doctest::Approx(action_integral(100, 49, t) - action_integral(100, 50, t)).epsilon(1e-9));
    CHECK_THROWS_AS(action_integral(10, 10, 1.2), TurningPointError);
}

TEST_CASE("error functional") {
    CHECK(wkb_error_functional(200, 190, 0.0) == 0.0);
    double prev = 0.0;
    for (int j = 1; j <= 10; ++j) {
        const double t = 0.015 * j;
        const double e = wkb_error_functional(200, 190, t);
        CHECK(e >= prev);
        CHECK(wkb_error_functional(200, 190, -t) == e);
        prev = e;
    }
}

TEST_CASE("profile structure") {
    const auto p = profile(200, 186, CaseTag::Equatorial);
    REQUIRE(p.even());
    double prev_s = -1e300;
    for (std::size_t i = 0; i < p.thetas.size(); ++i) {
        if (p.thetas[i] == 0.0) {
            CHECK(p.y[i] == doctest::Approx(std::pow(-p.Q[i], -0.25)).epsilon(1e-14));
        }
        CHECK(p.Q[i] < 0.0);
        CHECK(p.S[i] > prev_s);
        prev_s = p.S[i];
        CHECK(p.err[i] >= 0.0);
    }
    // symmetric grid: S odd, E even
    const std::size_t n = p.thetas.size();
    for (std::size_t i = 0; i < n / 2; ++i) {
        CHECK(p.thetas[i] == doctest::Approx(-p.thetas[n - 1 - i]));
        CHECK(p.S[i] == doctest::Approx(-p.S[n - 1 - i]).epsilon(1e-12));
        CHECK(p.err[i] == doctest::Approx(p.err[n - 1 - i]).epsilon(1e-12));
    }
}

TEST_CASE("odd parity starts at zero with slope") {
    const auto p = profile(201, 186, CaseTag::Equatorial, 401);
    REQUIRE(!p.even());
    CHECK(p.v_exact[200] == 0.0);
    CHECK(p.y[200] == 0.0);
    CHECK(p.c == doctest::Approx(matching_constant(201, 186)));
}

TEST_CASE("approximation quality and envelope") {
    // r = 15 puts the equatorial window at 171..185
    const auto p = profile(200, 185, CaseTag::Equatorial);
    CHECK(p.scaled_deviation() * default_r(200) < 0.1);
    for (int l : {100, 200, 400})
        for (auto c : {CaseTag::Equatorial, CaseTag::Polar}) {
            const auto [lo, hi] = m_window(l, default_r(l), c);
            for (int m : {lo, (lo + hi) / 2, hi}) CHECK(profile(l, m, c).envelope_violations() == 0);
        }
}

TEST_CASE("normalization constants scale like l") {
    for (int l : {100, 400})
        for (auto c : {CaseTag::Equatorial, CaseTag::Polar}) {
            const auto [lo, hi] = m_window(l, default_r(l), c);
            for (int m = lo; m <= hi; ++m) {
                const double k = matching_constant(l, m);
                CHECK(k * k / l > 0.05);
                CHECK(k * k / l < 20.0);
            }
        }
}

TEST_CASE("wrong parity breaks the envelope") {
    CHECK(profile(200, 186, CaseTag::Equatorial, 400, true).envelope_violations() > 0);
    CHECK(profile(201, 186, CaseTag::Equatorial, 400, true).envelope_violations() > 0);
}

TEST_CASE("defect of the approximant is controlled by the error density") {
    // -y'' + Q y against 2 E' |Q|^{1/4}, where E' is the error integrand
    for (int l : {100, 400}) {
        const int r = default_r(l);
        const int m = l - r - 2;
        const double b = wkb_interval(l, r, CaseTag::Equatorial).second;
        const double h = 1e-3 * 100.0 / l;
        auto y = [&](double t) { return std::cos(action_integral(l, m, t)) / std::pow(-q_potential(l, m, t), 0.25); };
        for (int j = 1; j < 8; ++j) {
            const double t = b * j / 8.0;
            const double q = q_potential(l, m, t);
            const double defect = -(y(t + h) - 2 * y(t) + y(t - h)) / (h * h) + q * y(t);
            const double qp = q_prime(l, m, t), qpp = q_second(l, m, t);
            const double eprime = std::abs(qpp - 5 * qp * qp / (4 * q)) / (8 * std::pow(-q, 1.5));
            const double bound = 2 * eprime * std::pow(-q, 0.25);
            const double fd = h * h * q * q * std::pow(-q, -0.25) / 6;
            CHECK(std::abs(defect) <= 1.01 * bound + fd);
        }
    }
}

TEST_CASE("profile csv columns") {
    const auto s = profile_csv(profile(100, 86, CaseTag::Equatorial, 5));
    CHECK(s.rfind("theta,Q,S,y,v_exact,envelope\r\n", 0) == 0);
}
