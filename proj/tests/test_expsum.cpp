#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include "doctest.h"
#include "sclab/expsum.hpp"
#include "sclab/wkb.hpp"

using namespace sclab;
using namespace sclab::expsum;
constexpr double kPi = std::numbers::pi;

TEST_CASE("kuzmin-landau constant") {
    CHECK(kuzmin_landau_bound(kPi) == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(kuzmin_landau_bound(kPi / 2) == doctest::Approx(1.0 + std::sqrt(2.0)).epsilon(1e-14));
    CHECK(kuzmin_landau_bound(1e-6) * 1e-6 / 4 == doctest::Approx(1.0).epsilon(1e-9));
    CHECK_THROWS(kuzmin_landau_bound(0.0));
    CHECK_THROWS(kuzmin_landau_bound(3.5));
}

TEST_CASE("alternating sequence") {
    PhaseSequence s{{0, kPi, 2 * kPi, 3 * kPi, 4 * kPi, 5 * kPi}, kPi};
    CHECK(validate(s).valid);
    CHECK(std::abs(exp_sum(s)) <= 1.0 + 1e-12);
}

TEST_CASE("geometric series") {
    const double eps = 0.3;
    const int K = 1000;
    PhaseSequence s{{}, eps};
    for (int k = 0; k <= K; ++k) s.phases.push_back(k * eps);
    // K + 1 terms
    const double closed = std::abs(std::sin((K + 1) * eps / 2) / std::sin(eps / 2));
    CHECK(std::abs(exp_sum(s)) == doctest::Approx(closed).epsilon(1e-10));
    CHECK(closed <= kuzmin_landau_bound(eps));
}

TEST_CASE("random admissible sequences obey the bound") {
    std::mt19937_64 rng(7);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double eps = 0.3, bound = 1.0 / std::tan(0.075);
    for (int t = 0; t < 10000; ++t) {
        const int K = 2 + static_cast<int>(u(rng) * 300);
        std::vector<double> h(K);
        for (double& v : h) v = eps + (2 * kPi - 2 * eps) * u(rng);
        std::sort(h.begin(), h.end(), std::greater<>());
        PhaseSequence s{{0.0}, eps};
        for (double v : h) s.phases.push_back(s.phases.back() + v);
        std::complex<double> direct = 0.0;
        for (double p : s.phases) direct += std::polar(1.0, p);
        REQUIRE(std::abs(exp_sum(s) - direct) < 1e-9);
        REQUIRE(std::abs(direct) <= bound);
    }
}

TEST_CASE("validation and reversal") {
    PhaseSequence bad{{0.0, 0.1, 0.3}, 0.2};
    CHECK_FALSE(validate(bad).valid);
    CHECK_THROWS_AS(exp_sum(bad), std::invalid_argument);
    PhaseSequence nonmono{{0.0, 1.0, 1.5, 2.5}, 0.4};
    CHECK_FALSE(validate(nonmono).valid);
    PhaseSequence up{{0.0, 0.5, 1.5, 3.0}, 0.5};
    PhaseSequence down{{0.0, 1.5, 2.5, 3.0}, 0.5};
    CHECK(validate(up).direction == Direction::Nondecreasing);
    CHECK(validate(down).direction == Direction::Nonincreasing);
    CHECK(std::abs(exp_sum(up)) == doctest::Approx(std::abs(exp_sum(down))).epsilon(1e-14));
}

TEST_CASE("cluster phase sums") {
    const wkb::WindowParams w;
    const auto z = cluster_phase_sum(400, wkb::CaseTag::Equatorial, 20, w, 0.0);
    CHECK(z.abs <= 1.0 + 1e-12);
    const double b = wkb::wkb_interval(400, 20, wkb::CaseTag::Equatorial).second;
    double A = 0.0;
    for (int j = 0; j < 50; ++j) {
        const auto s = cluster_phase_sum(400, wkb::CaseTag::Equatorial, 20, w, b * j / 50);
        CHECK(s.monotone);
        CHECK(s.separated);
        CHECK(s.bound_holds);
        A = std::max(A, s.abs);
    }
    CHECK(A < 3.0);
    CHECK_THROWS(cluster_phase_sum(400, wkb::CaseTag::Equatorial, 20, w, 2 * b));
}

TEST_CASE("concavity of the local frequency in m") {
    for (auto c : {wkb::CaseTag::Equatorial, wkb::CaseTag::Polar})
        for (int l : {100, 400}) {
            const int r = wkb::default_r(l);
            const auto [lo, hi] = wkb::m_window(l, r, c);
            const double b = wkb::wkb_interval(l, r, c).second;
            for (int m = std::max(lo, 1); m < hi; ++m)
                for (int j = 0; j < 20; ++j) {
                    const double t = b * j / 20;
                    const double mid = std::sqrt(-wkb::q_potential(l, m, t));
                    const double avg = 0.5 * (std::sqrt(-wkb::q_potential(l, m + 1, t)) +
                                              std::sqrt(-wkb::q_potential(l, m - 1, t)));
                    CHECK(avg <= mid + 1e-12 * mid);
                }
        }
}
