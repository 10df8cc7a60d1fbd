#include <cmath>
#include <complex>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "sclab/cluster_density.hpp"

using namespace sclab;
using namespace sclab::cluster;
using wkb::CaseTag;
constexpr double kPi = std::numbers::pi;

TEST_CASE("single harmonic has unit mass") {
    ClusterSpec s{2, 1, CaseTag::Polar, {}};
    CHECK(s.window().first == 1);
    CHECK(s.window().second == 1);
    const auto prof = density(s, sphere::build_grid(16, 1));
    CHECK(lp_norm(prof, 2.0) == doctest::Approx(1.0).epsilon(1e-13));
}

TEST_CASE("trace identity with weights") {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> u(0, 1);
    ClusterSpec s{60, 8, CaseTag::Equatorial, {}};
    double tr = 0.0;
    for (int j = 0; j < 8; ++j) {
        s.nu.push_back(u(rng));
        tr += s.nu.back();
    }
    CHECK(s.trace() == doctest::Approx(tr));
    const auto prof = density(s, sphere::build_grid(200, 1));
    CHECK(std::abs(lp_norm(prof, 2.0) - tr) < 1e-8 * tr);
    for (double v : prof.rho) CHECK(v >= 0.0);
}

TEST_CASE("spec validation") {
    CHECK_THROWS(ClusterSpec{10, 6, CaseTag::Equatorial, {}}.validate());
    CHECK_THROWS(ClusterSpec{10, 2, CaseTag::Equatorial, {1.0}}.validate());
    CHECK_NOTHROW(ClusterSpec{10, 5, CaseTag::Polar, {}}.validate());
}

TEST_CASE("pointwise windows at l = 400") {
    const int l = 400, r = 20;
    ClusterSpec e{l, r, CaseTag::Equatorial, {}};
    const double b = 0.5 * std::sqrt(static_cast<double>(r) / l);
    double ce = 1e300;
    for (int j = 0; j <= 400; ++j) ce = std::min(ce, density_at(e, kPi / 2 - b * j / 400) / std::sqrt(l * r * 1.0));
    CHECK(ce > 0.01);
    ClusterSpec p{l, r, CaseTag::Polar, {}};
    const double a = 8.0 * r / l;
    double cp = 1e300;
    for (int j = 0; j <= 2000; ++j) {
        const double t = a + (kPi / 2 - a) * j / 2000;
        cp = std::min(cp, density_at(p, t) * std::sin(t) / r);
    }
    CHECK(cp > 0.01);
}

TEST_CASE("density does not depend on the basis of the window") {
    const int l = 40, r = 6;
    ClusterSpec s{l, r, CaseTag::Equatorial, {}};
    const auto [lo, hi] = s.window();
    std::mt19937_64 rng(11);
    std::normal_distribution<double> g(0, 1);
    Eigen::MatrixXcd Z(r, r);
    for (int i = 0; i < r; ++i)
        for (int j = 0; j < r; ++j) Z(i, j) = {g(rng), g(rng)};
    const Eigen::MatrixXcd U = Eigen::HouseholderQR<Eigen::MatrixXcd>(Z).householderQ();
    for (double th : {0.3, 1.0, 1.5, 2.2})
        for (double ph : {0.0, 1.1, 4.0}) {
            Eigen::VectorXcd y(r);
            for (int m = lo; m <= hi; ++m) y(m - lo) = sphere::g_value(l, m, th) * std::polar(1.0, m * ph);
            const Eigen::VectorXcd f = U.transpose() * y;
            CHECK(std::abs(f.squaredNorm() - density_at(s, th)) < 1e-9 * (1 + density_at(s, th)));
        }
}

TEST_CASE("exponents") {
    const auto e6 = exponents(6.0);
    CHECK(e6.s == doctest::Approx(1.0 / 6));
    CHECK(e6.alpha == doctest::Approx(1.5));
    CHECK(breakpoint(2) == doctest::Approx(6.0));
    // both branches agree at the breakpoint
    const auto below = exponents(6.0 - 1e-9), above = exponents(6.0 + 1e-9);
    CHECK(below.s == doctest::Approx(above.s).epsilon(1e-7));
    CHECK(below.alpha == doctest::Approx(above.alpha).epsilon(1e-7));
    const auto e2 = exponents(2.0);
    CHECK(e2.s == 0.0);
    CHECK(e2.alpha == doctest::Approx(1.0));
    const auto ei = exponents(kInf);
    CHECK(ei.s == 0.5);
    CHECK(std::isinf(ei.alpha));
    for (int N : {2, 3, 5})
        for (double p : {2.0, 2.5, 3.0, 4.0, 6.0, 7.0, 10.0, 50.0, kInf}) {
            const auto e = exponents(p, N);
            CHECK(2 * e.s + (N - 1) / e.alpha == doctest::Approx(N - 1.0).epsilon(1e-13));
        }
    CHECK_THROWS(exponents(1.5));
}

TEST_CASE("triangle inequality gap on the extremal families") {
    // naive sum |nu| against the Schatten sum: r^{1 - 1/alpha} for unit weights
    for (int r : {5, 20, 80}) {
        const double a = exponents(6.0).alpha;
        const double naive = r, sch = std::pow(static_cast<double>(r), 1.0 / a);
        CHECK(naive / sch == doctest::Approx(std::pow(r, 1.0 - 1.0 / a)));
    }
}

TEST_CASE("lp norms and resolution") {
    const auto grid = sphere::build_grid(50, 1);
    const auto one = profile_from_values(grid, std::vector<double>(50, 1.0));
    CHECK(lp_norm(one, 2.0) == doctest::Approx(4 * kPi));
    CHECK(lp_norm(one, 6.0) == doctest::Approx(std::pow(4 * kPi, 1.0 / 3)));
    CHECK(lp_norm(one, kInf) == doctest::Approx(1.0));
    CHECK_THROWS(lp_norm(one, 1.0));
    ClusterSpec s{100, 10, CaseTag::Polar, {}};
    const auto coarse = density(s, sphere::build_grid(60, 1));
    CHECK(coarse.under_resolved);
    const auto fine = density(s, sphere::build_grid(400, 1));
    CHECK_FALSE(fine.under_resolved);
    CHECK(fine.resolution_change < 1e-6);
}

TEST_CASE("concentration inequality") {
    const auto grid = sphere::build_grid(50, 1);
    const auto one = profile_from_values(grid, std::vector<double>(50, 1.0));
    const auto c = concentration_measure(one, 6.0);
    CHECK(c.measured == doctest::Approx(4 * kPi));
    CHECK(c.measured >= c.lower_bound);
    ClusterSpec e{400, 20, CaseTag::Equatorial, {}};
    const auto ce = concentration_measure(density(e, sphere::build_grid(1600, 1), false), 6.0);
    CHECK(ce.holds);
    CHECK(ce.measured / ce.lower_bound > 1.0);
    ClusterSpec p{400, 20, CaseTag::Polar, {}};
    CHECK(concentration_measure(density(p, sphere::build_grid(1600, 1), false), 8.0).holds);
}

TEST_CASE("semiclassical density") {
    CHECK(heuristic_density(400, 100, 200, 0.1) == 0.0);
    CHECK(heuristic_density_literal(400, 10, 30, 1.0) < 0.0);
    const int l = 400, r = 20;
    const auto avg = [&](const ClusterSpec& s, double t) {
        double acc = 0.0;
        for (int j = 0; j < 64; ++j) acc += density_at(s, t - kPi / l + 2 * kPi / l * (j + 0.5) / 64);
        return acc / 64;
    };
    ClusterSpec p{l, r, CaseTag::Polar, {}};
    const double t = 2 * 8.0 * r / l;
    const double rp = heuristic_density(l, r, 2 * r, t) / avg(p, t);
    CHECK(rp >= 0.5);
    CHECK(rp <= 2.0);
    ClusterSpec e{l, r, CaseTag::Equatorial, {}};
    const double re = heuristic_density(l, l - 2 * r, l - r, kPi / 2) / avg(e, kPi / 2);
    CHECK(re >= 0.5);
    CHECK(re <= 2.0);
}
