#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include <Eigen/Dense>

#include "doctest.h"
#include "sclab/cluster_density.hpp"
#include "sclab/schatten.hpp"
#include "sclab/sphere_basis.hpp"

using namespace sclab;
using namespace sclab::schatten;
constexpr double kPi = std::numbers::pi;

namespace {

SphereWeight unit() { return {[](double, double) { return 1.0; }, 0}; }
SphereWeight bumpy() {
    return {[](double th, double ph) {
                const double x = std::sin(th) * std::cos(ph) - 0.6, y = std::sin(th) * std::sin(ph),
                             z = std::cos(th) - 0.8;
                return std::exp(-(x * x + y * y + z * z) / 0.5);
            },
            -1};
}
SphereWeight linear() {
    return {[](double th, double ph) { return 1.0 + 0.5 * std::sin(th) * std::cos(ph); }, 2};
}

}  // namespace

TEST_CASE("schatten norms") {
    CHECK(schatten_norm({1, 1, 1}, 1.0) == doctest::Approx(3.0));
    CHECK(schatten_norm({3, 4}, 2.0) == doctest::Approx(5.0));
    CHECK(schatten_norm({3, 4}, cluster::kInf) == 4.0);
    CHECK(schatten_norm({}, 2.0) == 0.0);
    CHECK(schatten_norm({1e200, 1e200}, 2.0) == doctest::Approx(std::sqrt(2.0) * 1e200));
    CHECK_THROWS(schatten_norm({-1.0}, 2.0));
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0, 1);
    for (int t = 0; t < 200; ++t) {
        std::vector<double> s(1 + t % 17);
        for (double& v : s) v = u(rng);
        double prev = 1e300;
        for (double a : {0.5, 1.0, 1.5, 2.0, 3.0, 6.0, 20.0, cluster::kInf}) {
            const double n = schatten_norm(s, a);
            CHECK(n <= prev * (1 + 1e-14));
            prev = n;
        }
    }
}

TEST_CASE("constant weight gives the identity") {
    for (double lam : {5.0, 12.0}) {
        const auto g = projector_gram(lam, unit(), sphere::build_grid(40, 60));
        const int D = static_cast<int>(g.basis.modes.size());
        CHECK(D == sphere::cluster_rank(lam).rank);
        CHECK(g.exact);
        CHECK((g.gram - Eigen::MatrixXcd::Identity(D, D)).cwiseAbs().maxCoeff() < 1e-12);
        const auto rep = dual_report(g, 6.0);
        CHECK(rep.alpha_prime == doctest::Approx(3.0));
        CHECK(rep.schatten_norm == doctest::Approx(std::pow(D, 1.0 / 3)).epsilon(1e-12));
    }
}

TEST_CASE("gram eigenvalues lie in [0, sup W^2]") {
    const auto g = projector_gram(10.0, bumpy(), sphere::build_grid(80, 160), true);
    CHECK(g.quadrature_change < 1e-10);
    for (double mu : g.eigenvalues) {
        CHECK(mu >= -1e-13);
        CHECK(mu <= 1.0 + 1e-13);
    }
    CHECK(std::is_sorted(g.eigenvalues.rbegin(), g.eigenvalues.rend()));
    const auto rep = dual_report(g, 4.0);
    CHECK(rep.schatten_norm == doctest::Approx(schatten_norm(rep.singular_values, rep.alpha_prime)).epsilon(1e-12));
    CHECK(rep.ratio == doctest::Approx(rep.schatten_norm / std::pow(10.0, 2 * cluster::exponents(4.0).s)));
}

TEST_CASE("gram route agrees with the kernel route") {
    for (double lam : {5.0, 10.0, 20.0}) {
        const int L = sphere::cluster_rank(lam).ells.back();
        const auto grid = sphere::build_grid(L + 3, 2 * L + 4);
        const auto g = projector_gram(lam, linear(), grid);
        const Eigen::MatrixXd K = kernel_route_matrix(lam, linear(), grid);
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(K, Eigen::EigenvaluesOnly);
        std::vector<double> ev(es.eigenvalues().data(), es.eigenvalues().data() + es.eigenvalues().size());
        std::sort(ev.rbegin(), ev.rend());
        ev.resize(g.eigenvalues.size());
        for (auto& v : ev) v = std::max(0.0, v);
        std::vector<double> gv = g.eigenvalues;
        for (auto& v : gv) v = std::max(0.0, v);
        const double a = schatten_norm(gv, 3.0), b = schatten_norm(ev, 3.0);
        CHECK(std::abs(a - b) < 1e-6 * a);
    }
}

TEST_CASE("oscillatory operator") {
    const PhaseFn para = [](const double* x, const double* y) { return x[0] * y[0] + x[1] * y[0] * y[0] / 2; };
    const AmpFn sep = [](const double* x, const double* y) { return bump(x[0]) * bump(x[1]) * bump(y[0]); };
    const Box bx{{-1, -1}, {1, 1}}, by{{-1}, {1}};
    SUBCASE("no oscillation leaves a rank-one separable kernel") {
        const auto s = oscillatory_singular_values(para, sep, 0.0, box_grid(bx, 12), box_grid(by, 12));
        CHECK(s[1] < 1e-6 * s[0]);
    }
    SUBCASE("blocked route matches a dense SVD") {
        const auto gx = box_grid(bx, 10), gy = box_grid(by, 24);
        const auto A = oscillatory_operator(para, sep, 7.0, gx, gy);
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A);
        const auto s = oscillatory_singular_values(para, sep, 7.0, gx, gy);
        for (int k = 0; k < 5; ++k) CHECK(s[k] == doctest::Approx(svd.singularValues()(k)).epsilon(1e-8));
    }
    SUBCASE("accepted resolution is stable under doubling") {
        const auto r = oscillatory_spectrum(para, sep, 8.0, bx, by);
        CHECK(r.resolved);
        CHECK(r.doubling_change < 1e-4);
        CHECK(r.nx >= 16);
    }
    SUBCASE("distance phase on separated boxes") {
        const PhaseFn dist = [](const double* x, const double* y) { return std::hypot(x[0] - y[0], x[1] - y[1]); };
        const AmpFn amp = [](const double* x, const double* y) {
            return bump(2 * x[0]) * bump(2 * x[1]) * bump(2 * (y[0] - 1.5)) * bump(2 * y[1]) *
                   bump(std::hypot(x[0] - y[0], x[1] - y[1]) - 1.5);
        };
        const Box bx2{{-0.5, -0.5}, {0.5, 0.5}}, by2{{1.0, -0.5}, {2.0, 0.5}};
        const auto a = oscillatory_singular_values(dist, amp, 4.0, box_grid(bx2, 16), box_grid(by2, 16));
        const auto b = oscillatory_singular_values(dist, amp, 4.0, box_grid(bx2, 32), box_grid(by2, 32));
        const double sa = schatten_norm(a, 6.0), sb = schatten_norm(b, 6.0);
        CHECK(sa > 0.0);
        CHECK(std::abs(sa - sb) < 1e-4 * sb);
    }
    CHECK(bump(0.0) == 1.0);
    CHECK(bump(1.0) == 0.0);
    CHECK_THROWS(box_grid(Box{{0.0}, {}}, 4));
}

TEST_CASE("kss comparison basics") {
    const auto grid = sphere::build_grid(60, 120);
    auto ind = [](int n) { return [n](double x) { return (x >= n && x < n + 1) ? 1.0 : 0.0; }; };
    SUBCASE("operator norm at p = inf") {
        const auto k = kss_bound(ind(10), {10}, bumpy(), cluster::kInf, grid);
        CHECK(k.lhs <= weight_lp(bumpy(), cluster::kInf, grid) * (1 + 1e-12));
        CHECK(k.holds);
    }
    SUBCASE("hilbert-schmidt identity at p = 2") {
        const int n = 8;
        const auto k = kss_bound(ind(n), {n}, bumpy(), 2.0, grid);
        double direct = 0.0;
        for (int l : sphere::cluster_rank(n).ells)
            for (int m = -l; m <= l; ++m)
                for (int i = 0; i < grid.n_theta(); ++i) {
                    const double p = sphere::g_value(l, std::abs(m), grid.theta_nodes[i]);
                    for (int q = 0; q < grid.n_phi; ++q) {
                        const double w = bumpy().fn(grid.theta_nodes[i], grid.phi(q));
                        direct += grid.theta_weights[i] * grid.phi_weight() * w * w * p * p;
                    }
                }
        CHECK(k.lhs * k.lhs == doctest::Approx(direct).epsilon(1e-10));
    }
    SUBCASE("constant weight saturates the single-cluster trace bound") {
        const int n = 12;
        const double q = 3.0;
        const auto k = kss_bound(ind(n), {n}, unit(), q, grid);
        const double D = static_cast<double>(sphere::cluster_rank(n).rank);
        CHECK(std::pow(k.lhs, q) == doctest::Approx(D).epsilon(1e-10));
        CHECK(std::pow(k.rhs_unit, q) == doctest::Approx(4 * kPi * (1 + n)).epsilon(1e-10));
        const auto kb = kss_bound(ind(n), {n}, bumpy(), q, grid);
        CHECK(std::pow(kb.lhs, q) <= D / (4 * kPi) * std::pow(weight_lp(bumpy(), q, grid), q) * (1 + 1e-10));
    }
    CHECK(weight_lp(unit(), 2.0, grid) == doctest::Approx(std::sqrt(4 * kPi)));
}
