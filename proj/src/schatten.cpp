#include "sclab/schatten.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "sclab/cluster_density.hpp"
#include "sclab/coverage.hpp"

namespace sclab::schatten {

namespace {
constexpr double kPi = std::numbers::pi;

std::vector<double> sorted_desc(const Eigen::VectorXd& v) {
    std::vector<double> out(v.data(), v.data() + v.size());
    std::sort(out.begin(), out.end(), std::greater<>());
    return out;
}

// Pbar_l^{|m|}(cos theta_i) with the sign convention Y_l^{-m} = (-1)^m conj(Y_l^m)
Eigen::MatrixXd basis_theta_values(const ClusterBasis& b, const sphere::SphereGrid& grid) {
    const int nt = grid.n_theta();
    const int lmax = b.ells.empty() ? 0 : *std::max_element(b.ells.begin(), b.ells.end());
    Eigen::MatrixXd P(b.modes.size(), nt);
    std::vector<double> col(lmax + 1);
    for (int i = 0; i < nt; ++i) {
        const double x = std::cos(grid.theta_nodes[i]), s = std::sin(grid.theta_nodes[i]);
        for (std::size_t j = 0; j < b.modes.size(); ++j) {
            const auto [l, m] = b.modes[j];
            const int am = std::abs(m);
            sphere::legendre_column(am, l, x, s, col.data());
            const double v = col[l - am];
            P(j, i) = (m < 0 && (am % 2 == 1)) ? -v : v;
        }
    }
    return P;
}
}  // namespace

double schatten_norm(const std::vector<double>& values, double alpha) {
    SCLAB_TOUCH("schatten_lab.schatten_norm");
    if (!(alpha > 0.0)) throw std::invalid_argument("schatten_norm: alpha must be positive");
    if (values.empty()) return 0.0;
    double mx = 0.0;
    for (double v : values) {
        if (v < 0.0) throw std::invalid_argument("schatten_norm: values must be nonnegative");
        mx = std::max(mx, v);
    }
    if (std::isinf(alpha) || mx == 0.0) return mx;
    double acc = 0.0;
    for (double v : values) acc += std::pow(v / mx, alpha);
    return mx * std::pow(acc, 1.0 / alpha);
}

ClusterBasis cluster_basis(const std::vector<int>& ells) {
    ClusterBasis b;
    b.ells = ells;
    for (int l : ells)
        for (int m = -l; m <= l; ++m) b.modes.emplace_back(l, m);
    return b;
}

GramResult gram_for_ells(const std::vector<int>& ells, const SphereWeight& W,
                         const sphere::SphereGrid& grid) {
    GramResult g;
    g.basis = cluster_basis(ells);
    const int D = static_cast<int>(g.basis.modes.size());
    const int nt = grid.n_theta(), np = grid.n_phi;
    const int lmax = ells.empty() ? 0 : *std::max_element(ells.begin(), ells.end());
    g.exact = W.degree >= 0 && grid.degree >= 2 * lmax + W.degree && np > 2 * lmax + W.degree;
    g.gram = Eigen::MatrixXcd::Zero(D, D);
    if (D == 0) return g;
    const Eigen::MatrixXd P = basis_theta_values(g.basis, grid);
    const int dmax = 2 * lmax;
    std::vector<std::complex<double>> F(2 * dmax + 1);
    std::vector<double> w2(np);
    for (int i = 0; i < nt; ++i) {
        for (int k = 0; k < np; ++k) {
            const double v = W.fn(grid.theta_nodes[i], grid.phi(k));
            w2[k] = v * v;
        }
        // F(d) = (2 pi / n_phi) sum_k |W|^2 e^{i d phi_k}
        for (int d = -dmax; d <= dmax; ++d) {
            std::complex<double> acc = 0.0;
            for (int k = 0; k < np; ++k) acc += w2[k] * std::polar(1.0, d * grid.phi(k));
            F[d + dmax] = acc * grid.phi_weight();
        }
        const double wi = grid.theta_weights[i];
        for (int a = 0; a < D; ++a) {
            const double pa = wi * P(a, i);
            if (pa == 0.0) continue;
            const int ma = g.basis.modes[a].second;
            for (int b = 0; b <= a; ++b) {
                const int mb = g.basis.modes[b].second;
                g.gram(a, b) += pa * P(b, i) * F[ma - mb + dmax];
            }
        }
    }
    for (int a = 0; a < D; ++a) {
        g.gram(a, a) = g.gram(a, a).real();
        for (int b = 0; b < a; ++b) g.gram(b, a) = std::conj(g.gram(a, b));
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(g.gram, Eigen::EigenvaluesOnly);
    g.eigenvalues = sorted_desc(es.eigenvalues());
    return g;
}

GramResult projector_gram(double lambda, const SphereWeight& W, const sphere::SphereGrid& grid,
                          bool check_quadrature) {
    SCLAB_TOUCH("schatten_lab.projector_gram");
    const auto cr = sphere::cluster_rank(lambda);
    GramResult g = gram_for_ells(cr.ells, W, grid);
    g.lambda = lambda;
    if (check_quadrature) {
        const auto fine = sphere::build_grid(2 * grid.n_theta(), 2 * grid.n_phi);
        const GramResult f = gram_for_ells(cr.ells, W, fine);
        double worst = 0.0;
        const double scale = f.eigenvalues.empty() ? 1.0 : std::max(f.eigenvalues.front(), 1e-300);
        for (std::size_t i = 0; i < f.eigenvalues.size(); ++i)
            worst = std::max(worst, std::abs(f.eigenvalues[i] - g.eigenvalues[i]) / scale);
        g.quadrature_change = worst;
    }
    return g;
}

SchattenReport dual_report(const GramResult& g, double p, int N) {
    SchattenReport r;
    r.lambda = g.lambda;
    r.p = p;
    const auto e = cluster::exponents(p, N);
    r.alpha_prime = std::isinf(e.alpha) ? 1.0 : (e.alpha == 1.0 ? cluster::kInf : e.alpha / (e.alpha - 1.0));
    r.singular_values.reserve(g.eigenvalues.size());
    for (double v : g.eigenvalues) r.singular_values.push_back(std::max(0.0, v));
    r.schatten_norm = schatten_norm(r.singular_values, r.alpha_prime);
    r.ratio = r.schatten_norm / std::pow(g.lambda, 2.0 * e.s);
    return r;
}

Eigen::MatrixXd kernel_route_matrix(double lambda, const SphereWeight& W,
                                    const sphere::SphereGrid& grid) {
    const auto cr = sphere::cluster_rank(lambda);
    const int nt = grid.n_theta(), np = grid.n_phi;
    const int n = nt * np;
    std::vector<double> px(n), py(n), pz(n), sw(n);
    for (int i = 0; i < nt; ++i)
        for (int k = 0; k < np; ++k) {
            const int a = i * np + k;
            const double th = grid.theta_nodes[i], ph = grid.phi(k);
            px[a] = std::sin(th) * std::cos(ph);
            py[a] = std::sin(th) * std::sin(ph);
            pz[a] = std::cos(th);
            sw[a] = std::sqrt(grid.theta_weights[i] * grid.phi_weight()) * W.fn(th, ph);
        }
    const int lmax = cr.ells.empty() ? 0 : cr.ells.back();
    std::vector<double> coef(lmax + 1, 0.0);
    for (int l : cr.ells) coef[l] = (2.0 * l + 1.0) / (4.0 * kPi);
    Eigen::MatrixXd M(n, n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b <= a; ++b) {
            const double t = std::clamp(px[a] * px[b] + py[a] * py[b] + pz[a] * pz[b], -1.0, 1.0);
            // Legendre P_l(t) by recurrence
            double p0 = 1.0, p1 = t, k = coef[0];
            if (lmax >= 1) k += coef[1] * t;
            for (int l = 2; l <= lmax; ++l) {
                const double p2 = ((2.0 * l - 1.0) * t * p1 - (l - 1.0) * p0) / l;
                p0 = p1;
                p1 = p2;
                k += coef[l] * p2;
            }
            M(a, b) = M(b, a) = sw[a] * k * sw[b];
        }
    return M;
}

OscGrid box_grid(const Box& b, int n) {
    if (b.lo.size() != b.hi.size() || b.lo.empty()) throw std::invalid_argument("box_grid: bad box");
    if (n < 1) throw std::invalid_argument("box_grid: need n >= 1");
    const std::size_t dim = b.lo.size();
    std::size_t total = 1;
    for (std::size_t d = 0; d < dim; ++d) total *= n;
    double w = 1.0;
    for (std::size_t d = 0; d < dim; ++d) w *= (b.hi[d] - b.lo[d]) / n;
    OscGrid g;
    g.nodes.resize(total, std::vector<double>(dim));
    g.weights.assign(total, w);
    for (std::size_t idx = 0; idx < total; ++idx) {
        std::size_t rem = idx;
        for (std::size_t d = 0; d < dim; ++d) {
            const int i = static_cast<int>(rem % n);
            rem /= n;
            g.nodes[idx][d] = b.lo[d] + (i + 0.5) * (b.hi[d] - b.lo[d]) / n;
        }
    }
    return g;
}

Eigen::MatrixXcd oscillatory_operator(const PhaseFn& psi, const AmpFn& a, double lambda,
                                      const OscGrid& gx, const OscGrid& gy) {
    SCLAB_TOUCH("schatten_lab.oscillatory_operator");
    const std::size_t nx = gx.nodes.size(), ny = gy.nodes.size();
    Eigen::MatrixXcd A(nx, ny);
    for (std::size_t i = 0; i < nx; ++i)
        for (std::size_t j = 0; j < ny; ++j) {
            const double* x = gx.nodes[i].data();
            const double* y = gy.nodes[j].data();
            const double amp = a(x, y);
            A(i, j) = amp == 0.0 ? std::complex<double>(0.0)
                                 : std::sqrt(gx.weights[i] * gy.weights[j]) * amp *
                                       std::polar(1.0, lambda * psi(x, y));
        }
    return A;
}

std::vector<double> oscillatory_singular_values(const PhaseFn& psi, const AmpFn& a, double lambda,
                                                const OscGrid& gx, const OscGrid& gy) {
    SCLAB_TOUCH("schatten_lab.oscillatory_operator");
    // Gram on the smaller side, summed over blocks of the larger side
    const bool rows_are_x = gx.nodes.size() >= gy.nodes.size();
    const OscGrid& big = rows_are_x ? gx : gy;
    const OscGrid& small = rows_are_x ? gy : gx;
    const std::size_t nb = big.nodes.size(), ns = small.nodes.size();
    Eigen::MatrixXcd H = Eigen::MatrixXcd::Zero(ns, ns);
    const std::size_t block = 256;
    Eigen::MatrixXcd B(block, ns);
    for (std::size_t start = 0; start < nb; start += block) {
        const std::size_t len = std::min(block, nb - start);
        B.setZero();
        for (std::size_t r = 0; r < len; ++r) {
            const double* u = big.nodes[start + r].data();
            const double wu = big.weights[start + r];
            for (std::size_t j = 0; j < ns; ++j) {
                const double* v = small.nodes[j].data();
                const double* x = rows_are_x ? u : v;
                const double* y = rows_are_x ? v : u;
                const double amp = a(x, y);
                if (amp != 0.0)
                    B(r, j) = std::sqrt(wu * small.weights[j]) * amp * std::polar(1.0, lambda * psi(x, y));
            }
        }
        H.selfadjointView<Eigen::Lower>().rankUpdate(B.topRows(len).adjoint());
    }
    Eigen::MatrixXcd Hf = H.selfadjointView<Eigen::Lower>();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(Hf, Eigen::EigenvaluesOnly);
    std::vector<double> s = sorted_desc(es.eigenvalues());
    for (double& v : s) v = std::sqrt(std::max(0.0, v));
    return s;
}

double bump(double t) {
    if (std::abs(t) >= 1.0) return 0.0;
    return std::exp(1.0 - 1.0 / (1.0 - t * t));
}

OscResult oscillatory_spectrum(const PhaseFn& psi, const AmpFn& a, double lambda, const Box& bx,
                               const Box& by, double npw, int top_k, double tol, int min_nodes,
                               bool validate, int max_rounds) {
    const auto nodes_for = [&](const Box& b) {
        double len = 0.0;
        for (std::size_t d = 0; d < b.lo.size(); ++d) len = std::max(len, b.hi[d] - b.lo[d]);
        return std::max(min_nodes, static_cast<int>(std::ceil(npw * len * lambda / (2.0 * kPi))));
    };
    OscResult r;
    r.nx = nodes_for(bx);
    r.ny = nodes_for(by);
    r.singular_values = oscillatory_singular_values(psi, a, lambda, box_grid(bx, r.nx), box_grid(by, r.ny));
    if (!validate) return r;
    // refine until a doubling leaves the top values in place
    for (int round = 0; round < max_rounds; ++round) {
        const auto fine =
            oscillatory_singular_values(psi, a, lambda, box_grid(bx, 2 * r.nx), box_grid(by, 2 * r.ny));
        const std::size_t k = std::min<std::size_t>(top_k, std::min(fine.size(), r.singular_values.size()));
        // the A*A route resolves values only down to ~sqrt(eps) of the top, so the
        // relative scale is floored at 1e-3 of the top value
        const double floor = fine.empty() ? 0.0 : 1e-3 * fine.front();
        double worst = 0.0;
        for (std::size_t i = 0; i < k; ++i)
            worst = std::max(worst, std::abs(fine[i] - r.singular_values[i]) / std::max(fine[i], floor));
        r.doubling_change = worst;
        r.resolved = worst <= tol;
        if (r.resolved) break;
        r.nx *= 2;
        r.ny *= 2;
        r.singular_values = fine;
    }
    return r;
}

double weight_lp(const SphereWeight& W, double p, const sphere::SphereGrid& grid) {
    double acc = 0.0;
    for (int i = 0; i < grid.n_theta(); ++i)
        for (int k = 0; k < grid.n_phi; ++k) {
            const double v = std::abs(W.fn(grid.theta_nodes[i], grid.phi(k)));
            if (std::isinf(p))
                acc = std::max(acc, v);
            else
                acc += grid.theta_weights[i] * grid.phi_weight() * std::pow(v, p);
        }
    return std::isinf(p) ? acc : std::pow(acc, 1.0 / p);
}

KssResult kss_bound(const std::function<double(double)>& beta, const std::vector<int>& ns,
                    const SphereWeight& W, double p, const sphere::SphereGrid& grid, double C, int N) {
    SCLAB_TOUCH("schatten_lab.kss_bound");
    if (!(p >= 2.0)) throw std::invalid_argument("kss_bound: need p >= 2");
    std::vector<int> ells;
    double sum = 0.0, supmax = 0.0;
    for (int n : ns) {
        const auto cr = sphere::cluster_rank(std::max(1, n));
        ells.insert(ells.end(), cr.ells.begin(), cr.ells.end());
        double sup = 0.0;
        for (int k = 0; k <= 200; ++k) sup = std::max(sup, std::abs(beta(n + k / 200.0)));
        for (int l : cr.ells) sup = std::max(sup, std::abs(beta(std::sqrt(l * (l + 1.0)))));
        supmax = std::max(supmax, sup);
        if (!std::isinf(p)) sum += std::pow(sup, p) * std::pow(1.0 + n, N - 1);
    }
    std::sort(ells.begin(), ells.end());
    ells.erase(std::unique(ells.begin(), ells.end()), ells.end());
    GramResult g = gram_for_ells(ells, W, grid);
    const int D = static_cast<int>(g.basis.modes.size());
    Eigen::VectorXd b(D);
    for (int j = 0; j < D; ++j) {
        const int l = g.basis.modes[j].first;
        b(j) = beta(std::sqrt(l * (l + 1.0)));
    }
    Eigen::MatrixXcd M = b.asDiagonal() * g.gram * b.asDiagonal();
    KssResult r;
    if (D > 0) {
        Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(M, Eigen::EigenvaluesOnly);
        r.gram_eigenvalues = sorted_desc(es.eigenvalues());
    }
    std::vector<double> sv;
    for (double mu : r.gram_eigenvalues) sv.push_back(std::sqrt(std::max(0.0, mu)));
    r.lhs = schatten_norm(sv, p);
    const double wp = weight_lp(W, p, grid);
    r.rhs_unit = std::isinf(p) ? wp * supmax : wp * std::pow(sum, 1.0 / p);
    r.rhs = (std::isinf(p) ? 1.0 : std::pow(C, 1.0 / p)) * r.rhs_unit;
    r.holds = r.lhs <= r.rhs;
    return r;
}

}  // namespace sclab::schatten
