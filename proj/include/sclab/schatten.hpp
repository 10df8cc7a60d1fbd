#pragma once

#include <complex>
#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "sclab/sphere_basis.hpp"

namespace sclab::schatten {

// (sum s^alpha)^{1/alpha}; alpha = inf gives the max
double schatten_norm(const std::vector<double>& values, double alpha);

// real weight on the sphere; degree is the polynomial degree of |W|^2 in
// Cartesian coordinates, or -1 when it is not a polynomial
struct SphereWeight {
    std::function<double(double theta, double phi)> fn;
    int degree = -1;
};

struct ClusterBasis {
    std::vector<int> ells;
    std::vector<std::pair<int, int>> modes;  // (l, m), m = -l..l
};
ClusterBasis cluster_basis(const std::vector<int>& ells);

struct GramResult {
    double lambda = 0.0;
    ClusterBasis basis;
    Eigen::MatrixXcd gram;
    std::vector<double> eigenvalues;  // descending
    bool exact = false;               // quadrature exact for every entry
    double quadrature_change = -1.0;  // eigenvalue change under a doubled grid, when checked
};

// G_jk = int |W|^2 Y_j conj(Y_k) over the basis of E_lambda
GramResult projector_gram(double lambda, const SphereWeight& W, const sphere::SphereGrid& grid,
                          bool check_quadrature = false);

// same for an explicit list of degrees
GramResult gram_for_ells(const std::vector<int>& ells, const SphereWeight& W,
                         const sphere::SphereGrid& grid);

struct SchattenReport {
    double lambda = 0.0;
    double p = 0.0;
    double alpha_prime = 0.0;
    std::vector<double> singular_values;
    double schatten_norm = 0.0;
    double predicted = 0.0;  // C lambda^{2 s(p)} ||W||^2, C filled by the caller
    double ratio = 0.0;      // schatten_norm / lambda^{2 s(p)}
};

SchattenReport dual_report(const GramResult& g, double p, int N = 2);

// Dense matrix sqrt(w_i) |W(x_i)| K(x_i, x_j) |W(x_j)| sqrt(w_j) on the grid points, with
// K = sum_l (2l + 1) / (4 pi) P_l(x . y). Same nonzero spectrum as the Gram matrix.
Eigen::MatrixXd kernel_route_matrix(double lambda, const SphereWeight& W,
                                    const sphere::SphereGrid& grid);

// ---- oscillatory integral operators ----

struct Box {
    std::vector<double> lo, hi;  // per axis
};

struct OscGrid {
    std::vector<std::vector<double>> nodes;  // each a point
    std::vector<double> weights;
};

// midpoint grid with n nodes per axis
OscGrid box_grid(const Box& b, int n_per_axis);

using PhaseFn = std::function<double(const double* x, const double* y)>;
using AmpFn = std::function<double(const double* x, const double* y)>;

// A_ij = sqrt(wx_i) e^{i lambda psi(x_i, y_j)} a(x_i, y_j) sqrt(wy_j)
Eigen::MatrixXcd oscillatory_operator(const PhaseFn& psi, const AmpFn& a, double lambda,
                                      const OscGrid& gx, const OscGrid& gy);

// singular values of the operator without storing it: eigenvalues of A* A
// accumulated over row blocks
std::vector<double> oscillatory_singular_values(const PhaseFn& psi, const AmpFn& a, double lambda,
                                                const OscGrid& gx, const OscGrid& gy);

struct OscResult {
    std::vector<double> singular_values;
    int nx = 0, ny = 0;                // nodes per axis on the accepted grid
    double doubling_change = 0.0;      // top-k relative change when each axis is doubled
    bool resolved = false;
};

// Resolution rule: >= nodes_per_wavelength nodes per 2 pi / lambda on every axis.
// Each axis is then doubled until the top_k values move by at most tol.
OscResult oscillatory_spectrum(const PhaseFn& psi, const AmpFn& a, double lambda, const Box& bx,
                               const Box& by, double nodes_per_wavelength = 10.0, int top_k = 20,
                               double tol = 1e-4, int min_nodes = 16, bool validate = true,
                               int max_rounds = 3);

double bump(double t);  // exp(1 - 1/(1 - t^2)) on |t| < 1

// ---- Kato-Seiler-Simon type comparison ----

struct KssResult {
    double lhs = 0.0;        // || beta(sqrt Delta) W ||_{S^p}
    double rhs_unit = 0.0;   // ||W||_p (sum sup|beta|^p (1+n)^{N-1})^{1/p}, C = 1
    double rhs = 0.0;        // C^{1/p} rhs_unit
    bool holds = false;
    std::vector<double> gram_eigenvalues;  // of diag(beta) G diag(beta)
};

// beta on [0, inf) supported on the clusters [n, n+1] listed in ns
KssResult kss_bound(const std::function<double(double)>& beta, const std::vector<int>& ns,
                    const SphereWeight& W, double p, const sphere::SphereGrid& grid,
                    double C = 1.0, int N = 2);

// || W ||_{L^p(S^2)} by quadrature
double weight_lp(const SphereWeight& W, double p, const sphere::SphereGrid& grid);

}  // namespace sclab::schatten
