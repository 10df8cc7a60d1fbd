#pragma once

// Associated Legendre functions carry the Condon-Shortley phase (-1)^m.
// "Fully normalized" means Pbar_l^m(cos t) e^{i m phi} is an orthonormal
// spherical harmonic on the unit sphere.

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace sclab::sphere {

struct SphereGrid {
    std::vector<double> theta_nodes;    // polar angles in (0, pi), ascending
    std::vector<double> theta_weights;  // integrate f(theta) sin(theta) dtheta
    int n_phi = 1;
    int degree = 0;  // exact for polynomials in cos(theta) up to this degree

    int n_theta() const { return static_cast<int>(theta_nodes.size()); }
    double phi(int k) const;
    double phi_weight() const;  // 2 pi / n_phi
};

SphereGrid build_grid(int n_theta, int n_phi);

// Pbar_l^m(x) for l = m..lmax written to out (size lmax - m + 1).
// s = sqrt(1 - x^2) >= 0 is passed separately to keep precision near |x| = 1.
void legendre_column(int m, int lmax, double x, double s, double* out);

double normalized_legendre(int ell, int m, double x);
// g_l^m(theta) = Pbar_l^m(cos theta)
double g_value(int ell, int m, double theta);
// v_l^m(theta) = sqrt(cos theta) Pbar_l^m(sin theta), |theta| < pi/2
double v_value(int ell, int m, double theta);

struct RadialTable {
    int ell = 0;
    int m_lo = 0;
    int m_hi = 0;
    std::vector<double> thetas;  // v-angles in (-pi/2, pi/2)
    Eigen::MatrixXd values_v;    // rows m - m_lo, columns theta
    Eigen::MatrixXd values_g;    // g at the polar angle pi/2 - theta

    int rows() const { return m_hi - m_lo + 1; }
};

RadialTable legendre_band(int ell, int m_lo, int m_hi, const std::vector<double>& thetas);

// g_l^m at polar angles, rows m_lo..m_hi
Eigen::MatrixXd g_band(int ell, int m_lo, int m_hi, const std::vector<double>& polar);

struct LegendreAtZero {
    double value = 0.0;       // P_l^m(0), unnormalized, may be +-inf for large l
    double derivative = 0.0;  // (P_l^m)'(0)
    double log_abs = 0.0;     // log of the nonzero one of the two
    int sign = 0;             // its sign
    bool value_is_zero = false;
    double normalized_value = 0.0;       // Pbar_l^m(0) = v_l^m(0)
    double normalized_derivative = 0.0;  // Pbar_l^m'(0) = (v_l^m)'(0)
};

// closed forms through log-gamma
LegendreAtZero legendre_at_zero(int ell, int m);

// Pbar_l^m(0) and its derivative from the recurrence, for cross-checks
std::pair<double, double> legendre_at_zero_recurrence(int ell, int m);

// number of eigenvalues l(l+1) < lambda^2 with multiplicity
long long weyl_count(double lambda);

struct ClusterRank {
    std::vector<int> ells;
    long long rank = 0;
};
// degrees with lambda^2 <= l(l+1) < (lambda+1)^2
ClusterRank cluster_rank(double lambda);

std::string radial_table_csv(const RadialTable& t);

}  // namespace sclab::sphere
