#pragma once

#include <limits>
#include <map>
#include <optional>
#include <vector>

#include "sclab/sphere_basis.hpp"
#include "sclab/wkb.hpp"

namespace sclab::cluster {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

struct ClusterSpec {
    int ell = 0;
    int r = 1;
    wkb::CaseTag case_tag = wkb::CaseTag::Equatorial;
    std::vector<double> nu;  // empty means all ones

    std::pair<int, int> window() const { return wkb::m_window(ell, r, case_tag); }
    double weight(int j) const { return nu.empty() ? 1.0 : nu[j]; }
    double trace() const;
    void validate() const;
};

// rho at one polar angle
double density_at(const ClusterSpec& spec, double theta);

struct DensityProfile {
    std::vector<double> thetas;   // polar nodes
    std::vector<double> weights;  // sin(theta) dtheta weights
    std::vector<double> rho;
    std::optional<ClusterSpec> spec;
    std::map<double, double> lp_norms;
    bool under_resolved = false;
    double resolution_change = 0.0;  // max relative norm change under doubling
};

// Sum of nu_j g_{l,m_j}^2 on the grid nodes; with check_resolution the norms are
// recomputed on a grid with twice as many nodes and compared at 1e-6.
DensityProfile density(const ClusterSpec& spec, const sphere::SphereGrid& grid,
                       bool check_resolution = true);

DensityProfile profile_from_values(const sphere::SphereGrid& grid, std::vector<double> rho);

// (2 pi sum w rho^{p/2})^{2/p}; p = inf is the max, refined between nodes when the spec is known
double lp_norm(const DensityProfile& profile, double p);

struct Exponents {
    double s = 0.0;
    double alpha = 0.0;  // inf for p = inf
};
Exponents exponents(double p, int N = 2);
double breakpoint(int N = 2);

struct Concentration {
    double lower_bound = 0.0;
    double measured = 0.0;
    bool holds = false;
};
// measure of {rho > ||rho||_1 / (16 pi)} against its lower bound
Concentration concentration_measure(const DensityProfile& profile, double p);

// Semiclassical prediction for sum_{a<=m<=b} g_{l,m}(theta)^2:
// (l / (2 pi^2)) [asin(min(1, b / (l sin t))) - asin(min(1, a / (l sin t)))].
double heuristic_density(int ell, int a_m, int b_m, double theta);

// The printed square-root form, kept for comparison. Its sign is negative for a < b.
double heuristic_density_literal(int ell, int a_m, int b_m, double theta);

}  // namespace sclab::cluster
