#pragma once

#include <complex>
#include <vector>

#include "sclab/wkb.hpp"

namespace sclab::expsum {

struct PhaseSequence {
    std::vector<double> phases;  // Phi_0 .. Phi_K
    double eps = 0.0;
};

enum class Direction { Nonincreasing, Nondecreasing, Constant };

struct SequenceCheck {
    bool valid = false;
    Direction direction = Direction::Constant;
    double min_increment = 0.0;
    double max_increment = 0.0;
    const char* reason = "";
};

// increments in [eps, 2 pi - eps] and monotone, either direction
SequenceCheck validate(const PhaseSequence& seq);

double kuzmin_landau_bound(double eps);

// direct sum of e^{i Phi_k}; throws std::invalid_argument on an inadmissible sequence
std::complex<double> exp_sum(const PhaseSequence& seq);

struct ClusterPhaseSum {
    std::complex<double> sum;
    double abs = 0.0;
    bool bound_holds = false;  // |sum| <= cot(eps_observed / 4)
    bool monotone = false;     // increments non-increasing in m
    bool separated = false;    // increments inside (0, 2 pi), at least min_eps from both ends
    double eps_observed = 0.0;
    double min_increment = 0.0;
    double max_increment = 0.0;
};

// sum over the case window of e^{i(2 S_{l,m}(theta) + m pi)}
ClusterPhaseSum cluster_phase_sum(int ell, wkb::CaseTag c, int r, const wkb::WindowParams& w,
                                  double theta, double min_eps = 1e-3);

}  // namespace sclab::expsum
