#pragma once

#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace sclab::wkb {

enum class CaseTag { Equatorial, Polar };  // "2" and "inf"

std::string case_name(CaseTag c);
CaseTag parse_case(const std::string& s);

struct WindowParams {
    double eta1 = 8.0;  // polar window, needs > 2
    double eta2 = 0.5;  // equatorial window, needs < sqrt 2
};

// r_l = ceil(l^zeta)
int default_r(int ell, double zeta = 0.5);

// inclusive m range of the extremal window
std::pair<int, int> m_window(int ell, int r, CaseTag c);

// symmetric interval (-b, b) in the v-angle
std::pair<double, double> wkb_interval(int ell, int r, CaseTag c, const WindowParams& w = {});

class TurningPointError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

double q_potential(int ell, int m, double theta);
double q_prime(int ell, int m, double theta);
double q_second(int ell, int m, double theta);

// S(theta) = int_0^theta sqrt|Q|; odd in theta
double action_integral(int ell, int m, double theta, int quad_pts = 16);

// (S_{m-1} - S_m)(theta) without cancellation
double action_difference(int ell, int m, double theta, int quad_pts = 16);

// E(theta) = int_0^|theta| |Q'' - 5 Q'^2 / (4Q)| / (8 |Q|^{3/2})
double wkb_error_functional(int ell, int m, double theta, int quad_pts = 16);

struct WkbProfile {
    int ell = 0;
    int m = 0;
    CaseTag case_tag = CaseTag::Equatorial;
    double eta1 = 0.0;
    double eta2 = 0.0;
    std::pair<double, double> interval;
    std::vector<double> thetas;
    std::vector<double> Q;
    std::vector<double> S;
    std::vector<double> y;
    double c = 0.0;
    std::vector<double> err;
    std::vector<double> v_exact;
    std::vector<double> envelope;  // 2 (e^{2E} - 1) |c| |Q|^{-1/4}

    bool even() const { return (ell + m) % 2 == 0; }
    // sup of |v - c y| |Q|^{1/4} / |c|
    double scaled_deviation() const;
    // number of samples where |v - c y| exceeds the envelope
    int envelope_violations() const;
};

struct ProfileRequest {
    int ell = 0;
    int m = 0;
    int r = 0;
    CaseTag case_tag = CaseTag::Equatorial;
    WindowParams window;
    std::vector<double> thetas;  // empty: uniform grid over the interval
    int samples = 0;             // used when thetas is empty; 0 picks ~12 per local wavelength
    bool wrong_parity = false;   // negative control: match c with the other formula
};

WkbProfile wkb_approximant(const ProfileRequest& req);

// c_{l,m} from matching at 0
double matching_constant(int ell, int m, bool wrong_parity = false);

std::string profile_csv(const WkbProfile& p);

}  // namespace sclab::wkb
