#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace sclab::lab {

enum class Experiment {
    sogge_single,
    cluster_lower,
    cluster_upper,
    wkb_accuracy,
    phase_sums,
    schatten_dual,
    oscillatory_scaling,
    kss_compare,
    heuristic_compare,
    weyl,
};

std::string experiment_name(Experiment e);
Experiment parse_experiment(const std::string& s);

struct ExperimentConfig {
    Experiment experiment = Experiment::weyl;
    std::vector<double> ell_range;     // explicit list of degrees
    std::vector<double> lambda_range;  // explicit list of frequencies
    double zeta = 0.5;
    double eta1 = 8.0;
    double eta2 = 0.5;
    std::vector<double> p_list;
    std::string case_tag = "both";  // 2, inf or both
    int n_theta = 0;                // 0 picks a size from the degree
    int n_phi = 0;
    int trials = 0;                 // 0 picks the experiment default
    std::string phase = "paraboloid";
    double nodes_per_wavelength = 10.0;
    std::uint64_t seed = 0;
    std::string output;  // prefix for .csv and .json; empty writes nothing
};

class ConfigError : public std::runtime_error {
public:
    ConfigError(const std::string& source, int line, const std::string& field, const std::string& msg);
    int line() const { return line_; }
    const std::string& field() const { return field_; }

private:
    int line_;
    std::string field_;
};

// flat key = value text; '#' starts a comment
ExperimentConfig parse_config(const std::string& text, const std::string& source = "config");
ExperimentConfig load_config(const std::string& path);
// defaults for one experiment, as used by the acceptance suite
ExperimentConfig default_config(Experiment e);

struct Check {
    std::string check;
    double predicted = 0.0;
    double measured = 0.0;
    double tol = 0.0;
    bool pass = false;
    std::string note;
};

struct AcceptanceReport {
    std::string experiment;
    std::vector<Check> checks;
    bool all_pass() const;
};

struct RunOutput {
    AcceptanceReport report;
    std::string csv;
};

RunOutput run(const ExperimentConfig& config);
void write_outputs(const RunOutput& out, const std::string& prefix);
std::string report_json(const AcceptanceReport& r);

struct SlopeFit {
    double slope = 0.0;
    double stderr_ = 0.0;
    double intercept = 0.0;
};
// least squares of log y on log x
SlopeFit fit_slope(const std::vector<double>& x, const std::vector<double>& y);

// ---- acceptance suite ----

struct CriterionResult {
    int id = 0;
    std::string title;
    std::vector<Check> checks;
    double seconds = 0.0;
    double budget_seconds = 0.0;  // 0: no runtime bound
    bool pass() const;
};

CriterionResult run_criterion(int id);
inline constexpr int kCriterionCount = 13;

// basis identities that are not tied to an experiment kind
std::vector<Check> orthonormality_checks(int lmax = 200, int n_theta = 256);
std::vector<Check> closed_form_checks(int lmax = 500);

}  // namespace sclab::lab
