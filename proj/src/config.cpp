#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include "sclab/defaults.hpp"
#include "sclab/experiments.hpp"

namespace sclab::lab {

namespace {

std::string trim(const std::string& s) {
    const auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return "";
    const auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

struct FieldError {
    std::string msg;
};

double to_double(const std::string& raw) {
    const std::string s = trim(raw);
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    double v = 0.0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FieldError{"'" + s + "' is not a number"};
    return v;
}

long long to_int(const std::string& raw) {
    const std::string s = trim(raw);
    long long v = 0;
    const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
    if (s.empty() || res.ec != std::errc() || res.ptr != s.data() + s.size())
        throw FieldError{"'" + s + "' is not an integer"};
    return v;
}

// "a, b, c" or "lo:hi" or "lo:hi:step"
std::vector<double> to_list(const std::string& raw) {
    const std::string s = trim(raw);
    std::vector<double> out;
    if (s.find(':') != std::string::npos && s.find(',') == std::string::npos) {
        std::vector<std::string> parts;
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ':')) parts.push_back(item);
        if (parts.size() < 2 || parts.size() > 3) throw FieldError{"range must be lo:hi or lo:hi:step"};
        const double lo = to_double(parts[0]), hi = to_double(parts[1]);
        const double step = parts.size() == 3 ? to_double(parts[2]) : 1.0;
        if (!(step > 0.0)) throw FieldError{"range step must be positive"};
        if (hi < lo) throw FieldError{"range is empty"};
        const long long n = static_cast<long long>(std::floor((hi - lo) / step + 1e-9));
        if (n > 1000000) throw FieldError{"range too long"};
        for (long long k = 0; k <= n; ++k) out.push_back(lo + k * step);
    } else {
        std::stringstream ss(s);
        std::string item;
        while (std::getline(ss, item, ',')) out.push_back(to_double(item));
    }
    if (out.empty()) throw FieldError{"list is empty"};
    return out;
}

}  // namespace

ConfigError::ConfigError(const std::string& source, int line, const std::string& field, const std::string& msg)
    : std::runtime_error(source + ":" + std::to_string(line) + ": " +
                         (field.empty() ? "" : "field '" + field + "': ") + msg),
      line_(line),
      field_(field) {}

std::string experiment_name(Experiment e) {
    switch (e) {
        case Experiment::sogge_single: return "sogge_single";
        case Experiment::cluster_lower: return "cluster_lower";
        case Experiment::cluster_upper: return "cluster_upper";
        case Experiment::wkb_accuracy: return "wkb_accuracy";
        case Experiment::phase_sums: return "phase_sums";
        case Experiment::schatten_dual: return "schatten_dual";
        case Experiment::oscillatory_scaling: return "oscillatory_scaling";
        case Experiment::kss_compare: return "kss_compare";
        case Experiment::heuristic_compare: return "heuristic_compare";
        case Experiment::weyl: return "weyl";
    }
    return "?";
}

Experiment parse_experiment(const std::string& s) {
    for (int k = 0; k <= static_cast<int>(Experiment::weyl); ++k) {
        const auto e = static_cast<Experiment>(k);
        if (experiment_name(e) == s) return e;
    }
    throw std::invalid_argument("unknown experiment '" + s + "'");
}

ExperimentConfig parse_config(const std::string& text, const std::string& source) {
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    bool have_experiment = false;
    ExperimentConfig raw;
    std::vector<std::pair<std::string, std::pair<std::string, int>>> entries;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line = line.substr(0, hash);
        line = trim(line);
        if (line.empty()) continue;
        const auto eq = line.find('=');
        if (eq == std::string::npos) throw ConfigError(source, lineno, "", "expected key = value");
        const std::string key = trim(line.substr(0, eq));
        const std::string value = trim(line.substr(eq + 1));
        if (key.empty()) throw ConfigError(source, lineno, "", "missing key");
        for (const auto& e : entries)
            if (e.first == key) throw ConfigError(source, lineno, key, "duplicate key");
        entries.push_back({key, {value, lineno}});
        if (key == "experiment") {
            try {
                raw.experiment = parse_experiment(value);
            } catch (const std::exception& ex) {
                throw ConfigError(source, lineno, key, ex.what());
            }
            have_experiment = true;
        }
    }
    if (!have_experiment) throw ConfigError(source, lineno, "experiment", "missing required key");
    ExperimentConfig cfg = default_config(raw.experiment);
    cfg.output.clear();
    for (const auto& [key, vl] : entries) {
        const auto& [value, ln] = vl;
        try {
            if (key == "experiment") {
                continue;
            } else if (key == "ell_range") {
                cfg.ell_range = to_list(value);
                for (double v : cfg.ell_range)
                    if (!(v >= 1.0) || v != std::floor(v)) throw FieldError{"degrees must be positive integers"};
            } else if (key == "lambda_range") {
                cfg.lambda_range = to_list(value);
                for (double v : cfg.lambda_range)
                    if (!(v >= 0.0)) throw FieldError{"frequencies must be >= 0"};
            } else if (key == "zeta") {
                cfg.zeta = to_double(value);
                if (!(cfg.zeta > 0.0 && cfg.zeta < 1.0)) throw FieldError{"must lie in (0, 1)"};
            } else if (key == "eta1") {
                cfg.eta1 = to_double(value);
                if (!(cfg.eta1 > 2.0)) throw FieldError{"must exceed 2"};
            } else if (key == "eta2") {
                cfg.eta2 = to_double(value);
                if (!(cfg.eta2 > 0.0 && cfg.eta2 < std::sqrt(2.0))) throw FieldError{"must lie in (0, sqrt 2)"};
            } else if (key == "p_list") {
                cfg.p_list = to_list(value);
                for (double p : cfg.p_list)
                    if (!(p >= 2.0)) throw FieldError{"p values must be >= 2"};
            } else if (key == "case") {
                if (value != "2" && value != "inf" && value != "both") throw FieldError{"expected 2, inf or both"};
                cfg.case_tag = value;
            } else if (key == "n_theta") {
                const auto v = to_int(value);
                if (v != 0 && v < 2) throw FieldError{"must be 0 (auto) or >= 2"};
                cfg.n_theta = static_cast<int>(v);
            } else if (key == "n_phi") {
                const auto v = to_int(value);
                if (v < 0) throw FieldError{"must be >= 0"};
                cfg.n_phi = static_cast<int>(v);
            } else if (key == "trials") {
                const auto v = to_int(value);
                if (v < 0) throw FieldError{"must be >= 0"};
                cfg.trials = static_cast<int>(v);
            } else if (key == "phase") {
                if (value != "paraboloid" && value != "distance") throw FieldError{"expected paraboloid or distance"};
                cfg.phase = value;
            } else if (key == "nodes_per_wavelength") {
                cfg.nodes_per_wavelength = to_double(value);
                if (!(cfg.nodes_per_wavelength >= 2.0)) throw FieldError{"must be >= 2"};
            } else if (key == "seed") {
                const auto v = to_int(value);
                if (v < 0) throw FieldError{"must be >= 0"};
                cfg.seed = static_cast<std::uint64_t>(v);
            } else if (key == "output") {
                cfg.output = value;
            } else {
                throw ConfigError(source, ln, key, "unknown key");
            }
        } catch (const FieldError& fe) {
            throw ConfigError(source, ln, key, fe.msg);
        }
    }
    return cfg;
}

ExperimentConfig load_config(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open config file '" + path + "'");
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), path);
}

ExperimentConfig default_config(Experiment e) {
    ExperimentConfig c;
    c.experiment = e;
    c.zeta = defaults::kZeta;
    c.eta1 = defaults::kEta1;
    c.eta2 = defaults::kEta2;
    c.seed = defaults::kSeed;
    c.nodes_per_wavelength = defaults::kOscNodesPerWavelength;
    switch (e) {
        case Experiment::weyl:
            for (int l = 10; l <= 300; ++l) c.lambda_range.push_back(l);
            break;
        case Experiment::sogge_single:
            c.ell_range = {50, 100, 200, 400, 800};
            c.p_list = {6};
            break;
        case Experiment::cluster_lower:
            c.ell_range = {100, 150, 200, 300, 400, 600, 800};
            c.p_list = {2, 3, 4, 6, 8, 12, std::numeric_limits<double>::infinity()};
            break;
        case Experiment::cluster_upper:
            c.lambda_range = {5, 10, 20, 30, 40, 50};
            c.p_list = {2, 4, 6, 10, std::numeric_limits<double>::infinity()};
            c.trials = 2;
            break;
        case Experiment::wkb_accuracy:
            c.ell_range = {100, 200, 400, 800};
            break;
        case Experiment::phase_sums:
            c.ell_range = {100, 200, 300, 400, 500, 600, 700, 800, 900, 1000};
            c.trials = defaults::kKlTrials;
            break;
        case Experiment::schatten_dual:
            for (int l = 5; l <= 40; ++l) c.lambda_range.push_back(l);
            c.p_list = {4, 6, 10};
            break;
        case Experiment::oscillatory_scaling:
            c.lambda_range = {4, 8, 16, 32, 64};
            c.p_list = {6};
            break;
        case Experiment::kss_compare:
            for (int l = 5; l <= 40; l += 5) c.lambda_range.push_back(l);
            c.p_list = {6};
            break;
        case Experiment::heuristic_compare:
            c.ell_range = {200, 400};
            break;
    }
    return c;
}

}  // namespace sclab::lab
