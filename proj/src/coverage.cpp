#include "sclab/coverage.hpp"

#include <mutex>

namespace sclab::coverage {

namespace {
std::mutex& lock() {
    static std::mutex m;
    return m;
}
std::set<std::string>& store() {
    static std::set<std::string> s;
    return s;
}
}  // namespace

void mark(const std::string& op) {
    std::lock_guard<std::mutex> g(lock());
    store().insert(op);
}

std::set<std::string> touched() {
    std::lock_guard<std::mutex> g(lock());
    return store();
}

const std::vector<std::string>& manifest() {
    static const std::vector<std::string> ops = {
        "sphere_basis.legendre_band",
        "sphere_basis.legendre_at_zero",
        "sphere_basis.build_grid",
        "sphere_basis.weyl_count",
        "sphere_basis.cluster_rank",
        "wkb_engine.q_potential",
        "wkb_engine.action_integral",
        "wkb_engine.wkb_approximant",
        "wkb_engine.wkb_error_functional",
        "expsum.kuzmin_landau_bound",
        "expsum.exp_sum",
        "expsum.cluster_phase_sum",
        "cluster_density.density",
        "cluster_density.lp_norm",
        "cluster_density.exponents",
        "cluster_density.concentration_measure",
        "cluster_density.heuristic_density",
        "schatten_lab.projector_gram",
        "schatten_lab.schatten_norm",
        "schatten_lab.oscillatory_operator",
        "schatten_lab.kss_bound",
        "experiments_cli.run",
        "experiments_cli.fit_slope",
    };
    return ops;
}

std::vector<std::string> missing() {
    const auto t = touched();
    std::vector<std::string> out;
    for (const auto& op : manifest())
        if (!t.count(op)) out.push_back(op);
    return out;
}

}  // namespace sclab::coverage
