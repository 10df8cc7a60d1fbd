#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>

#include "json.hpp"

#include "sclab/defaults.hpp"
#include "sclab/experiments.hpp"

namespace sclab::lab {

namespace {
nlohmann::json number(double v) {
    if (std::isfinite(v)) return v;
    return v > 0 ? "inf" : (v < 0 ? "-inf" : "nan");
}
}  // namespace

bool AcceptanceReport::all_pass() const {
    if (checks.empty()) return false;
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string report_json(const AcceptanceReport& r) {
    nlohmann::json j;
    j["schema_version"] = defaults::kSchemaVersion;
    j["experiment"] = r.experiment;
    j["all_pass"] = r.all_pass();
    j["checks"] = nlohmann::json::array();
    for (const auto& c : r.checks) {
        nlohmann::json e;
        e["check"] = c.check;
        e["predicted"] = number(c.predicted);
        e["measured"] = number(c.measured);
        e["tol"] = number(c.tol);
        e["pass"] = c.pass;
        if (!c.note.empty()) e["note"] = c.note;
        j["checks"].push_back(e);
    }
    return j.dump(2) + "\n";
}

void write_outputs(const RunOutput& out, const std::string& prefix) {
    if (prefix.empty()) return;
    const auto dir = std::filesystem::path(prefix).parent_path();
    if (!dir.empty()) std::filesystem::create_directories(dir);
    {
        std::ofstream f(prefix + ".csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + prefix + ".csv");
        f << out.csv;
    }
    std::ofstream f(prefix + ".json", std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + prefix + ".json");
    f << report_json(out.report);
}

}  // namespace sclab::lab
