// Runs every acceptance criterion and prints one line per criterion.
#include <cstdio>

#include "sclab/coverage.hpp"
#include "sclab/experiments.hpp"

int main() {
    using namespace sclab;
    int failed = 0;
    for (int id = 1; id <= lab::kCriterionCount; ++id) {
        lab::CriterionResult r;
        try {
            r = lab::run_criterion(id);
        } catch (const std::exception& e) {
            std::printf("C%-2d FAIL  exception: %s\n", id, e.what());
            ++failed;
            continue;
        }
        std::string detail;
        for (const auto& c : r.checks) {
            char buf[256];
            std::snprintf(buf, sizeof buf, "%s%s=%.4g(%s)", detail.empty() ? "" : "; ", c.check.c_str(), c.measured,
                          c.pass ? "ok" : "FAIL");
            detail += buf;
        }
        char budget[48] = "";
        if (r.budget_seconds > 0) std::snprintf(budget, sizeof budget, " / %.0fs", r.budget_seconds);
        std::printf("C%-2d %s  %s [%.2fs%s]  %s\n", id, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.seconds, budget,
                    detail.c_str());
        for (const auto& c : r.checks)
            if (!c.pass)
                std::printf("      %s: measured %.6g predicted %.6g tol %.3g %s\n", c.check.c_str(), c.measured,
                            c.predicted, c.tol, c.note.c_str());
        std::fflush(stdout);
        failed += !r.pass();
    }
    const auto missing = coverage::missing();
    std::printf("coverage %s  %zu/%zu operations exercised\n", missing.empty() ? "PASS" : "FAIL",
                coverage::manifest().size() - missing.size(), coverage::manifest().size());
    for (const auto& m : missing) std::printf("      not exercised: %s\n", m.c_str());
    failed += !missing.empty();
    std::printf("%s: %d failing\n", failed ? "ACCEPTANCE FAILED" : "ACCEPTANCE PASSED", failed);
    return failed ? 1 : 0;
}
