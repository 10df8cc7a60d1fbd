#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "sclab/coverage.hpp"
#include "sclab/experiments.hpp"
#include "sclab/wkb.hpp"

using namespace sclab;

namespace {

int cmd_run(const std::string& path, const std::string& out) {
    auto cfg = lab::load_config(path);
    if (!out.empty()) cfg.output = out;
    const auto r = lab::run(cfg);
    std::cout << lab::report_json(r.report) << "\n";
    return r.report.all_pass() ? 0 : 1;
}

int cmd_check() {
    int failed = 0;
    for (int id = 1; id <= lab::kCriterionCount; ++id) {
        const auto r = lab::run_criterion(id);
        std::printf("C%-2d %s  %-36s %8.2fs\n", id, r.pass() ? "PASS" : "FAIL", r.title.c_str(), r.seconds);
        for (const auto& c : r.checks)
            if (!c.pass) std::printf("      failed %s: measured %.6g (predicted %.6g, tol %.3g) %s\n", c.check.c_str(),
                                     c.measured, c.predicted, c.tol, c.note.c_str());
        failed += !r.pass();
    }
    return failed == 0 ? 0 : 1;
}

int cmd_dump_wkb(int ell, int m, const std::string& cs, int r, const std::string& out) {
    wkb::ProfileRequest req;
    req.ell = ell;
    req.m = m;
    req.case_tag = wkb::parse_case(cs);
    req.r = r > 0 ? r : wkb::default_r(ell, 0.5);
    const auto csv = wkb::profile_csv(wkb::wkb_approximant(req));
    if (out.empty()) {
        std::cout << csv;
    } else {
        const auto dir = std::filesystem::path(out).parent_path();
        if (!dir.empty()) std::filesystem::create_directories(dir);
        std::ofstream f(out, std::ios::binary);
        if (!f) throw std::runtime_error("cannot open " + out);
        f << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"spectral cluster numerics"};
    app.require_subcommand(1);

    std::string cfg_path, run_out;
    auto* run = app.add_subcommand("run", "run one experiment from a config file");
    run->add_option("config", cfg_path, "key = value config file")->required()->check(CLI::ExistingFile);
    run->add_option("--out", run_out, "output prefix (overrides the config)");

    auto* check = app.add_subcommand("check", "run the acceptance suite");

    int ell = 0, m = 0, r = 0;
    std::string cs = "2", dump_out;
    auto* dump = app.add_subcommand("dump-wkb", "write a WKB profile as CSV");
    dump->add_option("--ell", ell)->required()->check(CLI::PositiveNumber);
    dump->add_option("--m", m)->required()->check(CLI::NonNegativeNumber);
    dump->add_option("--case", cs)->check(CLI::IsMember({"2", "inf"}));
    dump->add_option("--r", r, "window parameter (default ceil(sqrt(ell)))");
    dump->add_option("--out", dump_out);

    CLI11_PARSE(app, argc, argv);
    try {
        if (*run) return cmd_run(cfg_path, run_out);
        if (*check) return cmd_check();
        if (*dump) return cmd_dump_wkb(ell, m, cs, r, dump_out);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
