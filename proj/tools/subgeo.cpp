#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>

#include "subgeo/suite.hpp"

namespace {

constexpr int kExitConfig = 2;

std::optional<std::uint64_t> env_seed() {
    const char* v = std::getenv("SUBGEO_SEED");
    if (!v || !*v) return std::nullopt;
    char* end = nullptr;
    const unsigned long long s = std::strtoull(v, &end, 10);
    if (*end != '\0' || v[0] == '-') throw subgeo::ConfigError("SUBGEO_SEED: expected a non-negative integer");
    return s;
}

void summarize(const subgeo::Report& report) {
    for (const auto& c : report.checks) {
        std::printf("%-14s %-48s residual %-10.3g tol %-8.1e %s\n", subgeo::to_string(c.status).c_str(),
                    c.name.c_str(), c.max_residual, c.tolerance, c.reference.c_str());
        for (const auto& note : c.notes) std::printf("               note: %s\n", note.c_str());
    }
    std::printf("%zu checks: %d pass, %d fail, %d inconclusive, %d premise-failed, %d error; incident rate %.3g\n",
                report.checks.size(), report.count(subgeo::Status::Pass), report.count(subgeo::Status::Fail),
                report.count(subgeo::Status::Inconclusive), report.count(subgeo::Status::PremiseFailed),
                report.count(subgeo::Status::Error), report.incident_rate());
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical verification of statistical submersions"};
    app.require_subcommand(1);

    std::string config_path, report_path, mode, job, csv_path;
    std::optional<int> samples;
    std::optional<std::uint64_t> seed;

    auto* verify = app.add_subcommand("verify", "run the checks of a suite config");
    verify->add_option("config", config_path, "suite config (JSON)")->required();
    verify->add_option("--report", report_path, "write the JSON report here");
    verify->add_option("--mode", mode, "derivative mode")->check(CLI::IsMember({"jet", "fd"}));
    verify->add_option("--samples", samples, "sample points per check")->check(CLI::PositiveNumber);
    verify->add_option("--seed", seed, "sampling seed (overrides SUBGEO_SEED and the config)");

    auto* geodesic = app.add_subcommand("geodesic", "integrate one geodesic job and write its trajectory");
    geodesic->add_option("config", config_path, "suite config (JSON)")->required();
    geodesic->add_option("--job", job, "job name")->required();
    geodesic->add_option("--csv", csv_path, "output CSV")->required();

    auto* list_checks = app.add_subcommand("list-checks", "print the check registry");
    auto* list_builtins = app.add_subcommand("list-builtins", "print the builtin manifolds");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : kExitConfig;
    }

    if (*list_checks) {
        std::cout << subgeo::list_checks_text();
        return 0;
    }
    if (*list_builtins) {
        std::cout << subgeo::list_builtins_text();
        return 0;
    }

    subgeo::SuiteConfig config;
    try {
        config = subgeo::load_config(config_path);
        if (const auto s = env_seed()) config.seed = *s;
        if (seed) config.seed = *seed;
        if (samples) config.samples = *samples;
        if (!mode.empty()) config.mode = mode == "jet" ? subgeo::DiffMode::Jet : subgeo::DiffMode::FiniteDifference;
    } catch (const subgeo::Error& e) {
        std::fprintf(stderr, "subgeo: %s\n", e.what());
        return kExitConfig;
    }

    if (*geodesic) {
        subgeo::Trajectory traj;
        try {
            traj = subgeo::run_geodesic_job(config, job);
        } catch (const subgeo::ConfigError& e) {
            std::fprintf(stderr, "subgeo: %s\n", e.what());
            return kExitConfig;
        } catch (const subgeo::BoundaryExit& e) {
            std::fprintf(stderr, "subgeo: %s (t = %.17g)\n", e.what(), e.time());
            return 1;
        } catch (const subgeo::Error& e) {
            std::fprintf(stderr, "subgeo: %s\n", e.what());
            return 3;
        }
        std::ofstream out(csv_path, std::ios::binary);
        if (!out) {
            std::fprintf(stderr, "subgeo: %s: cannot open for writing\n", csv_path.c_str());
            return kExitConfig;
        }
        subgeo::write_csv(out, traj);
        std::printf("%d nodes written to %s\n", traj.nodes(), csv_path.c_str());
        return 0;
    }

    subgeo::Report report;
    try {
        report = subgeo::run_suite(config);
    } catch (const subgeo::ConfigError& e) {
        std::fprintf(stderr, "subgeo: %s\n", e.what());
        return kExitConfig;
    } catch (const subgeo::Error& e) {
        std::fprintf(stderr, "subgeo: %s\n", e.what());
        return 3;
    }
    summarize(report);
    if (!report_path.empty()) {
        std::ofstream out(report_path, std::ios::binary);
        out << subgeo::report_json(report);
        if (!out) {
            std::fprintf(stderr, "subgeo: %s: cannot write report\n", report_path.c_str());
            return kExitConfig;
        }
    }
    return report.exit_code();
}
