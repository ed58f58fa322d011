// SPDX-License-Identifier: Apache-2.0
//
// Command-line front end for the magnetotelluric Schwarz solver.
//
//   mtschwarz solve --config run.cfg [--seed N --tol X --max-iter N --out DIR --threads N]
//   mtschwarz fig2  [--seed N --out DIR --threads N]
//   mtschwarz fig3  [--seed N --out DIR --threads N]
//   mtschwarz export-matrix --config run.cfg --out matrix.mtx
//
// Exit codes: 0 success/converged, 2 stopped at max_iter, 1 configuration or
// usage error.

#include <CLI11.hpp>
#include <iostream>

#include "mts/experiments.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Parallel overlapping Schwarz solver for Delta u - i*omega*u = f"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir = ".";
    std::string out_path;
    std::uint64_t seed = 42;
    int threads = 1;
    mts::CliOverrides overrides;
    double tol = 0.0;
    int max_iter = 0;

    CLI::App* solve = app.add_subcommand("solve", "run a configured Schwarz solve");
    solve->add_option("--config", config_path, "configuration file")->required();
    auto* seed_opt = solve->add_option("--seed", seed, "override init.seed");
    auto* tol_opt = solve->add_option("--tol", tol, "override schwarz.tol");
    auto* iter_opt = solve->add_option("--max-iter", max_iter, "override schwarz.max_iter");
    auto* out_opt = solve->add_option("--out", out_dir, "override output.dir");
    auto* thr_opt = solve->add_option("--threads", threads, "override schwarz.threads");

    CLI::App* fig2 = app.add_subcommand("fig2", "two-square error-decay experiment");
    fig2->add_option("--seed", seed, "seed for the random initial error");
    fig2->add_option("--out", out_dir, "output directory");
    fig2->add_option("--threads", threads, "worker threads for subdomain solves");

    CLI::App* fig3 = app.add_subcommand("fig3", "two-square residual-decay experiment (d = 2, 4, 6)");
    fig3->add_option("--seed", seed, "seed for the random initial error");
    fig3->add_option("--out", out_dir, "output directory");
    fig3->add_option("--threads", threads, "worker threads for subdomain solves");

    CLI::App* exportm = app.add_subcommand("export-matrix", "write the global operator as Matrix Market");
    exportm->add_option("--config", config_path, "configuration file")->required();
    exportm->add_option("--out", out_path, "output file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 1;
    }

    if (solve->parsed()) {
        if (!seed_opt->empty()) overrides.seed = seed;
        if (!tol_opt->empty()) overrides.tol = tol;
        if (!iter_opt->empty()) overrides.max_iter = max_iter;
        if (!out_opt->empty()) overrides.out = out_dir;
        if (!thr_opt->empty()) overrides.threads = threads;
        return mts::cmd_solve(config_path, overrides);
    }
    if (fig2->parsed()) return mts::cmd_fig2(seed, out_dir, threads);
    if (fig3->parsed()) return mts::cmd_fig3(seed, out_dir, threads);
    if (exportm->parsed()) return mts::cmd_export_matrix(config_path, out_path);

    std::cerr << app.help();
    return 1;
}
