// SPDX-License-Identifier: Apache-2.0
#include "mts/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "mts/expressions.hpp"

namespace mts {

namespace {

namespace fs = std::filesystem;

std::string join(const std::string& dir, const std::string& file) {
    return (fs::path(dir) / file).string();
}

void ensure_dir(const std::string& dir) {
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create output directory '" + dir + "'");
}

std::string status_str(SolveStatus s) {
    return s == SolveStatus::converged ? "converged" : "max_iterations";
}

GridField modulus_field(const GridField& f) {
    GridField out(f.grid());
    for (int node : f.grid().domain_nodes()) {
        out[node] = Complex{std::abs(f[node]), 0.0};
    }
    return out;
}

std::string two_digit(int n) {
    char buf[8];
    std::snprintf(buf, sizeof(buf), "%02d", n);
    return buf;
}

// Shared manifest block for the fixed two-square experiments. Thread counts
// are deliberately not recorded: outputs are identical for any thread count.
std::vector<std::pair<std::string, std::string>> two_square_manifest(std::uint64_t seed) {
    return {
        {"domain.rects", "0 0 1 1 ; 1 0 2 1"},
        {"grid.points_per_unit", "30"},
        {"grid.h", "1/29"},
        {"geometry.note",
         "30x30 nodes per unit square; the squares share the node column at x = 1 "
         "(59x30 lattice)"},
        {"tiling.rects", "0 0 1 1 ; 1 0 2 1"},
        {"problem.omega", "1"},
        {"source.mode", "rhs_zero"},
        {"init.kind", "uniform_random"},
        {"init.lo", "0"},
        {"init.hi", "1"},
        {"init.seed", std::to_string(seed)},
    };
}

}  // namespace

BuiltGeometry build_geometry(const RunConfig& config) {
    GlobalGrid grid = build_grid(config.domain, config.resolved_h());
    std::vector<Subdomain> subdomains = decompose(grid, config.resolved_tiling(), config.overlap);
    PartitionOfUnity pou = build_partition_of_unity(grid, subdomains);
    return {std::move(grid), std::move(subdomains), std::move(pou)};
}

BuiltGeometry two_square_geometry(int overlap) {
    RunConfig cfg;
    cfg.domain = {{0.0, 0.0, 1.0, 1.0}, {1.0, 0.0, 2.0, 1.0}};
    cfg.points_per_unit = 30;
    cfg.overlap = overlap;
    return build_geometry(cfg);
}

int cmd_solve(const std::string& config_path, const CliOverrides& overrides) {
    RunConfig cfg;
    try {
        cfg = parse_config_file(config_path);
        apply_overrides(cfg, overrides);
    } catch (const std::exception& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    }

    try {
        const BuiltGeometry geo = build_geometry(cfg);
        const GlobalGrid& grid = geo.grid;

        GridField f(grid);
        std::optional<SourceSpec> source;
        if (cfg.source == SourceMode::manufactured) {
            f = manufactured_rhs(grid, cfg.omega);
        } else if (cfg.source == SourceMode::currents) {
            source = SourceSpec{sample_expression(grid, cfg.jx_id),
                                sample_expression(grid, cfg.jz_id)};
            f = source_to_rhs(*source, grid);
        }

        SolverOptions options;
        options.tol = cfg.tol;
        options.max_iter = cfg.max_iter;
        options.threads = cfg.threads;
        const SchwarzResult result =
            run_schwarz(grid, geo.subdomains, geo.pou, cfg.omega, f, cfg.init, options);

        ensure_dir(cfg.output_dir);
        write_field_csv(join(cfg.output_dir, "solution.csv"), result.solution);
        write_history_csv(join(cfg.output_dir, "history.csv"), result.history,
                          static_cast<int>(geo.subdomains.size()));
        write_decomposition_csv(join(cfg.output_dir, "decomposition.csv"), grid, geo.subdomains,
                                geo.pou);
        if (source) {
            const auto [ex, ez] = recover_electric_field(result.solution, *source, grid);
            write_field_csv(join(cfg.output_dir, "e_x.csv"), ex);
            write_field_csv(join(cfg.output_dir, "e_z.csv"), ez);
        }

        std::vector<std::pair<std::string, std::string>> manifest = cfg.entries;
        manifest.emplace_back("grid.resolved_h", fmt_double(grid.spacing()));
        manifest.emplace_back("grid.nx", std::to_string(grid.nx()));
        manifest.emplace_back("grid.nz", std::to_string(grid.nz()));
        manifest.emplace_back("decomposition.num_subdomains",
                              std::to_string(geo.subdomains.size()));
        manifest.emplace_back("result.status", status_str(result.status));
        manifest.emplace_back("result.iterations", std::to_string(result.iterations));
        manifest.emplace_back("result.gamma_hat", fmt_double(result.gamma_hat));
        const IterationRecord& last = result.history.records.back();
        manifest.emplace_back("result.interface_residual", fmt_double(last.interface_residual));
        manifest.emplace_back("result.global_residual", fmt_double(last.global_residual));
        if (!last.error_maxnorm.empty()) {
            manifest.emplace_back(
                "result.error_vs_monolithic_maxnorm",
                fmt_double(*std::max_element(last.error_maxnorm.begin(),
                                             last.error_maxnorm.end())));
        }
        if (cfg.source == SourceMode::manufactured) {
            const GridField exact = manufactured_solution(grid);
            double err = 0.0;
            for (int node : grid.domain_nodes()) {
                err = std::max(err, std::abs(result.solution[node] - exact[node]));
            }
            manifest.emplace_back("result.manufactured_error_maxnorm", fmt_double(err));
        }
        write_manifest(join(cfg.output_dir, "manifest.txt"), manifest);

        return result.status == SolveStatus::converged ? 0 : 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

Fig2Data run_fig2(std::uint64_t seed, const std::string& out_dir, int threads) {
    constexpr int kSteps = 15;
    const BuiltGeometry geo = two_square_geometry(6);
    const GlobalGrid& grid = geo.grid;

    SolverOptions options;
    options.threads = threads;
    const SchwarzContext ctx = make_context(grid, geo.subdomains, geo.pou, 1.0, GridField(grid),
                                            options);

    InitialGuess init;
    init.kind = InitialGuess::Kind::uniform_random;
    init.seed = seed;
    SchwarzState state = initial_state(ctx, initial_guess(init, grid));

    Fig2Data data;
    append_record(data.history, state, ctx);
    ensure_dir(out_dir);

    for (int n = 1; n <= kSteps; ++n) {
        state = schwarz_step(state, ctx);
        append_record(data.history, state, ctx);
        for (std::size_t j = 0; j < geo.subdomains.size(); ++j) {
            MaxModulusEntry entry = check_max_modulus(error_field(state, ctx, static_cast<int>(j)),
                                                      geo.subdomains[j],
                                                      geo.pou.support(static_cast<int>(j)));
            entry.n = n;
            data.report.entries.push_back(entry);
        }
        if (n == 1 || n == 5 || n == 15) {
            const GridField mod = modulus_field(error_field(state, ctx, 0));
            write_field_csv(join(out_dir, "fig2_error_modulus_n" + two_digit(n) + ".csv"), mod,
                            geo.subdomains[0].nodes);
            const std::size_t slot = n == 1 ? 0 : (n == 5 ? 1 : 2);
            data.left_maxima[slot] = max_abs_over(mod, geo.subdomains[0].nodes);
        }
    }

    write_max_modulus_csv(join(out_dir, "fig2_max_modulus.csv"), data.report);
    write_history_csv(join(out_dir, "fig2_history.csv"), data.history,
                      static_cast<int>(geo.subdomains.size()));
    write_decomposition_csv(join(out_dir, "fig2_decomposition.csv"), grid, geo.subdomains,
                            geo.pou);
    auto manifest = two_square_manifest(seed);
    manifest.emplace_back("schwarz.d", "6");
    manifest.emplace_back("run.steps", std::to_string(kSteps));
    manifest.emplace_back("run.snapshots", "1 5 15");
    write_manifest(join(out_dir, "fig2_manifest.txt"), manifest);
    return data;
}

int cmd_fig2(std::uint64_t seed, const std::string& out_dir, int threads) {
    try {
        run_fig2(seed, out_dir, threads);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

Fig3Data run_fig3(std::uint64_t seed, const std::string& out_dir, int threads) {
    constexpr int kSteps = 60;
    Fig3Data data;
    data.overlaps = {2, 4, 6};
    ensure_dir(out_dir);

    for (int d : data.overlaps) {
        const BuiltGeometry geo = two_square_geometry(d);
        const GlobalGrid& grid = geo.grid;
        SolverOptions options;
        options.threads = threads;
        const SchwarzContext ctx = make_context(grid, geo.subdomains, geo.pou, 1.0,
                                                GridField(grid), options);
        InitialGuess init;
        init.kind = InitialGuess::Kind::uniform_random;
        init.seed = seed;
        SchwarzState state = initial_state(ctx, initial_guess(init, grid));

        IterationHistory history;
        append_record(history, state, ctx);
        for (int n = 1; n <= kSteps; ++n) {
            state = schwarz_step(state, ctx);
            append_record(history, state, ctx);
        }

        std::vector<double> residuals;
        residuals.reserve(history.records.size());
        for (const IterationRecord& r : history.records) {
            residuals.push_back(r.interface_residual);
        }
        data.residuals.push_back(std::move(residuals));
        data.gamma_hats.push_back(estimate_contraction(history));
        write_history_csv(join(out_dir, "fig3_history_d" + std::to_string(d) + ".csv"), history,
                          static_cast<int>(geo.subdomains.size()));
    }

    {
        std::ofstream out(join(out_dir, "fig3_residuals.csv"));
        if (!out) throw std::runtime_error("cannot open fig3_residuals.csv for writing");
        out << "n";
        for (int d : data.overlaps) out << ",residual_d" << d;
        out << '\n';
        for (int n = 0; n <= kSteps; ++n) {
            out << n;
            for (std::size_t c = 0; c < data.overlaps.size(); ++c) {
                out << ',' << fmt_double(data.residuals[c][n]);
            }
            out << '\n';
        }
    }
    {
        std::ofstream out(join(out_dir, "fig3_gamma.csv"));
        if (!out) throw std::runtime_error("cannot open fig3_gamma.csv for writing");
        out << "d,gamma_hat\n";
        for (std::size_t c = 0; c < data.overlaps.size(); ++c) {
            out << data.overlaps[c] << ',' << fmt_double(data.gamma_hats[c]) << '\n';
        }
    }
    auto manifest = two_square_manifest(seed);
    manifest.emplace_back("schwarz.d_values", "2 4 6");
    manifest.emplace_back("run.steps", std::to_string(kSteps));
    write_manifest(join(out_dir, "fig3_manifest.txt"), manifest);
    return data;
}

int cmd_fig3(std::uint64_t seed, const std::string& out_dir, int threads) {
    try {
        run_fig3(seed, out_dir, threads);
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}

int cmd_export_matrix(const std::string& config_path, const std::string& out_path) {
    try {
        const RunConfig cfg = parse_config_file(config_path);
        const GlobalGrid grid = build_grid(cfg.domain, cfg.resolved_h());
        const DiscreteProblem problem = assemble_global(grid, cfg.omega, GridField(grid));
        write_matrix_market(out_path, problem.A,
                            "five-point Delta_h - i*omega*I, h = " + fmt_double(grid.spacing()) +
                                ", omega = " + fmt_double(cfg.omega) + ", " +
                                std::to_string(grid.nx()) + "x" + std::to_string(grid.nz()) +
                                " lattice");
        return 0;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << " (" << out_path << ")\n";
        return 1;
    }
}

}  // namespace mts
