// SPDX-License-Identifier: Apache-2.0
#include "mts/schwarz.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <random>
#include <thread>

namespace mts {

namespace {

VectorC restrict_to_unknowns(const GridField& u, const DiscreteProblem& p) {
    VectorC x(p.num_unknowns());
    for (int row = 0; row < p.num_unknowns(); ++row) {
        x[row] = u[p.unknown_to_node[row]];
    }
    return x;
}

GridField glue(const std::vector<GridField>& locals, const SchwarzContext& ctx) {
    GridField out(*ctx.grid);
    const auto& subs = *ctx.subdomains;
    for (std::size_t j = 0; j < subs.size(); ++j) {
        for (int node : subs[j].nodes) {
            const double chi = ctx.pou->chi(static_cast<int>(j), node);
            if (chi != 0.0) out[node] += chi * locals[j][node];
        }
    }
    return out;
}

std::unordered_map<int, Complex> interface_trace(const GridField& u, const Subdomain& sub) {
    std::unordered_map<int, Complex> g;
    g.reserve(sub.interface_nodes.size());
    for (int node : sub.interface_nodes) g.emplace(node, u[node]);
    return g;
}

// Runs fn(j) for j in [0, count), optionally on worker threads. Results must
// be written to disjoint slots; any exception is rethrown (lowest j first).
void for_each_subdomain(int count, int threads, const std::function<void(int)>& fn) {
    const int workers = std::min(std::max(threads, 1), count);
    if (workers <= 1) {
        for (int j = 0; j < count; ++j) fn(j);
        return;
    }
    std::vector<std::exception_ptr> errors(count);
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (int w = 0; w < workers; ++w) {
        pool.emplace_back([&, w]() {
            for (int j = w; j < count; j += workers) {
                try {
                    fn(j);
                } catch (...) {
                    errors[j] = std::current_exception();
                }
            }
        });
    }
    for (std::thread& t : pool) t.join();
    for (int j = 0; j < count; ++j) {
        if (errors[j]) std::rethrow_exception(errors[j]);
    }
}

double median(std::vector<double> v) {
    std::sort(v.begin(), v.end());
    const std::size_t n = v.size();
    return (n % 2 == 1) ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

}  // namespace

GridField initial_guess(const InitialGuess& spec, const GlobalGrid& grid) {
    switch (spec.kind) {
        case InitialGuess::Kind::zero:
            return GridField(grid);
        case InitialGuess::Kind::given: {
            require(spec.given.has_value(), "initial guess kind 'given' needs a field");
            require(&spec.given->grid() == &grid, "initial guess field lives on another grid");
            return *spec.given;
        }
        case InitialGuess::Kind::uniform_random: {
            require(spec.lo <= spec.hi, "uniform_random needs lo <= hi");
            GridField u(grid);
            std::mt19937_64 rng(spec.seed);
            for (int node : grid.domain_nodes()) {
                // 53-bit mantissa draw in [0, 1); identical on every platform.
                const double t = static_cast<double>(rng() >> 11) * 0x1.0p-53;
                u[node] = Complex{spec.lo + (spec.hi - spec.lo) * t, 0.0};
            }
            return u;
        }
    }
    throw std::logic_error("unreachable initial guess kind");
}

SchwarzContext make_context(const GlobalGrid& grid, const std::vector<Subdomain>& subdomains,
                            const PartitionOfUnity& pou, double omega, const GridField& f,
                            const SolverOptions& options) {
    require(!subdomains.empty(), "need at least one subdomain");
    require(pou.num_subdomains() == static_cast<int>(subdomains.size()),
            "partition of unity does not match the decomposition");
    SchwarzContext ctx{&grid, &subdomains, &pou, omega, f, {}, factor(assemble_global(grid, omega, f)),
                       std::nullopt, {}, options};
    ctx.local_factor.reserve(subdomains.size());
    for (const Subdomain& sub : subdomains) {
        ctx.local_factor.push_back(factor(assemble_local(grid, sub, omega)));
    }
    if (options.record_error_norms) {
        const DiscreteProblem& gp = ctx.global_problem();
        const VectorC x = ctx.global_factor.solve(gp.rhs);
        GridField ref(grid);
        for (int row = 0; row < gp.num_unknowns(); ++row) {
            ref[gp.unknown_to_node[row]] = x[row];
        }
        ctx.reference = std::move(ref);
    }
    // Rows of interior nodes covered by at least two subdomains; the glued
    // iterate's residual is supported there (elsewhere some chi_j = 1 and the
    // local solve already satisfies the equation).
    for (int node : grid.interior_nodes()) {
        int covered = 0;
        for (const Subdomain& sub : subdomains) {
            if (sub.contains(node) && ++covered == 2) break;
        }
        if (covered >= 2) ctx.overlap_rows.push_back(ctx.global_problem().node_to_unknown[node]);
    }
    return ctx;
}

SchwarzState initial_state(const SchwarzContext& ctx, const GridField& u0) {
    require(&u0.grid() == ctx.grid, "initial guess lives on another grid");
    SchwarzState state{0, u0, {}};
    state.u_local.reserve(ctx.subdomains->size());
    for (const Subdomain& sub : *ctx.subdomains) {
        GridField local(*ctx.grid);
        for (int node : sub.nodes) local[node] = u0[node];
        state.u_local.push_back(std::move(local));
    }
    return state;
}

SchwarzState schwarz_step(const SchwarzState& state, const SchwarzContext& ctx) {
    const auto& subs = *ctx.subdomains;
    const int J = static_cast<int>(subs.size());
    std::vector<GridField> locals(J, GridField(*ctx.grid));
    for_each_subdomain(J, ctx.options.threads, [&](int j) {
        const auto g = interface_trace(state.u_glob, subs[j]);
        locals[j] = solve_dirichlet(ctx.local_factor[j], ctx.f, g);
    });
    SchwarzState next{state.n + 1, glue(locals, ctx), std::move(locals)};
    return next;
}

SchwarzState alternating_step(const SchwarzState& state, const SchwarzContext& ctx) {
    const auto& subs = *ctx.subdomains;
    SchwarzState next{state.n + 1, state.u_glob, state.u_local};
    for (std::size_t j = 0; j < subs.size(); ++j) {
        const auto g = interface_trace(next.u_glob, subs[j]);
        next.u_local[j] = solve_dirichlet(ctx.local_factor[j], ctx.f, g);
        next.u_glob = glue(next.u_local, ctx);
    }
    return next;
}

namespace {

double residual_norm(const GridField& u_glob, const SchwarzContext& ctx,
                     const std::vector<int>* rows) {
    const DiscreteProblem& p = ctx.global_problem();
    const VectorC r = p.A * restrict_to_unknowns(u_glob, p) - p.rhs;
    if (rows == nullptr) return r.norm();
    double acc = 0.0;
    for (int row : *rows) acc += std::norm(r[row]);
    return std::sqrt(acc);
}

}  // namespace

double interface_residual(const GridField& u_glob, const SchwarzContext& ctx) {
    if (ctx.overlap_rows.empty()) return residual_norm(u_glob, ctx, nullptr);
    return residual_norm(u_glob, ctx, &ctx.overlap_rows);
}

double global_residual(const GridField& u_glob, const SchwarzContext& ctx) {
    return residual_norm(u_glob, ctx, nullptr);
}

std::vector<double> error_maxnorms(const SchwarzState& state, const SchwarzContext& ctx) {
    if (!ctx.reference) return {};
    std::vector<double> norms;
    norms.reserve(ctx.subdomains->size());
    for (std::size_t j = 0; j < ctx.subdomains->size(); ++j) {
        const Subdomain& sub = (*ctx.subdomains)[j];
        double m = 0.0;
        for (int node : sub.nodes) {
            m = std::max(m, std::abs((*ctx.reference)[node] - state.u_local[j][node]));
        }
        norms.push_back(m);
    }
    return norms;
}

GridField error_field(const SchwarzState& state, const SchwarzContext& ctx, int j) {
    require(ctx.reference.has_value(), "error fields need record_error_norms = true");
    const Subdomain& sub = (*ctx.subdomains)[j];
    GridField e(*ctx.grid);
    for (int node : sub.nodes) {
        e[node] = (*ctx.reference)[node] - state.u_local[j][node];
    }
    return e;
}

std::vector<double> history_error_series(const IterationHistory& history) {
    std::vector<double> series;
    series.reserve(history.records.size());
    for (const IterationRecord& r : history.records) {
        if (r.error_maxnorm.empty()) {
            series.push_back(r.interface_residual);
        } else {
            series.push_back(*std::max_element(r.error_maxnorm.begin(), r.error_maxnorm.end()));
        }
    }
    return series;
}

double gamma_estimate(const std::vector<double>& series) {
    std::vector<double> ratios;
    for (std::size_t n = 0; n + 1 < series.size(); ++n) {
        if (series[n] > 0.0 && std::isfinite(series[n]) && std::isfinite(series[n + 1])) {
            ratios.push_back(series[n + 1] / series[n]);
        }
    }
    if (ratios.empty()) return std::numeric_limits<double>::quiet_NaN();
    if (ratios.size() > 10) ratios.erase(ratios.begin(), ratios.end() - 10);
    return median(std::move(ratios));
}

void append_record(IterationHistory& history, const SchwarzState& state,
                   const SchwarzContext& ctx) {
    IterationRecord rec;
    rec.n = state.n;
    rec.interface_residual = interface_residual(state.u_glob, ctx);
    rec.global_residual = global_residual(state.u_glob, ctx);
    rec.error_maxnorm = error_maxnorms(state, ctx);
    history.records.push_back(std::move(rec));
    history.records.back().gamma_hat = gamma_estimate(history_error_series(history));
}

SchwarzResult run_schwarz(const GlobalGrid& grid, const std::vector<Subdomain>& subdomains,
                          const PartitionOfUnity& pou, double omega, const GridField& f,
                          const InitialGuess& init, const SolverOptions& options) {
    const SchwarzContext ctx = make_context(grid, subdomains, pou, omega, f, options);
    SchwarzState state = initial_state(ctx, initial_guess(init, grid));
    IterationHistory history;
    append_record(history, state, ctx);

    SolveStatus status = SolveStatus::max_iterations;
    while (true) {
        if (history.records.back().interface_residual <= options.tol) {
            status = SolveStatus::converged;
            break;
        }
        if (state.n >= options.max_iter) break;
        state = schwarz_step(state, ctx);
        append_record(history, state, ctx);
    }

    SchwarzResult result{std::move(state.u_glob), std::move(history), status, state.n, 0.0,
                         ctx.reference};
    result.gamma_hat = gamma_estimate(history_error_series(result.history));
    return result;
}

GridField monolithic_solve(const GlobalGrid& grid, double omega, const GridField& f) {
    const Factorization F = factor(assemble_global(grid, omega, f));
    const DiscreteProblem& p = F.problem();
    const VectorC x = F.solve(p.rhs);

    // Backward-error sanity check; a violation signals an assembly bug.
    // Row-sum bound: |diag| + four off-diagonal legs of 1/h^2.
    const double inv_h2 = 1.0 / (p.h * p.h);
    const double norm_a = 4.0 * inv_h2 + std::abs(Complex{-4.0 * inv_h2, -omega});
    const double r = (p.A * x - p.rhs).lpNorm<Eigen::Infinity>();
    const double scale =
        norm_a * x.lpNorm<Eigen::Infinity>() + p.rhs.lpNorm<Eigen::Infinity>();
    if (scale > 0.0 && r > 1e-10 * scale) {
        throw std::runtime_error("monolithic solve residual " + std::to_string(r) +
                                 " exceeds the backward-error bound");
    }

    GridField u(grid);
    for (int row = 0; row < p.num_unknowns(); ++row) {
        u[p.unknown_to_node[row]] = x[row];
    }
    return u;
}

}  // namespace mts
