// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "mts/discretization.hpp"
#include "mts/local_solver.hpp"

namespace mts {

/// Initial global iterate. uniform_random draws real values in [lo, hi]
/// (imaginary parts 0), one per domain node in node-index order, from a
/// seeded generator; results are reproducible bit-for-bit.
struct InitialGuess {
    enum class Kind { zero, uniform_random, given };
    Kind kind = Kind::zero;
    double lo = 0.0;
    double hi = 1.0;
    std::uint64_t seed = 0;
    std::optional<GridField> given;
};

GridField initial_guess(const InitialGuess& spec, const GlobalGrid& grid);

struct IterationRecord {
    int n = 0;
    double interface_residual = 0.0;  ///< 2-norm of A u - f on the overlap-zone rows
    double global_residual = 0.0;     ///< 2-norm of A u - f on all interior rows
    std::vector<double> error_maxnorm;  ///< per subdomain, vs the monolithic solution
    double gamma_hat = 0.0;             ///< running contraction estimate (NaN until defined)
};

struct IterationHistory {
    std::vector<IterationRecord> records;
};

struct SolverOptions {
    double tol = 1e-10;
    int max_iter = 200;
    int threads = 1;  ///< worker threads for the per-step subdomain solves
    bool record_error_norms = true;
};

enum class SolveStatus { converged, max_iterations };

/// Immutable per-run data: factored subdomain problems, the assembled global
/// problem, the monolithic reference solution, and the residual row sets.
/// Subdomain solves within a step only read this context, so they may run
/// concurrently; results are independent of the thread schedule.
struct SchwarzContext {
    const GlobalGrid* grid = nullptr;
    const std::vector<Subdomain>* subdomains = nullptr;
    const PartitionOfUnity* pou = nullptr;
    double omega = 0.0;
    GridField f;
    std::vector<Factorization> local_factor;
    Factorization global_factor;  ///< owns the global DiscreteProblem (A, rhs)
    std::optional<GridField> reference;
    std::vector<int> overlap_rows;  ///< unknown rows of nodes covered by >= 2 subdomains
    SolverOptions options;

    const DiscreteProblem& global_problem() const { return global_factor.problem(); }
};

SchwarzContext make_context(const GlobalGrid& grid, const std::vector<Subdomain>& subdomains,
                            const PartitionOfUnity& pou, double omega, const GridField& f,
                            const SolverOptions& options = {});

/// Iteration state. u_glob is the glued global iterate; u_local[j] the latest
/// subdomain field (at n = 0: the initial guess restricted to each
/// subdomain). After every glue, u_glob(p) = sum_j chi_j(p) u_local[j](p).
struct SchwarzState {
    int n = 0;
    GridField u_glob;
    std::vector<GridField> u_local;
};

SchwarzState initial_state(const SchwarzContext& ctx, const GridField& u0);

/// One parallel step: every subdomain is solved with interface data taken
/// from the same previous global iterate, then the locals are glued with the
/// partition of unity (ascending subdomain id, so the result is independent
/// of the solve schedule).
SchwarzState schwarz_step(const SchwarzState& state, const SchwarzContext& ctx);

/// Sequential variant: subdomains are solved in ascending id order, each one
/// reading the freshest glued iterate.
SchwarzState alternating_step(const SchwarzState& state, const SchwarzContext& ctx);

/// 2-norm of (A u - f) restricted to interior nodes covered by at least two
/// subdomains; falls back to the full residual when no node is multi-covered
/// (single-subdomain decompositions).
double interface_residual(const GridField& u_glob, const SchwarzContext& ctx);

double global_residual(const GridField& u_glob, const SchwarzContext& ctx);

/// Max-norm of (reference - u_local[j]) over each subdomain's node set.
/// Empty when the context records no reference.
std::vector<double> error_maxnorms(const SchwarzState& state, const SchwarzContext& ctx);

/// reference - u_local[j] on the subdomain's nodes, zero elsewhere.
GridField error_field(const SchwarzState& state, const SchwarzContext& ctx, int j);

/// Computes residuals, error norms and the running contraction estimate for
/// the current state and appends them to the history.
void append_record(IterationHistory& history, const SchwarzState& state,
                   const SchwarzContext& ctx);

/// E_n sequence a history describes: max over subdomains of the error
/// max-norms when recorded, the interface residual otherwise.
std::vector<double> history_error_series(const IterationHistory& history);

/// Median of the last (up to) ten consecutive ratios E_{n+1}/E_n; NaN when no
/// valid ratio exists.
double gamma_estimate(const std::vector<double>& series);

struct SchwarzResult {
    GridField solution;
    IterationHistory history;
    SolveStatus status = SolveStatus::converged;
    int iterations = 0;
    double gamma_hat = 0.0;
    std::optional<GridField> reference;
};

/// Runs the parallel Schwarz iteration until the interface residual drops to
/// options.tol or options.max_iter steps have been taken. Non-convergence is
/// reported through the status flag, not an exception.
SchwarzResult run_schwarz(const GlobalGrid& grid, const std::vector<Subdomain>& subdomains,
                          const PartitionOfUnity& pou, double omega, const GridField& f,
                          const InitialGuess& init, const SolverOptions& options = {});

/// Direct solve of the undecomposed global problem; the oracle the Schwarz
/// iterates are measured against. Verifies its own residual.
GridField monolithic_solve(const GlobalGrid& grid, double omega, const GridField& f);

}  // namespace mts
