// SPDX-License-Identifier: Apache-2.0
//
// Acceptance suite: runs every shipping criterion end to end and prints one
// PASS/FAIL line per criterion. Exit code is the number of failures.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <sstream>
#include <vector>

#include "mts/diagnostics.hpp"
#include "mts/experiments.hpp"
#include "mts/expressions.hpp"

using namespace mts;
namespace fs = std::filesystem;

namespace {

struct Criterion {
    std::string name;
    std::function<std::string()> run;  // returns detail text; throws on failure
};

struct Failure : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void expect(bool cond, const std::string& what) {
    if (!cond) throw Failure(what);
}

double elapsed_s(const std::chrono::steady_clock::time_point& t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("mts_acceptance_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    expect(bool(in), "missing file " + p.string());
    std::ostringstream buf;
    buf << in.rdbuf();
    return buf.str();
}

void expect_identical_dirs(const fs::path& a, const fs::path& b, const std::string& what) {
    std::vector<fs::path> names;
    for (const auto& entry : fs::directory_iterator(a)) {
        names.push_back(entry.path().filename());
    }
    std::sort(names.begin(), names.end());
    expect(!names.empty(), what + ": no output files");
    for (const fs::path& name : names) {
        expect(fs::exists(b / name), what + ": missing " + name.string());
        expect(slurp(a / name) == slurp(b / name), what + ": " + name.string() + " differs");
    }
}

double manufactured_error(double h) {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, h);
    const GridField u = monolithic_solve(g, 1.0, manufactured_rhs(g, 1.0));
    const GridField exact = manufactured_solution(g);
    double err = 0.0;
    for (int node : g.domain_nodes()) err = std::max(err, std::abs(u[node] - exact[node]));
    return err;
}

constexpr std::uint64_t kSeed = 42;

// --- criteria ---------------------------------------------------------------

std::string criterion_discretization_order() {
    const auto t0 = std::chrono::steady_clock::now();
    const double ratio = manufactured_error(1.0 / 16.0) / manufactured_error(1.0 / 32.0);
    const double t = elapsed_s(t0);
    expect(ratio >= 3.4 && ratio <= 4.6,
           "error ratio " + fmt(ratio) + " outside [3.4, 4.6]");
    expect(t < 5.0, "runtime " + fmt(t) + "s exceeds 5s");
    return "h=1/16 -> 1/32 error ratio " + fmt(ratio) + ", " + fmt(t) + "s";
}

std::string criterion_oracle_equivalence() {
    const auto t0 = std::chrono::steady_clock::now();
    const BuiltGeometry geo = two_square_geometry(6);
    const SourceSpec src{sample_expression(geo.grid, "sine_product"),
                         sample_expression(geo.grid, "sin_pi_x")};
    const GridField f = source_to_rhs(src, geo.grid);
    expect(max_abs(f) > 0.1, "right-hand side unexpectedly small");

    SolverOptions options;
    options.tol = 1e-10;
    const SchwarzResult r =
        run_schwarz(geo.grid, geo.subdomains, geo.pou, 1.0, f, InitialGuess{}, options);
    expect(r.status == SolveStatus::converged, "did not reach tol 1e-10");
    const GridField mono = monolithic_solve(geo.grid, 1.0, f);
    double diff = 0.0;
    for (int node : geo.grid.domain_nodes()) {
        diff = std::max(diff, std::abs(r.solution[node] - mono[node]));
    }
    const double t = elapsed_s(t0);
    expect(diff <= 1e-8, "max-norm gap to monolithic " + fmt(diff) + " exceeds 1e-8");
    expect(t < 30.0, "runtime " + fmt(t) + "s exceeds 30s");
    return "gap " + fmt(diff) + " after " + std::to_string(r.iterations) + " iterations, " +
           fmt(t) + "s";
}

std::string criterion_fig2() {
    const fs::path dir = fresh_dir("fig2");
    const Fig2Data data = run_fig2(kSeed, dir.string(), 1);
    for (const MaxModulusEntry& e : data.report.entries) {
        if (e.j != 1 || (e.n != 1 && e.n != 5 && e.n != 15)) continue;
        expect(!e.violation, "violation flag set at n = " + std::to_string(e.n));
        expect(e.max_interior <= e.max_interface * (1.0 + 1e-12),
               "interior max exceeds interface max at n = " + std::to_string(e.n));
    }
    expect(data.left_maxima[0] > data.left_maxima[1] &&
               data.left_maxima[1] > data.left_maxima[2],
           "snapshot maxima not strictly decreasing");
    return "max |e_1| = " + fmt(data.left_maxima[0]) + " > " + fmt(data.left_maxima[1]) + " > " +
           fmt(data.left_maxima[2]) + ", all peaks on the interface";
}

std::string criterion_fig3() {
    const fs::path dir = fresh_dir("fig3");
    const Fig3Data data = run_fig3(kSeed, dir.string(), 1);
    const std::size_t steps = data.residuals[0].size();
    for (std::size_t c = 0; c < data.overlaps.size(); ++c) {
        for (std::size_t n = 1; n + 1 < steps; ++n) {
            expect(data.residuals[c][n + 1] <= data.residuals[c][n],
                   "residual for d = " + std::to_string(data.overlaps[c]) +
                       " not monotone at n = " + std::to_string(n));
        }
    }
    for (std::size_t n = 3; n < steps; ++n) {
        expect(data.residuals[2][n] <= data.residuals[1][n] &&
                   data.residuals[1][n] <= data.residuals[0][n],
               "residuals not ordered by overlap at n = " + std::to_string(n));
    }
    expect(data.gamma_hats[0] > data.gamma_hats[1] && data.gamma_hats[1] > data.gamma_hats[2],
           "gamma_hat not strictly decreasing in d");
    return "gamma_hat(d=2,4,6) = " + fmt(data.gamma_hats[0]) + " > " + fmt(data.gamma_hats[1]) +
           " > " + fmt(data.gamma_hats[2]);
}

std::string criterion_subharmonic_identity() {
    const auto t0 = std::chrono::steady_clock::now();
    const Complex lambda = std::sqrt(Complex{0.0, 1.0});
    const auto defect = [&](double h) {
        const GlobalGrid g = build_grid({{0, 0, 1, 1}}, h);
        return subharmonic_defect(
            sample(g, [&](double x, double) { return std::exp(lambda * x); }), g);
    };
    const double ratio = defect(1.0 / 32.0) / defect(1.0 / 64.0);
    const double t = elapsed_s(t0);
    expect(ratio >= 3.0 && ratio <= 5.0, "defect ratio " + fmt(ratio) + " outside [3, 5]");
    expect(t < 5.0, "runtime " + fmt(t) + "s exceeds 5s");
    return "h=1/32 -> 1/64 defect ratio " + fmt(ratio) + ", " + fmt(t) + "s";
}

std::string criterion_contraction_mechanism() {
    int checks = 0;
    for (int d : {2, 4, 6}) {
        const BuiltGeometry geo = two_square_geometry(d);
        const SchwarzContext ctx =
            make_context(geo.grid, geo.subdomains, geo.pou, 1.0, GridField(geo.grid));
        InitialGuess init;
        init.kind = InitialGuess::Kind::uniform_random;
        init.seed = kSeed;
        SchwarzState state = initial_state(ctx, initial_guess(init, geo.grid));

        state = schwarz_step(state, ctx);
        for (int n = 1; n <= 20; ++n) {
            const auto norms = error_maxnorms(state, ctx);
            const double e_n = *std::max_element(norms.begin(), norms.end());
            double max_ratio = 0.0;
            for (std::size_t j = 0; j < geo.subdomains.size(); ++j) {
                const auto entry =
                    check_max_modulus(error_field(state, ctx, static_cast<int>(j)),
                                      geo.subdomains[j], geo.pou.support(static_cast<int>(j)));
                expect(entry.ratio_K < 1.0, "ratio_K >= 1 at d = " + std::to_string(d) +
                                                ", n = " + std::to_string(n));
                max_ratio = std::max(max_ratio, entry.ratio_K);
            }
            state = schwarz_step(state, ctx);
            const auto next = error_maxnorms(state, ctx);
            const double e_next = *std::max_element(next.begin(), next.end());
            expect(e_next <= max_ratio * e_n + 1e-10,
                   "E_{n+1} > ratio_K * E_n at d = " + std::to_string(d) +
                       ", n = " + std::to_string(n));
            ++checks;
        }
    }
    return std::to_string(checks) + " step inequalities hold with all ratio_K < 1";
}

std::string criterion_partition_of_unity() {
    struct Case {
        std::string name;
        std::vector<Rect> domain;
        std::vector<Rect> tiles;
        double h;
        int d;
    };
    const std::vector<Case> cases{
        {"two-square d=6", {{0, 0, 1, 1}, {1, 0, 2, 1}}, {{0, 0, 1, 1}, {1, 0, 2, 1}},
         1.0 / 29.0, 6},
        {"2x2 tiling d=3", {{0, 0, 2, 2}},
         {{0, 0, 1, 1}, {1, 0, 2, 1}, {0, 1, 1, 2}, {1, 1, 2, 2}}, 0.125, 3},
    };
    for (const Case& c : cases) {
        const GlobalGrid g = build_grid(c.domain, c.h);
        const auto subs = decompose(g, c.tiles, c.d);
        const auto pou = build_partition_of_unity(g, subs);
        for (int node : g.domain_nodes()) {
            double sum = 0.0;
            for (int j = 0; j < pou.num_subdomains(); ++j) sum += pou.chi(j, node);
            expect(std::abs(sum - 1.0) < 1e-14,
                   c.name + ": chi sum deviates by " + fmt(std::abs(sum - 1.0)));
        }
        for (std::size_t j = 0; j < subs.size(); ++j) {
            if (subs[j].interface_nodes.empty()) continue;
            for (int p : pou.support(static_cast<int>(j))) {
                int dist = g.num_nodes();
                for (int q : subs[j].interface_nodes) {
                    dist = std::min(dist, std::max(std::abs(g.node_i(p) - g.node_i(q)),
                                                   std::abs(g.node_k(p) - g.node_k(q))));
                }
                expect(dist >= 2, c.name + ": support node at distance " +
                                      std::to_string(dist) + " from the interface");
            }
        }
    }
    return "chi sums within 1e-14, supports >= 2 layers off the interfaces";
}

std::string criterion_determinism() {
    const fs::path a2 = fresh_dir("det_fig2_a");
    const fs::path b2 = fresh_dir("det_fig2_b");
    const fs::path c2 = fresh_dir("det_fig2_c");
    run_fig2(kSeed, a2.string(), 1);
    run_fig2(kSeed, b2.string(), 1);
    run_fig2(kSeed, c2.string(), 4);
    expect_identical_dirs(a2, b2, "fig2 rerun");
    expect_identical_dirs(a2, c2, "fig2 /w 4 threads");

    const fs::path a3 = fresh_dir("det_fig3_a");
    const fs::path b3 = fresh_dir("det_fig3_b");
    const fs::path c3 = fresh_dir("det_fig3_c");
    run_fig3(kSeed, a3.string(), 1);
    run_fig3(kSeed, b3.string(), 1);
    run_fig3(kSeed, c3.string(), 3);
    expect_identical_dirs(a3, b3, "fig3 rerun");
    expect_identical_dirs(a3, c3, "fig3 /w 3 threads");
    return "fig2 and fig3 outputs byte-identical across reruns and thread counts";
}

std::string criterion_trivial_fixed_points() {
    // f = 0 with a zero initial guess stops immediately with exact zeros.
    const BuiltGeometry geo = two_square_geometry(6);
    const SchwarzResult r0 = run_schwarz(geo.grid, geo.subdomains, geo.pou, 1.0,
                                         GridField(geo.grid), InitialGuess{});
    expect(r0.status == SolveStatus::converged, "f = 0 run did not converge");
    expect(r0.iterations == 0, "f = 0 run took " + std::to_string(r0.iterations) + " iterations");
    expect(max_abs(r0.solution) == 0.0, "f = 0 solution is not exactly zero");

    // J = 1 reaches the monolithic solution in one iteration.
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 1.0 / 16.0);
    const auto subs = decompose(g, {{0, 0, 1, 1}}, 2);
    const auto pou = build_partition_of_unity(g, subs);
    const GridField f = manufactured_rhs(g, 1.0);
    const SchwarzResult r1 = run_schwarz(g, subs, pou, 1.0, f, InitialGuess{});
    expect(r1.status == SolveStatus::converged, "J = 1 run did not converge");
    expect(r1.iterations == 1, "J = 1 run took " + std::to_string(r1.iterations) + " iterations");
    const GridField mono = monolithic_solve(g, 1.0, f);
    double diff = 0.0;
    for (int node : g.domain_nodes()) diff = std::max(diff, std::abs(r1.solution[node] - mono[node]));
    expect(diff <= 1e-12, "J = 1 gap to monolithic " + fmt(diff) + " exceeds 1e-12");
    return "f=0 stops at n=0 with exact zeros; J=1 matches monolithic in one step";
}

}  // namespace

int main() {
    const std::vector<Criterion> criteria{
        {"discretization order", criterion_discretization_order},
        {"oracle equivalence", criterion_oracle_equivalence},
        {"error modulus decay (fig2)", criterion_fig2},
        {"residual decay by overlap (fig3)", criterion_fig3},
        {"subharmonicity identity", criterion_subharmonic_identity},
        {"contraction mechanism", criterion_contraction_mechanism},
        {"partition of unity", criterion_partition_of_unity},
        {"determinism", criterion_determinism},
        {"trivial fixed points", criterion_trivial_fixed_points},
    };

    int failures = 0;
    for (std::size_t i = 0; i < criteria.size(); ++i) {
        std::string detail;
        bool ok = true;
        try {
            detail = criteria[i].run();
        } catch (const std::exception& e) {
            ok = false;
            detail = e.what();
        }
        std::cout << (ok ? "[PASS] " : "[FAIL] ") << i + 1 << "/" << criteria.size() << " "
                  << criteria[i].name << ": " << detail << '\n';
        if (!ok) ++failures;
    }
    if (failures > 0) {
        std::cout << failures << " criterion(s) failed\n";
    } else {
        std::cout << "all " << criteria.size() << " criteria passed\n";
    }
    return failures;
}
