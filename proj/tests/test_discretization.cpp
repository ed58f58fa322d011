// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "mts/discretization.hpp"
#include "mts/expressions.hpp"
#include "mts/local_solver.hpp"
#include "mts/schwarz.hpp"
#include "oracles.hpp"

using namespace mts;
using mts::testing::dense_stencil_matrix;

namespace {

constexpr double kPi = std::numbers::pi;

GridField random_field(const GlobalGrid& g, unsigned seed) {
    std::mt19937 rng(seed);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    GridField f(g);
    for (int node : g.domain_nodes()) f[node] = Complex{dist(rng), dist(rng)};
    return f;
}

double max_diff(const GridField& a, const GridField& b) {
    double m = 0.0;
    for (int node : a.grid().domain_nodes()) m = std::max(m, std::abs(a[node] - b[node]));
    return m;
}

// Max-norm error of the global solve against a manufactured solution.
double manufactured_error(double h, double omega) {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, h);
    const Factorization f = factor(assemble_global(g, omega, manufactured_rhs(g, omega)));
    const VectorC x = f.solve(f.problem().rhs);
    const GridField exact = manufactured_solution(g);
    double err = 0.0;
    for (int row = 0; row < f.problem().num_unknowns(); ++row) {
        err = std::max(err, std::abs(x[row] - exact[f.problem().unknown_to_node[row]]));
    }
    return err;
}

}  // namespace

TEST_CASE("assemble_global: single-unknown square gives A = [-16 - i]") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.5);
    GridField f(g);
    const int center = g.node_index(1, 1);
    f[center] = Complex{3.0, -2.0};
    const DiscreteProblem p = assemble_global(g, 1.0, f);
    REQUIRE(p.num_unknowns() == 1);
    CHECK(p.A.coeff(0, 0) == Complex{-16.0, -1.0});
    CHECK(p.rhs[0] == Complex{3.0, -2.0});
}

TEST_CASE("assemble_global: rejects omega = 0") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.25);
    CHECK_THROWS_AS(assemble_global(g, 0.0, GridField(g)), std::invalid_argument);
}

TEST_CASE("assemble_global: 5x5 square matches the dense stencil oracle entrywise") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.25);
    const DiscreteProblem p = assemble_global(g, 1.0, GridField(g));
    const auto dense = dense_stencil_matrix(g, 1.0, g.interior_nodes());
    REQUIRE(p.num_unknowns() == dense.rows());
    for (int r = 0; r < dense.rows(); ++r) {
        for (int c = 0; c < dense.cols(); ++c) {
            CHECK(p.A.coeff(r, c) == dense(r, c));
        }
    }
}

TEST_CASE("assemble_global: A is complex symmetric but not Hermitian") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}, {1, 0, 2, 1}}, 0.125);
    const DiscreteProblem p = assemble_global(g, 1.0, GridField(g));
    const SparseMatrixC at = SparseMatrixC(p.A.transpose());
    for (int outer = 0; outer < p.A.outerSize(); ++outer) {
        for (SparseMatrixC::InnerIterator it(p.A, outer); it; ++it) {
            CHECK(it.value() == at.coeff(it.row(), it.col()));
        }
    }
    // Not Hermitian: the diagonal carries -i*omega.
    CHECK(p.A.coeff(0, 0).imag() != 0.0);
}

TEST_CASE("global solve of f = 0 is identically zero") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.125);
    const GridField u = monolithic_solve(g, 1.0, GridField(g));
    CHECK(max_abs(u) == 0.0);
}

TEST_CASE("assemble_local: J=1 decomposition reproduces the global matrix") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.125);
    const auto subs = decompose(g, {{0, 0, 1, 1}}, 2);
    const DiscreteProblem global = assemble_global(g, 1.0, GridField(g));
    const DiscreteProblem local = assemble_local(g, subs[0], 1.0);
    REQUIRE(local.num_unknowns() == global.num_unknowns());
    CHECK(local.unknown_to_node == global.unknown_to_node);
    const SparseMatrixC diff = local.A - global.A;
    CHECK(diff.norm() == 0.0);
}

TEST_CASE("assemble_local: two-square d=6 left subdomain has 34x28 unknowns") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}, {1, 0, 2, 1}}, 1.0 / 29.0);
    const auto subs = decompose(g, {{0, 0, 1, 1}, {1, 0, 2, 1}}, 6);
    const DiscreteProblem p = assemble_local(g, subs[0], 1.0);
    CHECK(p.num_unknowns() == 34 * 28);
    CHECK(p.interface_nodes.size() == 28);
}

TEST_CASE("solve_dirichlet is linear in the boundary data") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}, {1, 0, 2, 1}}, 1.0 / 29.0);
    const auto subs = decompose(g, {{0, 0, 1, 1}, {1, 0, 2, 1}}, 6);
    const Factorization F = factor(assemble_local(g, subs[0], 1.0));
    const GridField f = random_field(g, 7);

    std::mt19937 rng(11);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::unordered_map<int, Complex> g1, g2, g12, g0;
    for (int node : subs[0].interface_nodes) {
        g1[node] = Complex{dist(rng), dist(rng)};
        g2[node] = Complex{dist(rng), dist(rng)};
        g12[node] = g1[node] + g2[node];
        g0[node] = Complex{0.0, 0.0};
    }
    const GridField u12 = solve_dirichlet(F, f, g12);
    const GridField u1 = solve_dirichlet(F, f, g1);
    const GridField u2 = solve_dirichlet(F, f, g2);
    const GridField u0 = solve_dirichlet(F, f, g0);
    double err = 0.0;
    for (int node : subs[0].nodes) {
        err = std::max(err, std::abs(u12[node] - (u1[node] + u2[node] - u0[node])));
    }
    CHECK(err < 1e-12);
}

TEST_CASE("source_to_rhs: constant currents give f = 0") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.125);
    const SourceSpec src{sample(g, [](double, double) { return Complex{2.5, 1.0}; }),
                         sample(g, [](double, double) { return Complex{-0.5, 3.0}; })};
    const GridField f = source_to_rhs(src, g);
    CHECK(max_abs(f) < 1e-13);
}

TEST_CASE("source_to_rhs: J_x = z^2 gives f = -2z exactly") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.125);
    const SourceSpec src{sample_expression(g, "z_squared"), sample_expression(g, "zero")};
    const GridField f = source_to_rhs(src, g);
    for (int node : g.domain_nodes()) {
        CHECK(std::abs(f[node] - Complex{-2.0 * g.node_z(node), 0.0}) < 1e-12);
    }
}

TEST_CASE("source_to_rhs: J_z = sin(pi x) converges to pi cos(pi x) at second order") {
    const auto defect = [](double h) {
        const GlobalGrid g = build_grid({{0, 0, 1, 1}}, h);
        const SourceSpec src{sample_expression(g, "zero"), sample_expression(g, "sin_pi_x")};
        const GridField f = source_to_rhs(src, g);
        double d = 0.0;
        for (int node : g.domain_nodes()) {
            d = std::max(d, std::abs(f[node] - Complex{kPi * std::cos(kPi * g.node_x(node)), 0.0}));
        }
        return d;
    };
    const double ratio = defect(1.0 / 16.0) / defect(1.0 / 32.0);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("recover_electric_field: zero inputs give zero fields") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.25);
    const SourceSpec src{GridField(g), GridField(g)};
    const auto [ex, ez] = recover_electric_field(GridField(g), src, g);
    CHECK(max_abs(ex) == 0.0);
    CHECK(max_abs(ez) == 0.0);
}

TEST_CASE("recover_electric_field: u = z gives E_x = -1, E_z = 0 exactly") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.125);
    const SourceSpec src{GridField(g), GridField(g)};
    const auto [ex, ez] = recover_electric_field(sample_expression(g, "z"), src, g);
    for (int node : g.domain_nodes()) {
        CHECK(std::abs(ex[node] - Complex{-1.0, 0.0}) < 1e-12);
        CHECK(std::abs(ez[node]) < 1e-12);
    }
}

TEST_CASE("Faraday residual of the recovered field vanishes at second order") {
    const double omega = 1.0;
    const auto residual = [&](double h) {
        const GlobalGrid g = build_grid({{0, 0, 1, 1}}, h);
        const SourceSpec src{sample_expression(g, "sine_product"), sample_expression(g, "zero")};
        const GridField f = source_to_rhs(src, g);
        const GridField u = monolithic_solve(g, omega, f);
        const auto [ex, ez] = recover_electric_field(u, src, g);
        double r = 0.0;
        for (int node : g.interior_nodes()) {
            const Complex v = grid_derivative(ex, node, 1) - grid_derivative(ez, node, 0) +
                              Complex{0.0, omega} * u[node];
            r = std::max(r, std::abs(v));
        }
        return r;
    };
    const double ratio = residual(1.0 / 16.0) / residual(1.0 / 32.0);
    CHECK(ratio > 3.0);
    CHECK(ratio < 5.0);
}

TEST_CASE("apply_operator: zero field maps to zero") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.25);
    CHECK(max_abs(apply_operator(GridField(g), g, 1.0)) == 0.0);
}

TEST_CASE("apply_operator matches the dense oracle including boundary legs") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 0.25);
    const GridField u = random_field(g, 3);
    const GridField au = apply_operator(u, g, 1.0);
    const VectorC oracle = mts::testing::dense_apply(g, 1.0, u, g.interior_nodes());
    double scale = 0.0, err = 0.0;
    for (std::size_t r = 0; r < g.interior_nodes().size(); ++r) {
        scale = std::max(scale, std::abs(oracle[r]));
    }
    for (std::size_t r = 0; r < g.interior_nodes().size(); ++r) {
        err = std::max(err, std::abs(au[g.interior_nodes()[r]] - oracle[r]));
    }
    CHECK(err <= 1e-14 * scale);
}

TEST_CASE("apply_operator agrees with the assembled matvec") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}, {1, 0, 2, 1}}, 0.125);
    const DiscreteProblem p = assemble_global(g, 2.0, GridField(g));
    GridField u = random_field(g, 17);
    // The assembled system eliminates the boundary; zero it in the field so
    // both routes describe the same function.
    for (int node : g.domain_nodes()) {
        if (!g.is_interior(node)) u[node] = Complex{0.0, 0.0};
    }
    const GridField au = apply_operator(u, g, 2.0);
    VectorC x(p.num_unknowns());
    for (int r = 0; r < p.num_unknowns(); ++r) x[r] = u[p.unknown_to_node[r]];
    const VectorC ax = p.A * x;
    double scale = 0.0, err = 0.0;
    for (int r = 0; r < p.num_unknowns(); ++r) {
        scale = std::max(scale, std::abs(ax[r]));
        err = std::max(err, std::abs(ax[r] - au[p.unknown_to_node[r]]));
    }
    CHECK(err <= 1e-14 * scale);
}

TEST_CASE("apply_operator residual of the exact discrete solution is tiny") {
    const GlobalGrid g = build_grid({{0, 0, 1, 1}}, 1.0 / 16.0);
    const GridField f = manufactured_rhs(g, 1.0);
    const GridField u = monolithic_solve(g, 1.0, f);
    const GridField au = apply_operator(u, g, 1.0);
    double scale = 0.0, err = 0.0;
    for (int node : g.interior_nodes()) {
        scale = std::max(scale, std::abs(f[node]));
        err = std::max(err, std::abs(au[node] - f[node]));
    }
    CHECK(err <= 1e-12 * scale);
}

TEST_CASE("global solve converges at second order on the manufactured solution") {
    const double ratio = manufactured_error(1.0 / 16.0, 1.0) / manufactured_error(1.0 / 32.0, 1.0);
    CHECK(ratio >= 3.4);
    CHECK(ratio <= 4.6);
}
