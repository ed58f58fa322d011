// SPDX-License-Identifier: Apache-2.0
#include "mts/discretization.hpp"

#include <cassert>
#include <vector>

namespace mts {

namespace {

using Triplet = Eigen::Triplet<Complex>;

// Shared assembly over an explicit unknown set. `role_of` classifies a
// neighbor: 0 unknown, 1 interface, 2 physical.
template <typename RoleFn>
DiscreteProblem assemble(const GlobalGrid& grid, double omega, const std::vector<int>& unknowns,
                         RoleFn role_of, std::string label) {
    require(omega != 0.0, "omega must be non-zero (the shifted operator is singular otherwise)");
    DiscreteProblem p;
    p.omega = omega;
    p.h = grid.spacing();
    p.grid = &grid;
    p.label = std::move(label);
    p.unknown_to_node = unknowns;
    p.node_to_unknown.assign(grid.num_nodes(), -1);
    for (int row = 0; row < static_cast<int>(unknowns.size()); ++row) {
        p.node_to_unknown[unknowns[row]] = row;
    }

    const double inv_h2 = 1.0 / (p.h * p.h);
    const Complex diag{-4.0 * inv_h2, -omega};
    std::vector<Triplet> triplets;
    triplets.reserve(unknowns.size() * 5);
    for (int row = 0; row < static_cast<int>(unknowns.size()); ++row) {
        const int node = unknowns[row];
        triplets.emplace_back(row, row, diag);
        for (int axis = 0; axis < 2; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                const int q = grid.neighbor(node, axis, dir);
                assert(q >= 0 && grid.in_domain(q));
                const int qrole = role_of(q);
                if (qrole == 0) {
                    triplets.emplace_back(row, p.node_to_unknown[q], Complex{inv_h2, 0.0});
                } else {
                    p.couplings.push_back({row, q, inv_h2, qrole == 2});
                }
            }
        }
    }
    p.A.resize(static_cast<int>(unknowns.size()), static_cast<int>(unknowns.size()));
    p.A.setFromTriplets(triplets.begin(), triplets.end());
    p.A.makeCompressed();
    return p;
}

}  // namespace

DiscreteProblem assemble_global(const GlobalGrid& grid, double omega, const GridField& f) {
    require(all_finite(f), "right-hand side contains non-finite values");
    DiscreteProblem p = assemble(
        grid, omega, grid.interior_nodes(),
        [&](int q) { return grid.is_interior(q) ? 0 : 2; }, "global");
    for (int node : grid.domain_nodes()) {
        if (!grid.is_interior(node)) p.physical_nodes.push_back(node);
    }
    p.rhs.resize(p.num_unknowns());
    for (int row = 0; row < p.num_unknowns(); ++row) {
        p.rhs[row] = f[p.unknown_to_node[row]];
    }
    return p;
}

DiscreteProblem assemble_local(const GlobalGrid& grid, const Subdomain& subdomain, double omega) {
    DiscreteProblem p = assemble(
        grid, omega, subdomain.interior_nodes,
        [&](int q) {
            const int r = subdomain.role[q];
            assert(r >= 0);
            return r == 0 ? 0 : (r == 2 ? 2 : 1);
        },
        "subdomain " + std::to_string(subdomain.id));
    p.interface_nodes = subdomain.interface_nodes;
    p.physical_nodes = subdomain.physical_nodes;
    return p;
}

Complex grid_derivative(const GridField& v, int node, int axis) {
    const GlobalGrid& g = v.grid();
    const double h = g.spacing();
    const auto domain_node = [&](int q) { return q >= 0 && g.in_domain(q); };
    const int plus = g.neighbor(node, axis, 1);
    const int minus = g.neighbor(node, axis, -1);
    const bool has_plus = domain_node(plus);
    const bool has_minus = domain_node(minus);
    if (has_plus && has_minus) {
        return (v[plus] - v[minus]) / (2.0 * h);
    }
    if (has_plus) {
        const int plus2 = g.neighbor(plus, axis, 1);
        if (domain_node(plus2)) {
            return (-3.0 * v[node] + 4.0 * v[plus] - v[plus2]) / (2.0 * h);
        }
        return (v[plus] - v[node]) / h;
    }
    if (has_minus) {
        const int minus2 = g.neighbor(minus, axis, -1);
        if (domain_node(minus2)) {
            return (3.0 * v[node] - 4.0 * v[minus] + v[minus2]) / (2.0 * h);
        }
        return (v[node] - v[minus]) / h;
    }
    return Complex{0.0, 0.0};
}

GridField source_to_rhs(const SourceSpec& source, const GlobalGrid& grid) {
    require(all_finite(source.jx) && all_finite(source.jz),
            "source currents contain non-finite values");
    GridField f(grid);
    for (int node : grid.domain_nodes()) {
        f[node] = -grid_derivative(source.jx, node, 1) + grid_derivative(source.jz, node, 0);
    }
    return f;
}

std::pair<GridField, GridField> recover_electric_field(const GridField& u,
                                                       const SourceSpec& source,
                                                       const GlobalGrid& grid) {
    require(all_finite(u), "magnetic field contains non-finite values");
    GridField ex(grid), ez(grid);
    for (int node : grid.domain_nodes()) {
        ex[node] = -grid_derivative(u, node, 1) - source.jx[node];
        ez[node] = grid_derivative(u, node, 0) - source.jz[node];
    }
    return {std::move(ex), std::move(ez)};
}

GridField apply_operator(const GridField& u, const GlobalGrid& grid, double omega) {
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    GridField out(grid);
    for (int node : grid.interior_nodes()) {
        Complex acc = -4.0 * u[node];
        for (int axis = 0; axis < 2; ++axis) {
            for (int dir = -1; dir <= 1; dir += 2) {
                acc += u[grid.neighbor(node, axis, dir)];
            }
        }
        out[node] = acc * inv_h2 - Complex{0.0, omega} * u[node];
    }
    return out;
}

}  // namespace mts
