// SPDX-License-Identifier: Apache-2.0
#include "mts/diagnostics.hpp"

#include <algorithm>
#include <cmath>

#include "mts/discretization.hpp"

namespace mts {

namespace {

// |u|^2 as a real-valued grid field.
GridField squared_modulus(const GridField& u) {
    GridField v(u.grid());
    for (int node : u.grid().domain_nodes()) {
        v[node] = Complex{std::norm(u[node]), 0.0};
    }
    return v;
}

double laplacian_at(const GridField& v, const GlobalGrid& grid, int node) {
    const double inv_h2 = 1.0 / (grid.spacing() * grid.spacing());
    Complex acc = -4.0 * v[node];
    for (int axis = 0; axis < 2; ++axis) {
        for (int dir = -1; dir <= 1; dir += 2) {
            acc += v[grid.neighbor(node, axis, dir)];
        }
    }
    return (acc * inv_h2).real();
}

}  // namespace

GridField subharmonic_defect_field(const GridField& u, const GlobalGrid& grid) {
    require(&u.grid() == &grid, "field lives on another grid");
    const GridField usq = squared_modulus(u);
    GridField defect(grid);
    for (int node : grid.interior_nodes()) {
        const Complex dx = grid_derivative(u, node, 0);
        const Complex dz = grid_derivative(u, node, 1);
        const double grad2 = std::norm(dx) + std::norm(dz);
        defect[node] = Complex{std::abs(laplacian_at(usq, grid, node) - 2.0 * grad2), 0.0};
    }
    return defect;
}

double subharmonic_defect(const GridField& u, const GlobalGrid& grid) {
    const GridField defect = subharmonic_defect_field(u, grid);
    return max_abs_over(defect, grid.interior_nodes());
}

MaxModulusEntry check_max_modulus(const GridField& e, const Subdomain& subdomain,
                                  const std::vector<int>& support) {
    MaxModulusEntry entry;
    entry.j = subdomain.id;
    entry.max_interior = max_abs_over(e, subdomain.interior_nodes);
    entry.max_interface = max_abs_over(e, subdomain.interface_nodes);
    const double max_support = max_abs_over(e, support);
    entry.ratio_K = entry.max_interface > 0.0 ? max_support / entry.max_interface : 0.0;
    entry.violation = !subdomain.interface_nodes.empty() &&
                      entry.max_interior > entry.max_interface * (1.0 + 1e-12);
    return entry;
}

double min_modulus_laplacian(const GridField& e, const Subdomain& subdomain) {
    const GlobalGrid& grid = e.grid();
    const GridField esq = squared_modulus(e);
    double lowest = 0.0;
    bool first = true;
    for (int node : subdomain.interior_nodes) {
        const double lap = laplacian_at(esq, grid, node);
        lowest = first ? lap : std::min(lowest, lap);
        first = false;
    }
    return lowest;
}

double estimate_contraction(const IterationHistory& history) {
    require(history.records.size() >= 12,
            "contraction estimation needs at least 12 recorded iterations, got " +
                std::to_string(history.records.size()));
    return gamma_estimate(history_error_series(history));
}

}  // namespace mts
