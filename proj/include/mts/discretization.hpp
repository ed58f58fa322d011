// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <Eigen/SparseCore>
#include <string>
#include <vector>

#include "mts/common.hpp"
#include "mts/field.hpp"
#include "mts/geometry.hpp"

namespace mts {

using SparseMatrixC = Eigen::SparseMatrix<Complex>;
using VectorC = Eigen::Matrix<Complex, Eigen::Dynamic, 1>;

/// A stencil leg that reaches a Dirichlet node; its contribution is moved to
/// the right-hand side at solve time, keeping the operator independent of the
/// boundary data.
struct BoundaryCoupling {
    int row;            ///< unknown (row) index
    int boundary_node;  ///< global node index of the Dirichlet node
    double coeff;       ///< stencil coefficient (1/h^2)
    bool physical;      ///< true: domain boundary (data 0); false: interface
};

/// Five-point discretization of Delta u - i*omega*u over a set of interior
/// unknowns, with Dirichlet nodes eliminated. Diagonal entries are
/// -4/h^2 - i*omega, off-diagonals 1/h^2; the matrix is complex symmetric.
struct DiscreteProblem {
    SparseMatrixC A;
    std::vector<int> unknown_to_node;  ///< dof map, ascending node index
    std::vector<int> node_to_unknown;  ///< lattice-sized, -1 for non-unknowns
    std::vector<BoundaryCoupling> couplings;
    std::vector<int> interface_nodes;  ///< Gamma nodes needing boundary data
    std::vector<int> physical_nodes;
    double omega = 0.0;
    double h = 0.0;
    VectorC rhs;  ///< f at the unknowns (global assembly only)
    std::string label;
    const GlobalGrid* grid = nullptr;

    int num_unknowns() const { return static_cast<int>(unknown_to_node.size()); }
};

/// Exterior current components (J^e_x, J^e_z); the conductivity is fixed at 1.
struct SourceSpec {
    GridField jx;
    GridField jz;
};

/// Global problem over all interior nodes, homogeneous Dirichlet data
/// eliminated; rhs is f at the interior nodes. Rejects omega == 0.
DiscreteProblem assemble_global(const GlobalGrid& grid, double omega, const GridField& f);

/// Subdomain problem over the subdomain's interior nodes. Stencil legs that
/// reach the interface or the domain boundary become couplings; the operator
/// can be factored once and reused every iteration.
DiscreteProblem assemble_local(const GlobalGrid& grid, const Subdomain& subdomain, double omega);

/// First derivative of a field along an axis (0 = x, 1 = z) at a node:
/// second-order centered where both neighbors are domain nodes, one-sided
/// second-order toward the available side otherwise.
Complex grid_derivative(const GridField& v, int node, int axis);

/// Right-hand side f = -D_z(J_x) + D_x(J_z) for the scalar magnetic-field
/// equation, evaluated at every domain node.
GridField source_to_rhs(const SourceSpec& source, const GlobalGrid& grid);

/// Electric field from the solved magnetic field:
/// E_x = -D_z u - J_x, E_z = D_x u - J_z.
std::pair<GridField, GridField> recover_electric_field(const GridField& u,
                                                       const SourceSpec& source,
                                                       const GlobalGrid& grid);

/// Matrix-free evaluation of Delta_h u - i*omega*u at the interior nodes
/// (boundary values of u participate through the stencil); zero elsewhere.
GridField apply_operator(const GridField& u, const GlobalGrid& grid, double omega);

}  // namespace mts
