// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mts/common.hpp"

namespace mts {

/// Axis-aligned rectangle [xlo, xhi] x [zlo, zhi]. All corners must lie on
/// grid lines of the grid the rectangle is used with.
struct Rect {
    double xlo = 0.0;
    double zlo = 0.0;
    double xhi = 0.0;
    double zhi = 0.0;
};

enum class NodeClass : unsigned char { exterior = 0, interior = 1, physical_boundary = 2 };

/// Uniform grid over a connected union of axis-aligned rectangles.
///
/// Nodes live on the lattice (x0 + i*h, z0 + k*h), 0 <= i < nx, 0 <= k < nz,
/// and are indexed row-major by (z, x): index = k*nx + i. The coordinate z
/// increases with the row index k; (x, z) is treated as a standard Cartesian
/// plane. Each node is classified interior, physical_boundary (on the
/// boundary of the rectangle union) or exterior.
class GlobalGrid {
public:
    GlobalGrid(std::vector<Rect> domain_spec, double spacing);

    double spacing() const { return h_; }
    double origin_x() const { return x0_; }
    double origin_z() const { return z0_; }
    int nx() const { return nx_; }
    int nz() const { return nz_; }
    int num_nodes() const { return nx_ * nz_; }

    int node_index(int i, int k) const { return k * nx_ + i; }
    int node_i(int node) const { return node % nx_; }
    int node_k(int node) const { return node / nx_; }
    double node_x(int node) const { return x0_ + h_ * node_i(node); }
    double node_z(int node) const { return z0_ + h_ * node_k(node); }

    NodeClass node_class(int node) const { return class_[node]; }
    bool in_domain(int node) const { return class_[node] != NodeClass::exterior; }
    bool is_interior(int node) const { return class_[node] == NodeClass::interior; }

    /// Neighbor node index one step along an axis (0 = x, 1 = z), or -1 when
    /// the step leaves the lattice.
    int neighbor(int node, int axis, int dir) const {
        if (axis == 0) {
            const int i = node_i(node) + dir;
            return (i < 0 || i >= nx_) ? -1 : node + dir;
        }
        const int k = node_k(node) + dir;
        return (k < 0 || k >= nz_) ? -1 : node + dir * nx_;
    }

    /// Grid cells are the unit squares between adjacent grid lines; a cell is
    /// inside when it is covered by the rectangle union.
    bool cell_inside(int ci, int ck) const {
        if (ci < 0 || ci >= nx_ - 1 || ck < 0 || ck >= nz_ - 1) return false;
        return cells_[ck * (nx_ - 1) + ci] != 0;
    }

    /// Domain nodes (interior + physical boundary), ascending node index.
    const std::vector<int>& domain_nodes() const { return domain_nodes_; }
    const std::vector<int>& interior_nodes() const { return interior_nodes_; }
    int num_domain_nodes() const { return static_cast<int>(domain_nodes_.size()); }
    int num_interior_nodes() const { return static_cast<int>(interior_nodes_.size()); }

    /// Position of a node within domain_nodes(), or -1 for exterior nodes.
    int domain_slot(int node) const { return slot_[node]; }

    const std::vector<Rect>& domain_spec() const { return spec_; }

    /// Snaps a coordinate to its grid-line index along an axis (0 = x, 1 = z).
    /// Throws when the coordinate is not on a grid line; `what` names the
    /// offending input in the error message.
    int snap_to_grid(double coord, int axis, const std::string& what) const;

private:
    std::vector<Rect> spec_;
    double h_ = 0.0;
    double x0_ = 0.0;
    double z0_ = 0.0;
    int nx_ = 0;
    int nz_ = 0;
    std::vector<NodeClass> class_;
    std::vector<unsigned char> cells_;
    std::vector<int> domain_nodes_;
    std::vector<int> interior_nodes_;
    std::vector<int> slot_;
};

/// Builds the grid for a rectangle union. Rejects rectangles whose corners
/// are off-grid and unions that are not edge-connected.
GlobalGrid build_grid(const std::vector<Rect>& domain_spec, double spacing);

/// One overlapping subdomain: a non-overlapping tile enlarged by `overlap`
/// grid layers and intersected with the domain. Node roles partition the
/// node set into local interior, interface (boundary inside the domain) and
/// physical boundary.
struct Subdomain {
    int id = 0;       ///< 1-based subdomain number
    int overlap = 0;  ///< enlargement width d in grid layers

    /// Enlarged tile box in node indices, before clipping to the lattice.
    int ilo = 0, ihi = 0, klo = 0, khi = 0;

    std::vector<int> nodes;            ///< node set, ascending
    std::vector<int> interior_nodes;   ///< local unknowns, ascending
    std::vector<int> interface_nodes;  ///< Gamma_j, ascending
    std::vector<int> physical_nodes;   ///< on the domain boundary, ascending

    /// Per lattice node: -1 outside, 0 interior, 1 interface, 2 physical.
    std::vector<signed char> role;

    bool contains(int node) const { return role[node] >= 0; }
    bool is_local_interior(int node) const { return role[node] == 0; }
};

/// Enlarges each tile of a non-overlapping tiling by `overlap` grid layers.
/// Requires overlap >= 2 and tiles that partition the domain along grid
/// lines; validates that the result covers the domain and that every
/// interface node lies well inside some other subdomain.
std::vector<Subdomain> decompose(const GlobalGrid& grid, const std::vector<Rect>& tiles,
                                 int overlap);

/// Nonnegative weights chi_j per node, summing to 1 at every domain node.
/// chi_j vanishes on Gamma_j and on the layer of nodes adjacent to it, so
/// each support K_j stays at least two layers away from Gamma_j.
class PartitionOfUnity {
public:
    int num_subdomains() const { return static_cast<int>(chi_.size()); }

    /// Weight of subdomain j (0-based position) at a node.
    double chi(int j, int node) const { return chi_[j][node]; }

    /// Support K_j: nodes with chi_j > 0, ascending.
    const std::vector<int>& support(int j) const { return support_[j]; }

private:
    friend PartitionOfUnity build_partition_of_unity(const GlobalGrid&,
                                                     const std::vector<Subdomain>&);
    std::vector<std::vector<double>> chi_;
    std::vector<std::vector<int>> support_;
};

PartitionOfUnity build_partition_of_unity(const GlobalGrid& grid,
                                          const std::vector<Subdomain>& subdomains);

/// Chebyshev (king-move) grid distance from every lattice node to the
/// nearest source node; INT_MAX-like sentinel (num_nodes+1) when sources are
/// empty. Distances ignore node classification.
std::vector<int> chebyshev_distance_field(const GlobalGrid& grid,
                                          const std::vector<int>& sources);

}  // namespace mts
