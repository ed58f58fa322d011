// SPDX-License-Identifier: Apache-2.0
#include "mts/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <limits>
#include <string>

namespace mts {

namespace {

std::string rect_str(const Rect& r) {
    return "[" + std::to_string(r.xlo) + "," + std::to_string(r.xhi) + "]x[" +
           std::to_string(r.zlo) + "," + std::to_string(r.zhi) + "]";
}

int snap(double coord, double origin, double h, const std::string& what) {
    const double t = (coord - origin) / h;
    const double r = std::round(t);
    require(std::abs(t - r) <= 1e-9 * std::max(1.0, std::abs(t)),
            what + ": coordinate " + std::to_string(coord) + " is not on the grid (h = " +
                std::to_string(h) + ")");
    return static_cast<int>(r);
}

struct RectIdx {
    int ilo, ihi, klo, khi;
};

RectIdx snap_rect(const Rect& r, double x0, double z0, double h, const std::string& what) {
    RectIdx s;
    s.ilo = snap(r.xlo, x0, h, what);
    s.ihi = snap(r.xhi, x0, h, what);
    s.klo = snap(r.zlo, z0, h, what);
    s.khi = snap(r.zhi, z0, h, what);
    return s;
}

}  // namespace

int GlobalGrid::snap_to_grid(double coord, int axis, const std::string& what) const {
    return snap(coord, axis == 0 ? x0_ : z0_, h_, what);
}

GlobalGrid::GlobalGrid(std::vector<Rect> domain_spec, double spacing)
    : spec_(std::move(domain_spec)), h_(spacing) {
    require(h_ > 0.0, "grid spacing h must be positive");
    require(!spec_.empty(), "domain specification must contain at least one rectangle");
    for (std::size_t r = 0; r < spec_.size(); ++r) {
        require(spec_[r].xhi > spec_[r].xlo && spec_[r].zhi > spec_[r].zlo,
                "rectangle " + std::to_string(r + 1) + " " + rect_str(spec_[r]) +
                    " is degenerate");
    }

    x0_ = spec_[0].xlo;
    z0_ = spec_[0].zlo;
    double xmax = spec_[0].xhi, zmax = spec_[0].zhi;
    for (const Rect& r : spec_) {
        x0_ = std::min(x0_, r.xlo);
        z0_ = std::min(z0_, r.zlo);
        xmax = std::max(xmax, r.xhi);
        zmax = std::max(zmax, r.zhi);
    }

    std::vector<RectIdx> idx;
    for (std::size_t r = 0; r < spec_.size(); ++r) {
        idx.push_back(snap_rect(spec_[r], x0_, z0_, h_,
                                "rectangle " + std::to_string(r + 1) + " " + rect_str(spec_[r])));
    }
    nx_ = snap(xmax, x0_, h_, "domain extent") + 1;
    nz_ = snap(zmax, z0_, h_, "domain extent") + 1;
    require(nx_ >= 3 && nz_ >= 3,
            "grid too coarse: need at least 3 nodes per direction, got " + std::to_string(nx_) +
                "x" + std::to_string(nz_));

    // A cell [ci, ci+1] x [ck, ck+1] is inside iff some rectangle covers it;
    // rectangle edges lie on grid lines, so coverage is exact in indices.
    const int ncx = nx_ - 1, ncz = nz_ - 1;
    cells_.assign(static_cast<std::size_t>(ncx) * ncz, 0);
    for (const RectIdx& r : idx) {
        for (int ck = r.klo; ck < r.khi; ++ck) {
            for (int ci = r.ilo; ci < r.ihi; ++ci) {
                cells_[static_cast<std::size_t>(ck) * ncx + ci] = 1;
            }
        }
    }

    // Connectivity of the union through shared cell edges.
    int first = -1, inside_count = 0;
    for (int c = 0; c < ncx * ncz; ++c) {
        if (cells_[c]) {
            if (first < 0) first = c;
            ++inside_count;
        }
    }
    require(inside_count > 0, "domain covers no grid cells");
    std::vector<unsigned char> seen(cells_.size(), 0);
    std::deque<int> queue{first};
    seen[first] = 1;
    int reached = 1;
    while (!queue.empty()) {
        const int c = queue.front();
        queue.pop_front();
        const int ci = c % ncx, ck = c / ncx;
        const int di[4] = {1, -1, 0, 0};
        const int dk[4] = {0, 0, 1, -1};
        for (int s = 0; s < 4; ++s) {
            const int qi = ci + di[s], qk = ck + dk[s];
            if (qi < 0 || qi >= ncx || qk < 0 || qk >= ncz) continue;
            const int q = qk * ncx + qi;
            if (cells_[q] && !seen[q]) {
                seen[q] = 1;
                ++reached;
                queue.push_back(q);
            }
        }
    }
    require(reached == inside_count, "domain rectangle union is disconnected");

    // Node classification from the four incident cells.
    class_.assign(num_nodes(), NodeClass::exterior);
    slot_.assign(num_nodes(), -1);
    for (int k = 0; k < nz_; ++k) {
        for (int i = 0; i < nx_; ++i) {
            int inside = 0;
            if (cell_inside(i - 1, k - 1)) ++inside;
            if (cell_inside(i, k - 1)) ++inside;
            if (cell_inside(i - 1, k)) ++inside;
            if (cell_inside(i, k)) ++inside;
            const int node = node_index(i, k);
            if (inside == 4) {
                class_[node] = NodeClass::interior;
            } else if (inside > 0) {
                class_[node] = NodeClass::physical_boundary;
            }
        }
    }
    for (int node = 0; node < num_nodes(); ++node) {
        if (class_[node] == NodeClass::exterior) continue;
        slot_[node] = static_cast<int>(domain_nodes_.size());
        domain_nodes_.push_back(node);
        if (class_[node] == NodeClass::interior) interior_nodes_.push_back(node);
    }
}

GlobalGrid build_grid(const std::vector<Rect>& domain_spec, double spacing) {
    return GlobalGrid(domain_spec, spacing);
}

std::vector<int> chebyshev_distance_field(const GlobalGrid& grid,
                                          const std::vector<int>& sources) {
    const int sentinel = grid.num_nodes() + 1;
    std::vector<int> dist(grid.num_nodes(), sentinel);
    std::deque<int> queue;
    for (int s : sources) {
        dist[s] = 0;
        queue.push_back(s);
    }
    while (!queue.empty()) {
        const int p = queue.front();
        queue.pop_front();
        const int pi = grid.node_i(p), pk = grid.node_k(p);
        for (int dk = -1; dk <= 1; ++dk) {
            for (int di = -1; di <= 1; ++di) {
                if (di == 0 && dk == 0) continue;
                const int qi = pi + di, qk = pk + dk;
                if (qi < 0 || qi >= grid.nx() || qk < 0 || qk >= grid.nz()) continue;
                const int q = grid.node_index(qi, qk);
                if (dist[q] > dist[p] + 1) {
                    dist[q] = dist[p] + 1;
                    queue.push_back(q);
                }
            }
        }
    }
    return dist;
}

std::vector<Subdomain> decompose(const GlobalGrid& grid, const std::vector<Rect>& tiles,
                                 int overlap) {
    require(overlap >= 2,
            "overlap d must be >= 2 (partition-of-unity supports need two free layers), got " +
                std::to_string(overlap));
    require(!tiles.empty(), "tiling must contain at least one tile");

    const int ncx = grid.nx() - 1, ncz = grid.nz() - 1;
    std::vector<RectIdx> idx;
    for (std::size_t t = 0; t < tiles.size(); ++t) {
        const std::string what = "tile " + std::to_string(t + 1) + " " + rect_str(tiles[t]);
        RectIdx s;
        s.ilo = grid.snap_to_grid(tiles[t].xlo, 0, what);
        s.ihi = grid.snap_to_grid(tiles[t].xhi, 0, what);
        s.klo = grid.snap_to_grid(tiles[t].zlo, 1, what);
        s.khi = grid.snap_to_grid(tiles[t].zhi, 1, what);
        require(s.ihi > s.ilo && s.khi > s.klo, what + " is degenerate");
        idx.push_back(s);
    }

    // Tiles must cover every inside cell exactly once; parts of a tile that
    // fall outside the domain are inert.
    std::vector<int> covered(static_cast<std::size_t>(ncx) * ncz, 0);
    for (const RectIdx& s : idx) {
        for (int ck = std::max(0, s.klo); ck < std::min(ncz, s.khi); ++ck) {
            for (int ci = std::max(0, s.ilo); ci < std::min(ncx, s.ihi); ++ci) {
                if (grid.cell_inside(ci, ck)) ++covered[static_cast<std::size_t>(ck) * ncx + ci];
            }
        }
    }
    for (int ck = 0; ck < ncz; ++ck) {
        for (int ci = 0; ci < ncx; ++ci) {
            if (!grid.cell_inside(ci, ck)) continue;
            const int c = covered[static_cast<std::size_t>(ck) * ncx + ci];
            require(c == 1, "tiling does not partition the domain: cell (" + std::to_string(ci) +
                                "," + std::to_string(ck) + ") is covered " + std::to_string(c) +
                                " times");
        }
    }

    std::vector<Subdomain> subs;
    for (const RectIdx& t : idx) {
        Subdomain s;
        s.overlap = overlap;
        s.ilo = t.ilo - overlap;
        s.ihi = t.ihi + overlap;
        s.klo = t.klo - overlap;
        s.khi = t.khi + overlap;
        s.role.assign(grid.num_nodes(), -1);
        for (int k = std::max(0, s.klo); k <= std::min(grid.nz() - 1, s.khi); ++k) {
            for (int i = std::max(0, s.ilo); i <= std::min(grid.nx() - 1, s.ihi); ++i) {
                const int node = grid.node_index(i, k);
                if (!grid.in_domain(node)) continue;
                s.nodes.push_back(node);
                if (grid.node_class(node) == NodeClass::physical_boundary) {
                    s.role[node] = 2;
                    s.physical_nodes.push_back(node);
                } else if (i == s.ilo || i == s.ihi || k == s.klo || k == s.khi) {
                    s.role[node] = 1;
                    s.interface_nodes.push_back(node);
                } else {
                    s.role[node] = 0;
                    s.interior_nodes.push_back(node);
                }
            }
        }
        if (s.nodes.empty()) continue;  // tile does not meet the domain
        s.id = static_cast<int>(subs.size()) + 1;
        subs.push_back(std::move(s));
    }
    require(!subs.empty(), "tiling produced no subdomains inside the domain");

    for (int node : grid.domain_nodes()) {
        bool covered_node = false;
        for (const Subdomain& s : subs) {
            if (s.contains(node)) {
                covered_node = true;
                break;
            }
        }
        require(covered_node, "subdomains do not cover domain node " + std::to_string(node));
    }

    // Strong overlap: each interface node must sit inside another subdomain,
    // at least d-1 layers away from that subdomain's interface.
    std::vector<std::vector<int>> dist;
    dist.reserve(subs.size());
    for (const Subdomain& s : subs) {
        dist.push_back(chebyshev_distance_field(grid, s.interface_nodes));
    }
    for (std::size_t j = 0; j < subs.size(); ++j) {
        for (int p : subs[j].interface_nodes) {
            bool ok = false;
            for (std::size_t j2 = 0; j2 < subs.size() && !ok; ++j2) {
                if (j2 == j) continue;
                ok = subs[j2].is_local_interior(p) && dist[j2][p] >= overlap - 1;
            }
            require(ok, "overlap too thin: interface node " + std::to_string(p) +
                            " of subdomain " + std::to_string(subs[j].id) +
                            " is not strongly covered by any other subdomain");
        }
    }
    return subs;
}

PartitionOfUnity build_partition_of_unity(const GlobalGrid& grid,
                                          const std::vector<Subdomain>& subdomains) {
    require(!subdomains.empty(), "partition of unity needs at least one subdomain");
    const int J = static_cast<int>(subdomains.size());
    const int big = grid.nx() + grid.nz();

    // Integer raw weights: distance to Gamma_j minus one, clamped at zero, so
    // chi_j vanishes on Gamma_j and on the adjacent node layer.
    std::vector<std::vector<int>> w(J, std::vector<int>(grid.num_nodes(), 0));
    for (int j = 0; j < J; ++j) {
        if (subdomains[j].interface_nodes.empty()) {
            for (int node : subdomains[j].nodes) w[j][node] = big;
            continue;
        }
        const std::vector<int> dist =
            chebyshev_distance_field(grid, subdomains[j].interface_nodes);
        for (int node : subdomains[j].nodes) {
            w[j][node] = std::max(0, dist[node] - 1);
        }
    }

    PartitionOfUnity pou;
    pou.chi_.assign(J, std::vector<double>(grid.num_nodes(), 0.0));
    pou.support_.assign(J, {});
    for (int node : grid.domain_nodes()) {
        long long total = 0;
        for (int j = 0; j < J; ++j) total += w[j][node];
        require(total > 0, "partition of unity has no support at node " + std::to_string(node) +
                               " (x=" + std::to_string(grid.node_x(node)) +
                               ", z=" + std::to_string(grid.node_z(node)) +
                               "): overlap too thin");
        for (int j = 0; j < J; ++j) {
            if (w[j][node] == 0) continue;
            pou.chi_[j][node] = static_cast<double>(w[j][node]) / static_cast<double>(total);
            pou.support_[j].push_back(node);
        }
    }
    return pou;
}

}  // namespace mts
