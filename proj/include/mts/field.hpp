// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cmath>
#include <functional>
#include <vector>

#include "mts/common.hpp"
#include "mts/geometry.hpp"

namespace mts {

/// Complex-valued function on the domain nodes of a grid. Storage is compact
/// (one value per domain node); access is by global node index. The grid must
/// outlive every field created on it.
class GridField {
public:
    explicit GridField(const GlobalGrid& grid)
        : grid_(&grid), values_(grid.num_domain_nodes(), Complex{0.0, 0.0}) {}

    const GlobalGrid& grid() const { return *grid_; }
    int size() const { return static_cast<int>(values_.size()); }

    Complex operator[](int node) const { return values_[checked_slot(node)]; }
    Complex& operator[](int node) { return values_[checked_slot(node)]; }

    std::vector<Complex>& values() { return values_; }
    const std::vector<Complex>& values() const { return values_; }

private:
    int checked_slot(int node) const {
        const int s = grid_->domain_slot(node);
        if (s < 0) {
            throw std::out_of_range("GridField: node " + std::to_string(node) +
                                    " is not a domain node");
        }
        return s;
    }

    const GlobalGrid* grid_;
    std::vector<Complex> values_;
};

inline bool all_finite(const GridField& f) {
    for (const Complex& v : f.values()) {
        if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
    }
    return true;
}

/// Samples a scalar function of (x, z) at every domain node.
inline GridField sample(const GlobalGrid& grid, const std::function<Complex(double, double)>& fn) {
    GridField out(grid);
    for (int node : grid.domain_nodes()) {
        out[node] = fn(grid.node_x(node), grid.node_z(node));
    }
    return out;
}

inline double max_abs(const GridField& f) {
    double m = 0.0;
    for (const Complex& v : f.values()) m = std::max(m, std::abs(v));
    return m;
}

inline double max_abs_over(const GridField& f, const std::vector<int>& nodes) {
    double m = 0.0;
    for (int node : nodes) m = std::max(m, std::abs(f[node]));
    return m;
}

}  // namespace mts
