// SPDX-License-Identifier: Apache-2.0
#include "mts/local_solver.hpp"

#include <Eigen/SparseLU>

namespace mts {

struct Factorization::Impl {
    Eigen::SparseLU<SparseMatrixC, Eigen::COLAMDOrdering<int>> lu;
};

Factorization::Factorization() : problem_{}, impl_(std::make_unique<Impl>()) {}
Factorization::Factorization(Factorization&&) noexcept = default;
Factorization& Factorization::operator=(Factorization&&) noexcept = default;
Factorization::~Factorization() = default;

Factorization factor(DiscreteProblem problem) {
    require(problem.A.rows() == problem.A.cols(), "operator must be square");
    Factorization f;
    f.problem_ = std::move(problem);
    if (f.problem_.num_unknowns() > 0) {
        f.impl_->lu.analyzePattern(f.problem_.A);
        f.impl_->lu.factorize(f.problem_.A);
        if (f.impl_->lu.info() != Eigen::Success) {
            throw std::runtime_error("LU factorization hit a singular pivot for " +
                                     f.problem_.label +
                                     "; this signals an assembly bug (omega != 0 systems are "
                                     "nonsingular)");
        }
    }
    return f;
}

VectorC Factorization::solve(const VectorC& rhs) const {
    if (problem_.num_unknowns() == 0) return VectorC{};
    VectorC x = impl_->lu.solve(rhs);
    if (impl_->lu.info() != Eigen::Success) {
        throw std::runtime_error("LU solve failed for " + problem_.label);
    }
    return x;
}

GridField solve_dirichlet(const Factorization& factorization, const GridField& f,
                          const std::unordered_map<int, Complex>& g) {
    const DiscreteProblem& p = factorization.problem();
    for (int node : p.interface_nodes) {
        require(g.count(node) > 0,
                "boundary data missing for interface node " + std::to_string(node) + " of " +
                    p.label);
    }

    VectorC b(p.num_unknowns());
    for (int row = 0; row < p.num_unknowns(); ++row) {
        b[row] = f[p.unknown_to_node[row]];
    }
    for (const BoundaryCoupling& c : p.couplings) {
        if (!c.physical) {
            b[c.row] -= c.coeff * g.at(c.boundary_node);
        }
    }

    const VectorC x = factorization.solve(b);
    GridField out(*p.grid);
    for (int row = 0; row < p.num_unknowns(); ++row) {
        out[p.unknown_to_node[row]] = x[row];
    }
    for (int node : p.interface_nodes) {
        out[node] = g.at(node);
    }
    return out;
}

}  // namespace mts
