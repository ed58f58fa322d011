// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <memory>
#include <unordered_map>

#include "mts/discretization.hpp"

namespace mts {

/// Reusable sparse LU factorization of a DiscreteProblem operator. Factor
/// once per subdomain, then solve every iteration. All solve entry points are
/// const and safe to call concurrently on one factorization.
class Factorization {
public:
    const DiscreteProblem& problem() const { return problem_; }

    /// Back-substitution for an assembled right-hand side.
    VectorC solve(const VectorC& rhs) const;

    Factorization(Factorization&&) noexcept;
    Factorization& operator=(Factorization&&) noexcept;
    ~Factorization();

private:
    friend Factorization factor(DiscreteProblem problem);
    Factorization();

    DiscreteProblem problem_;
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

/// Factors the operator with column-reordered sparse LU (COLAMD ordering,
/// fixed, so repeated factorizations are bit-identical). Throws when a pivot
/// is numerically singular, naming the problem.
Factorization factor(DiscreteProblem problem);

/// Solves the Dirichlet problem with right-hand side f and interface data g
/// (node index -> value); physical-boundary data is 0. Returns the local
/// field on all subdomain nodes: solved values at interior nodes, g on the
/// interface, 0 on the physical boundary. Rejects g missing an interface
/// node.
GridField solve_dirichlet(const Factorization& factorization, const GridField& f,
                          const std::unordered_map<int, Complex>& g);

}  // namespace mts
