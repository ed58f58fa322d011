// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

#include "mts/field.hpp"

namespace mts {

/// Built-in scalar expressions of (x, z), addressed by id from configuration
/// files. Keeping the table fixed (rather than parsing formulas at runtime)
/// keeps runs reproducible.
struct Expression {
    const char* id;
    const char* description;
    Complex (*fn)(double x, double z);
};

/// Looks up an expression; throws listing the known ids when absent.
const Expression& expression(const std::string& id);

bool has_expression(const std::string& id);

std::vector<std::string> expression_ids();

GridField sample_expression(const GlobalGrid& grid, const std::string& id);

/// u*(x, z) = sin(pi x) sin(pi z): vanishes on the boundary of any rectangle
/// union with integer corners.
GridField manufactured_solution(const GlobalGrid& grid);

/// f = (-2 pi^2 - i omega) u*, the exact right-hand side for u*.
GridField manufactured_rhs(const GlobalGrid& grid, double omega);

}  // namespace mts
