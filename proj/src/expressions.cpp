// SPDX-License-Identifier: Apache-2.0
#include "mts/expressions.hpp"

#include <cmath>
#include <numbers>

namespace mts {

namespace {

constexpr double kPi = std::numbers::pi;

const Expression kTable[] = {
    {"zero", "0", [](double, double) { return Complex{0.0, 0.0}; }},
    {"one", "1", [](double, double) { return Complex{1.0, 0.0}; }},
    {"x", "x", [](double x, double) { return Complex{x, 0.0}; }},
    {"z", "z", [](double, double z) { return Complex{z, 0.0}; }},
    {"z_squared", "z^2", [](double, double z) { return Complex{z * z, 0.0}; }},
    {"sin_pi_x", "sin(pi x)", [](double x, double) { return Complex{std::sin(kPi * x), 0.0}; }},
    {"sin_pi_z", "sin(pi z)", [](double, double z) { return Complex{std::sin(kPi * z), 0.0}; }},
    {"cos_pi_x", "cos(pi x)", [](double x, double) { return Complex{std::cos(kPi * x), 0.0}; }},
    {"sine_product", "sin(pi x) sin(pi z)",
     [](double x, double z) { return Complex{std::sin(kPi * x) * std::sin(kPi * z), 0.0}; }},
    {"gaussian_bump", "exp(-8((x-1)^2+(z-0.5)^2))",
     [](double x, double z) {
         const double dx = x - 1.0, dz = z - 0.5;
         return Complex{std::exp(-8.0 * (dx * dx + dz * dz)), 0.0};
     }},
};

}  // namespace

bool has_expression(const std::string& id) {
    for (const Expression& e : kTable) {
        if (id == e.id) return true;
    }
    return false;
}

const Expression& expression(const std::string& id) {
    for (const Expression& e : kTable) {
        if (id == e.id) return e;
    }
    std::string known;
    for (const Expression& e : kTable) {
        known += known.empty() ? e.id : std::string(", ") + e.id;
    }
    throw std::invalid_argument("unknown expression id '" + id + "' (known: " + known + ")");
}

std::vector<std::string> expression_ids() {
    std::vector<std::string> ids;
    for (const Expression& e : kTable) ids.emplace_back(e.id);
    return ids;
}

GridField sample_expression(const GlobalGrid& grid, const std::string& id) {
    const Expression& e = expression(id);
    return sample(grid, [&](double x, double z) { return e.fn(x, z); });
}

GridField manufactured_solution(const GlobalGrid& grid) {
    return sample_expression(grid, "sine_product");
}

GridField manufactured_rhs(const GlobalGrid& grid, double omega) {
    const Complex factor{-2.0 * kPi * kPi, -omega};
    GridField f = manufactured_solution(grid);
    for (Complex& v : f.values()) v *= factor;
    return f;
}

}  // namespace mts
