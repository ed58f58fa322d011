// SPDX-License-Identifier: Apache-2.0
#include "mts/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>

namespace mts {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
    return out;
}

}  // namespace

std::string fmt_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

void write_field_csv(const std::string& path, const GridField& field) {
    write_field_csv(path, field, field.grid().domain_nodes());
}

void write_field_csv(const std::string& path, const GridField& field,
                     const std::vector<int>& nodes) {
    const GlobalGrid& grid = field.grid();
    std::ofstream out = open_out(path);
    out << "node_index,x,z,re,im\n";
    for (int node : nodes) {
        out << node << ',' << fmt_double(grid.node_x(node)) << ','
            << fmt_double(grid.node_z(node)) << ',' << fmt_double(field[node].real()) << ','
            << fmt_double(field[node].imag()) << '\n';
    }
}

void write_history_csv(const std::string& path, const IterationHistory& history,
                       int num_subdomains) {
    std::ofstream out = open_out(path);
    out << "n,interface_residual_2norm,global_residual_2norm";
    for (int j = 1; j <= num_subdomains; ++j) out << ",err_maxnorm_" << j;
    out << ",gamma_hat\n";
    for (const IterationRecord& r : history.records) {
        out << r.n << ',' << fmt_double(r.interface_residual) << ','
            << fmt_double(r.global_residual);
        for (int j = 0; j < num_subdomains; ++j) {
            out << ',';
            if (j < static_cast<int>(r.error_maxnorm.size())) {
                out << fmt_double(r.error_maxnorm[j]);
            } else {
                out << "nan";
            }
        }
        out << ',' << fmt_double(r.gamma_hat) << '\n';
    }
}

void write_decomposition_csv(const std::string& path, const GlobalGrid& grid,
                             const std::vector<Subdomain>& subdomains,
                             const PartitionOfUnity& pou) {
    std::ofstream out = open_out(path);
    out << "node_index,x,z,class,subdomain_memberships";
    for (std::size_t j = 0; j < subdomains.size(); ++j) out << ",chi_" << j + 1;
    out << '\n';
    for (int node : grid.domain_nodes()) {
        out << node << ',' << fmt_double(grid.node_x(node)) << ','
            << fmt_double(grid.node_z(node)) << ','
            << (grid.is_interior(node) ? "interior" : "physical_boundary") << ',';
        std::string members;
        for (const Subdomain& s : subdomains) {
            if (s.contains(node)) {
                if (!members.empty()) members += '+';
                members += std::to_string(s.id);
            }
        }
        out << members;
        for (std::size_t j = 0; j < subdomains.size(); ++j) {
            out << ',' << fmt_double(pou.chi(static_cast<int>(j), node));
        }
        out << '\n';
    }
}

void write_max_modulus_csv(const std::string& path, const MaxModulusReport& report) {
    std::ofstream out = open_out(path);
    out << "n,j,max_interior,max_interface,ratio_K,violation_flag\n";
    for (const MaxModulusEntry& e : report.entries) {
        out << e.n << ',' << e.j << ',' << fmt_double(e.max_interior) << ','
            << fmt_double(e.max_interface) << ',' << fmt_double(e.ratio_K) << ','
            << (e.violation ? 1 : 0) << '\n';
    }
}

void write_matrix_market(const std::string& path, const SparseMatrixC& matrix,
                         const std::string& comment) {
    std::ofstream out = open_out(path);
    out << "%%MatrixMarket matrix coordinate complex general\n";
    if (!comment.empty()) out << "% " << comment << '\n';
    out << matrix.rows() << ' ' << matrix.cols() << ' ' << matrix.nonZeros() << '\n';
    for (int outer = 0; outer < matrix.outerSize(); ++outer) {
        for (SparseMatrixC::InnerIterator it(matrix, outer); it; ++it) {
            out << it.row() + 1 << ' ' << it.col() + 1 << ' ' << fmt_double(it.value().real())
                << ' ' << fmt_double(it.value().imag()) << '\n';
        }
    }
}

void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries) {
    std::ofstream out = open_out(path);
    for (const auto& [key, value] : entries) {
        out << key << " = " << value << '\n';
    }
}

}  // namespace mts
