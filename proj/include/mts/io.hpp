// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <utility>
#include <vector>

#include "mts/diagnostics.hpp"
#include "mts/discretization.hpp"
#include "mts/field.hpp"
#include "mts/schwarz.hpp"

namespace mts {

/// Shortest spelling with 17 significant digits; round-trips binary64
/// exactly and is byte-stable across runs.
std::string fmt_double(double v);

/// CSV with columns node_index,x,z,re,im over all domain nodes, or over
/// `nodes` when given.
void write_field_csv(const std::string& path, const GridField& field);
void write_field_csv(const std::string& path, const GridField& field,
                     const std::vector<int>& nodes);

/// CSV with columns n,interface_residual_2norm,global_residual_2norm,
/// err_maxnorm_1..err_maxnorm_J,gamma_hat.
void write_history_csv(const std::string& path, const IterationHistory& history,
                       int num_subdomains);

/// CSV with columns node_index,x,z,class,subdomain_memberships,chi_1..chi_J;
/// memberships are subdomain ids joined with '+'.
void write_decomposition_csv(const std::string& path, const GlobalGrid& grid,
                             const std::vector<Subdomain>& subdomains,
                             const PartitionOfUnity& pou);

/// CSV with columns n,j,max_interior,max_interface,ratio_K,violation_flag.
void write_max_modulus_csv(const std::string& path, const MaxModulusReport& report);

/// Matrix Market coordinate complex general, 1-based indices.
void write_matrix_market(const std::string& path, const SparseMatrixC& matrix,
                         const std::string& comment);

/// Key = value lines in insertion order.
void write_manifest(const std::string& path,
                    const std::vector<std::pair<std::string, std::string>>& entries);

}  // namespace mts
