// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "mts/config.hpp"
#include "mts/diagnostics.hpp"
#include "mts/io.hpp"

namespace mts {

/// Geometry built from a configuration: grid, overlapping decomposition and
/// partition of unity.
struct BuiltGeometry {
    GlobalGrid grid;
    std::vector<Subdomain> subdomains;
    PartitionOfUnity pou;
};

BuiltGeometry build_geometry(const RunConfig& config);

/// The two-unit-square setup of the reported experiments: 30x30 nodes per
/// square (h = 1/29, 59x30 lattice, shared node column at x = 1), tiled into
/// the two squares and enlarged by `overlap` grid layers.
BuiltGeometry two_square_geometry(int overlap);

/// Runs a configured solve and writes solution.csv, history.csv,
/// decomposition.csv and manifest.txt (plus e_x.csv / e_z.csv for current
/// sources) into the output directory. Exit status: 0 converged, 2 stopped at
/// max_iter, 1 configuration error.
int cmd_solve(const std::string& config_path, const CliOverrides& overrides = {});

struct Fig2Data {
    MaxModulusReport report;               ///< all subdomains, n = 1..15
    std::array<double, 3> left_maxima{};   ///< max |e_1| over the left subdomain at n = 1, 5, 15
    IterationHistory history;
};

/// Error-decay experiment: two squares, omega = 1, f = 0, d = 6, random
/// initial error uniform in [0, 1]. Runs 15 steps and writes the modulus of
/// the left-subdomain error at n = 1, 5, 15 together with the max-modulus
/// report.
Fig2Data run_fig2(std::uint64_t seed, const std::string& out_dir, int threads = 1);
int cmd_fig2(std::uint64_t seed, const std::string& out_dir, int threads = 1);

struct Fig3Data {
    std::vector<int> overlaps;                    ///< {2, 4, 6}
    std::vector<std::vector<double>> residuals;   ///< per overlap, n = 0..N
    std::vector<double> gamma_hats;               ///< per overlap
};

/// Residual-decay experiment: same setup as fig2 run for overlaps d = 2, 4, 6
/// with a fixed iteration count, writing a combined residual table and the
/// contraction estimates.
Fig3Data run_fig3(std::uint64_t seed, const std::string& out_dir, int threads = 1);
int cmd_fig3(std::uint64_t seed, const std::string& out_dir, int threads = 1);

/// Writes the global operator of a configured problem in Matrix Market
/// coordinate complex format. Exit status 0, or 1 on errors.
int cmd_export_matrix(const std::string& config_path, const std::string& out_path);

}  // namespace mts
