// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "mts/geometry.hpp"
#include "mts/schwarz.hpp"

namespace mts {

/// Configuration-file error with file/line context in what().
class ConfigError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

enum class SourceMode { rhs_zero, manufactured, currents };

/// Parsed solver configuration. The file format is flat `key = value` lines
/// with dotted keys; see the README for the grammar.
struct RunConfig {
    std::vector<Rect> domain;
    std::optional<double> h;
    std::optional<int> points_per_unit;
    std::vector<Rect> tiling;  ///< defaults to the domain rectangles
    int overlap = 0;           ///< schwarz.d
    double omega = 0.0;
    SourceMode source = SourceMode::rhs_zero;
    std::string jx_id = "zero";
    std::string jz_id = "zero";
    InitialGuess init;
    double tol = 1e-10;
    int max_iter = 200;
    int threads = 1;
    std::string output_dir = ".";

    /// Raw key/value pairs in file order, echoed into run manifests.
    std::vector<std::pair<std::string, std::string>> entries;

    double resolved_h() const;
    const std::vector<Rect>& resolved_tiling() const { return tiling.empty() ? domain : tiling; }
};

/// Optional command-line overrides applied on top of a config file.
struct CliOverrides {
    std::optional<std::uint64_t> seed;
    std::optional<double> tol;
    std::optional<int> max_iter;
    std::optional<std::string> out;
    std::optional<int> threads;
};

RunConfig parse_config_text(const std::string& text, const std::string& name);
RunConfig parse_config_file(const std::string& path);

void apply_overrides(RunConfig& config, const CliOverrides& overrides);

/// Parses a number, accepting plain decimals and exact fractions like 1/29.
double parse_number(const std::string& text);

}  // namespace mts
