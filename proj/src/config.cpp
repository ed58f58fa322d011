// SPDX-License-Identifier: Apache-2.0
#include "mts/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "mts/expressions.hpp"
#include "mts/io.hpp"

namespace mts {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return "";
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

[[noreturn]] void fail(const std::string& name, int line, const std::string& msg) {
    throw ConfigError(name + ":" + std::to_string(line) + ": " + msg);
}

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> parts;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            parts.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    parts.push_back(trim(cur));
    return parts;
}

double number_or_fail(const std::string& text, const std::string& name, int line,
                      const std::string& key) {
    try {
        return parse_number(text);
    } catch (const std::exception& e) {
        fail(name, line, key + ": " + e.what());
    }
}

long long integer_or_fail(const std::string& text, const std::string& name, int line,
                          const std::string& key) {
    long long v = 0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc{} || res.ptr != text.data() + text.size()) {
        fail(name, line, key + ": '" + text + "' is not an integer");
    }
    return v;
}

std::vector<Rect> rects_or_fail(const std::string& text, const std::string& name, int line,
                                const std::string& key) {
    std::vector<Rect> rects;
    for (const std::string& group : split(text, ';')) {
        if (group.empty()) continue;
        std::istringstream in(group);
        std::vector<std::string> nums;
        std::string tok;
        while (in >> tok) nums.push_back(tok);
        if (nums.size() != 4) {
            fail(name, line,
                 key + ": rectangle '" + group + "' needs 4 numbers (xlo zlo xhi zhi)");
        }
        Rect r;
        r.xlo = number_or_fail(nums[0], name, line, key);
        r.zlo = number_or_fail(nums[1], name, line, key);
        r.xhi = number_or_fail(nums[2], name, line, key);
        r.zhi = number_or_fail(nums[3], name, line, key);
        rects.push_back(r);
    }
    if (rects.empty()) fail(name, line, key + ": no rectangles given");
    return rects;
}

}  // namespace

double parse_number(const std::string& text) {
    const auto slash = text.find('/');
    if (slash != std::string::npos) {
        const double num = parse_number(trim(text.substr(0, slash)));
        const double den = parse_number(trim(text.substr(slash + 1)));
        if (den == 0.0) throw std::invalid_argument("division by zero in '" + text + "'");
        return num / den;
    }
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        throw std::invalid_argument("'" + text + "' is not a number");
    }
    if (used != text.size()) throw std::invalid_argument("'" + text + "' is not a number");
    return v;
}

double RunConfig::resolved_h() const {
    if (h) return *h;
    return 1.0 / (static_cast<double>(*points_per_unit) - 1.0);
}

RunConfig parse_config_text(const std::string& text, const std::string& name) {
    RunConfig cfg;
    bool saw_domain = false, saw_d = false, saw_omega = false;
    int init_line = 0;

    std::istringstream in(text);
    std::string raw;
    int line = 0;
    while (std::getline(in, raw)) {
        ++line;
        std::string s = raw;
        const auto hash = s.find('#');
        if (hash != std::string::npos) s = s.substr(0, hash);
        s = trim(s);
        if (s.empty()) continue;
        const auto eq = s.find('=');
        if (eq == std::string::npos) fail(name, line, "expected 'key = value', got '" + s + "'");
        const std::string key = trim(s.substr(0, eq));
        const std::string value = trim(s.substr(eq + 1));
        if (key.empty()) fail(name, line, "empty key");
        if (value.empty()) fail(name, line, key + ": empty value");
        cfg.entries.emplace_back(key, value);

        if (key == "domain.rects") {
            cfg.domain = rects_or_fail(value, name, line, key);
            saw_domain = true;
        } else if (key == "grid.h") {
            cfg.h = number_or_fail(value, name, line, key);
            if (*cfg.h <= 0.0) fail(name, line, "grid.h must be positive");
        } else if (key == "grid.points_per_unit") {
            const long long p = integer_or_fail(value, name, line, key);
            if (p < 2) fail(name, line, "grid.points_per_unit must be at least 2");
            cfg.points_per_unit = static_cast<int>(p);
        } else if (key == "tiling.rects") {
            cfg.tiling = rects_or_fail(value, name, line, key);
        } else if (key == "schwarz.d") {
            cfg.overlap = static_cast<int>(integer_or_fail(value, name, line, key));
            if (cfg.overlap < 2) fail(name, line, "schwarz.d must be >= 2");
            saw_d = true;
        } else if (key == "problem.omega") {
            cfg.omega = number_or_fail(value, name, line, key);
            if (cfg.omega == 0.0) fail(name, line, "problem.omega must be non-zero");
            saw_omega = true;
        } else if (key == "source.mode") {
            if (value == "rhs_zero") {
                cfg.source = SourceMode::rhs_zero;
            } else if (value == "manufactured") {
                cfg.source = SourceMode::manufactured;
            } else if (value == "currents") {
                cfg.source = SourceMode::currents;
            } else {
                fail(name, line,
                     "source.mode must be rhs_zero, manufactured or currents, got '" + value +
                         "'");
            }
        } else if (key == "source.jx") {
            if (!has_expression(value)) fail(name, line, "source.jx: unknown expression '" + value + "'");
            cfg.jx_id = value;
        } else if (key == "source.jz") {
            if (!has_expression(value)) fail(name, line, "source.jz: unknown expression '" + value + "'");
            cfg.jz_id = value;
        } else if (key == "init.kind") {
            if (value == "zero") {
                cfg.init.kind = InitialGuess::Kind::zero;
            } else if (value == "uniform_random") {
                cfg.init.kind = InitialGuess::Kind::uniform_random;
            } else {
                fail(name, line, "init.kind must be zero or uniform_random, got '" + value + "'");
            }
            init_line = line;
        } else if (key == "init.lo") {
            cfg.init.lo = number_or_fail(value, name, line, key);
            init_line = line;
        } else if (key == "init.hi") {
            cfg.init.hi = number_or_fail(value, name, line, key);
            init_line = line;
        } else if (key == "init.seed") {
            const long long s = integer_or_fail(value, name, line, key);
            if (s < 0) fail(name, line, "init.seed must be nonnegative");
            cfg.init.seed = static_cast<std::uint64_t>(s);
        } else if (key == "schwarz.tol") {
            cfg.tol = number_or_fail(value, name, line, key);
            if (cfg.tol < 0.0) fail(name, line, "schwarz.tol must be nonnegative");
        } else if (key == "schwarz.max_iter") {
            const long long m = integer_or_fail(value, name, line, key);
            if (m < 0) fail(name, line, "schwarz.max_iter must be nonnegative");
            cfg.max_iter = static_cast<int>(m);
        } else if (key == "schwarz.threads") {
            const long long t = integer_or_fail(value, name, line, key);
            if (t < 1) fail(name, line, "schwarz.threads must be at least 1");
            cfg.threads = static_cast<int>(t);
        } else if (key == "output.dir") {
            cfg.output_dir = value;
        } else {
            fail(name, line, "unknown key '" + key + "'");
        }
    }

    if (!saw_domain) fail(name, line, "missing required key domain.rects");
    if (!cfg.h && !cfg.points_per_unit) {
        fail(name, line, "one of grid.h or grid.points_per_unit is required");
    }
    if (cfg.h && cfg.points_per_unit) {
        fail(name, line, "grid.h and grid.points_per_unit are mutually exclusive");
    }
    if (!saw_d) fail(name, line, "missing required key schwarz.d");
    if (!saw_omega) fail(name, line, "missing required key problem.omega");
    if (cfg.init.lo > cfg.init.hi) {
        fail(name, init_line > 0 ? init_line : line, "init.lo must be <= init.hi");
    }
    return cfg;
}

RunConfig parse_config_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError(path + ": cannot open config file");
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

void apply_overrides(RunConfig& config, const CliOverrides& overrides) {
    const auto set_entry = [&](const std::string& key, const std::string& value) {
        for (auto& [k, v] : config.entries) {
            if (k == key) {
                v = value;
                return;
            }
        }
        config.entries.emplace_back(key, value);
    };
    if (overrides.seed) {
        config.init.seed = *overrides.seed;
        set_entry("init.seed", std::to_string(*overrides.seed));
    }
    if (overrides.tol) {
        require(*overrides.tol >= 0.0, "--tol must be nonnegative");
        config.tol = *overrides.tol;
        set_entry("schwarz.tol", fmt_double(*overrides.tol));
    }
    if (overrides.max_iter) {
        require(*overrides.max_iter >= 0, "--max-iter must be nonnegative");
        config.max_iter = *overrides.max_iter;
        set_entry("schwarz.max_iter", std::to_string(*overrides.max_iter));
    }
    if (overrides.threads) {
        require(*overrides.threads >= 1, "--threads must be at least 1");
        config.threads = *overrides.threads;
        set_entry("schwarz.threads", std::to_string(*overrides.threads));
    }
    if (overrides.out) {
        config.output_dir = *overrides.out;
        set_entry("output.dir", *overrides.out);
    }
}

}  // namespace mts
