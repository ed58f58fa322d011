// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <vector>

#include "mts/field.hpp"
#include "mts/geometry.hpp"
#include "mts/schwarz.hpp"

namespace mts {

/// One maximum-modulus observation for a subdomain's error field: the largest
/// |e| over the local interior, over the interface, and the interface-scaled
/// maximum over the partition-of-unity support (the contraction witness).
struct MaxModulusEntry {
    int n = 0;
    int j = 0;  ///< 1-based subdomain id
    double max_interior = 0.0;
    double max_interface = 0.0;
    double ratio_K = 0.0;
    bool violation = false;
};

struct MaxModulusReport {
    std::vector<MaxModulusEntry> entries;
};

/// Max over interior nodes of |Delta_h(|u|^2) - 2 |grad_h u|^2|, the discrete
/// defect of the subharmonicity identity for homogeneous solutions. For an
/// exact solution sampled on the grid the defect is O(h^2).
double subharmonic_defect(const GridField& u, const GlobalGrid& grid);

/// The pointwise defect field behind subharmonic_defect (zero outside the
/// interior), for inspection and export.
GridField subharmonic_defect_field(const GridField& u, const GlobalGrid& grid);

/// Checks the maximum-modulus principle for an error field on one subdomain.
/// `support` is the partition-of-unity support K_j. A violation is flagged
/// when the interior maximum exceeds the interface maximum by more than a
/// 1e-12 relative margin. Subdomains without an interface never flag.
MaxModulusEntry check_max_modulus(const GridField& e, const Subdomain& subdomain,
                                  const std::vector<int>& support);

/// Min over the subdomain's interior nodes of Delta_h(|e|^2). For discrete
/// homogeneous solutions this is nonnegative up to rounding.
double min_modulus_laplacian(const GridField& e, const Subdomain& subdomain);

/// Contraction factor from a history: median of the last ten E_{n+1}/E_n
/// ratios of the error-norm series (interface residuals when error norms are
/// absent). Requires at least 12 recorded iterations.
double estimate_contraction(const IterationHistory& history);

}  // namespace mts
