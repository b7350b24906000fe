#pragma once

#include "moment_bounds/linalg.hpp"

#include <optional>
#include <string_view>
#include <vector>

namespace moment_bounds {

/// One linear matrix inequality: sum_j y_j * coefficients[j] - constant >= 0.
struct SdpBlock {
    Matrix constant;
    std::vector<Matrix> coefficients;
};

struct VarBound {
    std::optional<double> lower;
    std::optional<double> upper;
};

/// minimize objective . y subject to every block being PSD.
struct SdpProblem {
    std::size_t num_vars = 0;
    std::vector<double> objective;
    std::vector<SdpBlock> blocks;
    std::vector<VarBound> var_bounds; ///< empty or one entry per variable

    /// Throws DomainError on shape mismatches or asymmetric matrices.
    void validate() const;
};

enum class SdpStatus { optimal, infeasible, unbounded, max_iter };
std::string_view to_string(SdpStatus s);

struct SdpSolution {
    std::vector<double> y;
    double objective_value = 0;
    SdpStatus status = SdpStatus::max_iter;
    std::vector<double> psd_margins; ///< lambda_min of each block at y
    double duality_gap_estimate = 0;
    int iterations = 0;
};

struct SdpOptions {
    double tol = 1e-9;
    int max_iter = 2000; ///< Newton steps over both phases
};

/// Log-barrier path following. A phase-1 problem (maximize s with every
/// block - s I >= 0) supplies a strictly feasible start or proves
/// infeasibility. When the feasible set has no interior the blocks are
/// relaxed by tol.
SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt = {});

} // namespace moment_bounds
