#pragma once

#include "moment_bounds/graph.hpp"
#include "moment_bounds/linalg.hpp"
#include "moment_bounds/moments.hpp"
#include "moment_bounds/sdp.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace moment_bounds {

struct Interval {
    double lo = 0;
    double hi = 0;
    bool operator==(const Interval&) const = default;
};

/// Upper-bound the fraction of eigenvalues inside `target`, knowing all of
/// them lie in `omega`, from the moments m_0..m_k.
struct IntervalQuery {
    Interval target;
    Interval omega;
    int k = 4;

    void validate() const;
};

struct EigencountOptions {
    double tol = 1e-8;
    /// Cap on the trace of every Gram matrix. Keeps the dual bounded when the
    /// spectrum has few atoms; only matters if it is reached.
    double trace_bound = 1e6;
    std::size_t certificate_samples = 100000;
};

struct EigencountResult {
    double z_d = 0;                   ///< sum_i y_i m_i
    std::vector<double> y;            ///< monomial coefficients of p(x)
    std::vector<double> chebyshev;    ///< coefficients of p on omega mapped to [-1, 1]
    std::vector<Matrix> certificate;  ///< Gram matrices: omega pair, then target pair
    SdpStatus status = SdpStatus::optimal;
    double omega_margin = 0;          ///< min of p sampled on omega
    double target_margin = 0;         ///< min of p - 1 sampled on target
    double duality_gap_estimate = 0;
    int iterations = 0;
    std::string note;
};

/// Degree-k polynomial p >= 0 on omega and p >= 1 on target minimizing
/// E[p(x)], encoded as a sum-of-squares program. The target is clipped to
/// omega. Throws DomainError when the moments fail the Hankel test.
EigencountResult eigencount_upper(const MomentSequence& ms, const IntervalQuery& q,
                                  const EigencountOptions& opt = {});

struct SweepPoint {
    double alpha = 0;
    std::optional<EigencountResult> result;
    std::string error;
};

/// Z_D for target [omega.lo, alpha] at every alpha, in input order.
std::vector<SweepPoint> cdf_bound_sweep(const MomentSequence& ms, std::span<const double> alphas, Interval omega,
                                        int k, const EigencountOptions& opt = {}, unsigned threads = 1);

struct LpOracleResult {
    double value = 0;
    bool feasible = false;
    std::size_t grid_size = 0;
    std::string diagnostic;
};

/// Discretized primal: maximize the mass placed on grid points inside the
/// target subject to matching m_0..m_k with nonnegative weights on a uniform
/// grid over omega (target endpoints added). Dense two-phase simplex.
LpOracleResult primal_lp_oracle(const MomentSequence& ms, const IntervalQuery& q, std::size_t grid_size);

/// [-d_max, d_max].
Interval default_omega(const Graph& g);

/// [-r, r] with r = min over even k of (n m_k)^(1/k), since n m_k bounds
/// lambda_max^k.
Interval default_omega(const MomentSequence& ms);

/// Parses "lo:step:hi" into lo, lo + step, ... up to hi inclusive.
std::vector<double> parse_sweep(std::string_view spec);

} // namespace moment_bounds
