#pragma once

#include "moment_bounds/moments.hpp"

#include <string>
#include <string_view>
#include <vector>

namespace moment_bounds {

enum class BoundMethod { closed_form, bisection };
std::string_view to_string(BoundMethod m);

/// Inner approximation [alpha, beta] of the support of a measure from its
/// first 2s+1 moments: alpha >= smallest support point, beta <= largest.
/// For a graph spectrum, alpha bounds lambda_min from above and beta bounds
/// the spectral radius from below.
struct SupportBounds {
    int level = 0;
    double alpha = 0;
    double beta = 0;
    BoundMethod method = BoundMethod::closed_form;
    double residual = 0;     ///< largest |extreme eigenvalue of H_s| at alpha and beta
    double bracket_lo = 0;   ///< bisection bracket actually used (0 for closed forms)
    double bracket_hi = 0;
    std::string diagnostic;  ///< set when a fallback was taken
};

/// Roots of det H_1(c) = (m2 - m1^2) c^2 + (m1 m2 - m3) c + (m1 m3 - m2^2).
SupportBounds bounds_s1(const MomentSequence& ms);

/// Extreme roots of p3(c) = det H_2(c) = d3 c^3 + d2 c^2 + d1 c + d0. Falls
/// back to bisection when the cubic degenerates (singular R_4).
SupportBounds bounds_s2(const MomentSequence& ms);

/// alpha = sup{c : H_s(c) >= 0}, beta = inf{c : -H_s(c) >= 0} by bisection on
/// the PSD certificate. `tol` is the final bracket width in the units of the
/// moments' variable.
SupportBounds bounds_bisect(const MomentSequence& ms, int s, double tol = 1e-9);

struct CubicCoefficients {
    double d0 = 0, d1 = 0, d2 = 0, d3 = 0;
};

/// Coefficients of det H_2(c) in terms of m1..m5 (m0 = 1).
CubicCoefficients localizing_cubic(std::span<const double> m);

/// Real roots of d3 c^3 + d2 c^2 + d1 c + d0, ascending, each refined by a
/// Newton step. Leading zero coefficients reduce the degree.
std::vector<double> solve_cubic(double d3, double d2, double d1, double d0);

} // namespace moment_bounds
