#pragma once

#include "moment_bounds/linalg.hpp"
#include "moment_bounds/moments.hpp"

#include <optional>
#include <span>

namespace moment_bounds {

/// Moment matrices of level s: even(i,j) = m_{i+j}, odd(i,j) = m_{i+j+1},
/// both (s+1)x(s+1).
struct HankelPair {
    int level = 0;
    Matrix even;
    Matrix odd;
};

/// H_s(c) = odd - c * even.
struct LocalizingMatrix {
    int level = 0;
    double shift = 0;
    Matrix h;
};

struct FeasibilityReport {
    bool feasible = false;
    double min_eigenvalue = 0; ///< witness: smallest eigenvalue of the even Hankel matrix
    double tolerance = 0;
};

HankelPair hankel_pair(std::span<const double> m, int s);
HankelPair hankel_pair(const MomentSequence& ms, int s);

LocalizingMatrix localizing_matrix(std::span<const double> m, int s, double c);
LocalizingMatrix localizing_matrix(const MomentSequence& ms, int s, double c);

/// 1e-9 * (1 + max|R|).
double default_psd_tolerance(const Matrix& r);

/// Hamburger condition: the even Hankel matrix of level s is PSD (within tol).
FeasibilityReport check_hamburger(std::span<const double> m, int s, std::optional<double> tol = {});
FeasibilityReport check_hamburger(const MomentSequence& ms, int s, std::optional<double> tol = {});

/// True when the even Hankel matrix is positive definite by more than tol,
/// the condition under which primal and dual moment problems agree.
bool strong_duality_holds(std::span<const double> m, int s, std::optional<double> tol = {});
bool strong_duality_holds(const MomentSequence& ms, int s, std::optional<double> tol = {});

} // namespace moment_bounds
