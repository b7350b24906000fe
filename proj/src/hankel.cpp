#include "moment_bounds/hankel.hpp"

#include "moment_bounds/error.hpp"

namespace moment_bounds {

namespace {

constexpr const char* kModule = "moment-problem";

void require_moments(std::span<const double> m, std::size_t highest) {
    if (m.size() <= highest)
        throw DomainError(kModule, "need moments up to m" + std::to_string(highest) + ", have up to m" +
                                       std::to_string(m.empty() ? 0 : m.size() - 1));
}

Matrix even_hankel(std::span<const double> m, int s) {
    if (s < 0) throw DomainError(kModule, "Hankel level must be nonnegative");
    const auto size = static_cast<std::size_t>(s) + 1;
    require_moments(m, 2 * static_cast<std::size_t>(s));
    Matrix r(size, size);
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) r(i, j) = m[i + j];
    return r;
}

} // namespace

HankelPair hankel_pair(std::span<const double> m, int s) {
    if (s < 0) throw DomainError(kModule, "Hankel level must be nonnegative");
    const auto size = static_cast<std::size_t>(s) + 1;
    require_moments(m, 2 * static_cast<std::size_t>(s) + 1);
    HankelPair p{s, Matrix(size, size), Matrix(size, size)};
    for (std::size_t i = 0; i < size; ++i)
        for (std::size_t j = 0; j < size; ++j) {
            p.even(i, j) = m[i + j];
            p.odd(i, j) = m[i + j + 1];
        }
    return p;
}

HankelPair hankel_pair(const MomentSequence& ms, int s) { return hankel_pair(ms.values(), s); }

LocalizingMatrix localizing_matrix(std::span<const double> m, int s, double c) {
    const auto p = hankel_pair(m, s);
    return {s, c, p.odd - c * p.even};
}

LocalizingMatrix localizing_matrix(const MomentSequence& ms, int s, double c) {
    return localizing_matrix(ms.values(), s, c);
}

double default_psd_tolerance(const Matrix& r) { return 1e-9 * (1.0 + r.max_abs()); }

FeasibilityReport check_hamburger(std::span<const double> m, int s, std::optional<double> tol) {
    const Matrix r = even_hankel(m, s);
    FeasibilityReport rep;
    rep.tolerance = tol.value_or(default_psd_tolerance(r));
    rep.min_eigenvalue = min_eig(r).value;
    rep.feasible = rep.min_eigenvalue >= -rep.tolerance;
    return rep;
}

FeasibilityReport check_hamburger(const MomentSequence& ms, int s, std::optional<double> tol) {
    return check_hamburger(ms.values(), s, tol);
}

bool strong_duality_holds(std::span<const double> m, int s, std::optional<double> tol) {
    const Matrix r = even_hankel(m, s);
    return min_eig(r).value > tol.value_or(default_psd_tolerance(r));
}

bool strong_duality_holds(const MomentSequence& ms, int s, std::optional<double> tol) {
    return strong_duality_holds(ms.values(), s, tol);
}

} // namespace moment_bounds
