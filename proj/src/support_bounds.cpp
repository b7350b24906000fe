#include "moment_bounds/support_bounds.hpp"

#include "moment_bounds/error.hpp"
#include "moment_bounds/hankel.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <sstream>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "support-bounds";
// bracket grows to at most 2^20 times the moment scale
constexpr int kMaxExpand = 20;

double require_spread(const MomentSequence& ms, std::size_t need) {
    if (ms.order() < need)
        throw DomainError(kModule, "need moments up to m" + std::to_string(need) + ", have up to m" +
                                       std::to_string(ms.order()));
    const double m2 = ms[2];
    if (!(m2 > 0.0)) throw DomainError(kModule, "degenerate input: m2 = 0 (edgeless graph), support bounds undefined");
    return std::sqrt(m2);
}

void require_feasible(std::span<const double> m, int s) {
    const auto rep = check_hamburger(m, s);
    if (!rep.feasible) {
        std::ostringstream msg;
        msg << "moments are not feasible: Hankel matrix R_" << 2 * s << " has eigenvalue " << rep.min_eigenvalue
            << " < -" << rep.tolerance;
        throw DomainError(kModule, msg.str());
    }
}

double psd_slack(std::span<const double> m, int s, double c) {
    const auto p = hankel_pair(m, s);
    return 1e-12 * (1.0 + p.odd.max_abs() + std::abs(c) * p.even.max_abs());
}

// -H_s(c) >= 0
bool upper_side(std::span<const double> m, int s, double c) {
    return max_eigenvalue(localizing_matrix(m, s, c).h) <= psd_slack(m, s, c);
}

// H_s(c) >= 0
bool lower_side(std::span<const double> m, int s, double c) {
    return min_eig(localizing_matrix(m, s, c).h).value >= -psd_slack(m, s, c);
}

double boundary_residual(std::span<const double> m, int s, double alpha, double beta) {
    const double lo = std::abs(min_eig(localizing_matrix(m, s, alpha).h).value);
    const double hi = std::abs(max_eigenvalue(localizing_matrix(m, s, beta).h));
    return std::max(lo, hi) / (1.0 + hankel_pair(m, s).odd.max_abs());
}

double evaluate(double d3, double d2, double d1, double d0, double x) { return ((d3 * x + d2) * x + d1) * x + d0; }

double newton_polish(double d3, double d2, double d1, double d0, double x) {
    const double f = evaluate(d3, d2, d1, d0, x);
    const double df = (3.0 * d3 * x + 2.0 * d2) * x + d1;
    if (df == 0.0 || !std::isfinite(df)) return x;
    const double y = x - f / df;
    return std::abs(evaluate(d3, d2, d1, d0, y)) <= std::abs(f) ? y : x;
}

} // namespace

std::string_view to_string(BoundMethod m) { return m == BoundMethod::closed_form ? "closed_form" : "bisection"; }

CubicCoefficients localizing_cubic(std::span<const double> m) {
    if (m.size() < 6) throw DomainError(kModule, "cubic coefficients need m0..m5");
    const double m1 = m[1], m2 = m[2], m3 = m[3], m4 = m[4], m5 = m[5];
    CubicCoefficients d;
    d.d0 = 2 * m2 * m3 * m4 - m5 * m2 * m2 - m3 * m3 * m3 + m1 * m5 * m3 - m1 * m4 * m4;
    d.d1 = m2 * m3 * m3 - m2 * m2 * m4 + m1 * m5 * m2 - m1 * m3 * m4 - m5 * m3 + m4 * m4;
    d.d2 = m4 * m1 * m2 - m5 * m1 * m1 + m1 * m3 * m3 - m2 * m2 * m3 + m5 * m2 - m4 * m3;
    d.d3 = m4 * m1 * m1 - 2 * m1 * m2 * m3 + m2 * m2 * m2 - m4 * m2 + m3 * m3;
    return d;
}

std::vector<double> solve_cubic(double d3, double d2, double d1, double d0) {
    std::vector<double> roots;
    if (d3 == 0.0) {
        if (d2 == 0.0) {
            if (d1 == 0.0) throw DomainError(kModule, "solve_cubic: all coefficients are zero");
            return {-d0 / d1};
        }
        const double disc = d1 * d1 - 4.0 * d2 * d0;
        if (disc < 0.0) return {};
        const double q = -0.5 * (d1 + std::copysign(std::sqrt(disc), d1));
        if (q == 0.0) return {0.0, 0.0};
        roots = {q / d2, d0 / q};
    } else {
        Eigen::Matrix3d companion = Eigen::Matrix3d::Zero();
        companion(0, 0) = -d2 / d3;
        companion(0, 1) = -d1 / d3;
        companion(0, 2) = -d0 / d3;
        companion(1, 0) = 1.0;
        companion(2, 1) = 1.0;
        Eigen::EigenSolver<Eigen::Matrix3d> solver(companion, false);
        for (const auto& z : solver.eigenvalues())
            if (std::abs(z.imag()) <= 1e-6 * (1.0 + std::abs(z.real()))) roots.push_back(z.real());
    }
    for (auto& r : roots) r = newton_polish(d3, d2, d1, d0, r);
    std::sort(roots.begin(), roots.end());
    return roots;
}

SupportBounds bounds_s1(const MomentSequence& ms) {
    require_spread(ms, 3);
    const auto m = ms.values();
    require_feasible(m, 1);
    const double m1 = m[1], m2 = m[2], m3 = m[3];
    const double a = m2 - m1 * m1;
    const double b = m1 * m2 - m3;
    const double c = m1 * m3 - m2 * m2;
    if (!(a > 0.0)) throw DomainError(kModule, "degenerate input: zero variance, support bounds undefined");
    const double disc = std::max(0.0, b * b - 4.0 * a * c);
    const double q = -0.5 * (b + std::copysign(std::sqrt(disc), b));
    double r1 = q / a;
    double r2 = q != 0.0 ? c / q : r1;
    SupportBounds out;
    out.level = 1;
    out.method = BoundMethod::closed_form;
    out.alpha = std::min(r1, r2);
    out.beta = std::max(r1, r2);
    out.residual = boundary_residual(m, 1, out.alpha, out.beta);
    return out;
}

SupportBounds bounds_s2(const MomentSequence& ms) {
    const double sigma = require_spread(ms, 5);
    const auto mu = ms.truncated(5).scaled(sigma);
    require_feasible(mu, 2);

    const auto fallback = [&](const std::string& why) {
        SupportBounds b = bounds_bisect(ms, 2);
        b.diagnostic = why + "; used PSD bisection";
        return b;
    };
    if (!strong_duality_holds(mu, 2)) {
        // Two atoms: H_1 is a principal block of H_2, so alpha_2 <= alpha_1, with
        // equality once H_2(alpha_1) >= 0. Same for beta.
        if (strong_duality_holds(mu, 1)) {
            SupportBounds b = bounds_s1(ms);
            if (lower_side(mu, 2, b.alpha / sigma) && upper_side(mu, 2, b.beta / sigma)) {
                b.level = 2;
                b.residual = boundary_residual(mu, 2, b.alpha / sigma, b.beta / sigma);
                b.diagnostic = "Hankel matrix R_4 is singular; two-atom measure, level 1 roots are exact";
                return b;
            }
        }
        return fallback("Hankel matrix R_4 is singular, cubic degenerates");
    }

    const auto d = localizing_cubic(mu);
    const double scale = std::max({std::abs(d.d0), std::abs(d.d1), std::abs(d.d2), std::abs(d.d3)});
    if (std::abs(d.d3) <= 1e-12 * scale) return fallback("leading cubic coefficient below tolerance");
    const auto roots = solve_cubic(d.d3, d.d2, d.d1, d.d0);
    if (roots.size() < 2) return fallback("cubic has fewer than two real roots");

    SupportBounds out;
    out.level = 2;
    out.method = BoundMethod::closed_form;
    out.alpha = sigma * roots.front();
    out.beta = sigma * roots.back();
    out.residual = boundary_residual(mu, 2, roots.front(), roots.back());
    return out;
}

SupportBounds bounds_bisect(const MomentSequence& ms, int s, double tol) {
    if (s < 0) throw DomainError(kModule, "level must be nonnegative");
    if (!(tol > 0.0)) throw DomainError(kModule, "bisection tolerance must be positive");
    const auto need = 2 * static_cast<std::size_t>(s) + 1;
    const double sigma = require_spread(ms, std::max<std::size_t>(need, 2));
    const auto mu = ms.truncated(need).scaled(sigma);
    require_feasible(mu, s);

    const double width = tol / sigma;
    const double center = mu[1];
    double reach = 1.0;
    for (std::size_t k = 1; k < mu.size(); ++k) reach = std::max(reach, std::pow(std::abs(mu[k]), 1.0 / double(k)));
    reach *= 2.0;

    // Both sets are intervals because H_s(c) is decreasing in c (R_2s >= 0).
    double hi = center + reach;
    double lo = center - reach;
    for (int expand = 0; !upper_side(mu, s, hi); ++expand) {
        if (expand == kMaxExpand) throw DomainError(kModule, "bisection: no PSD transition above the mean");
        hi = center + (hi - center) * 2.0;
    }
    for (int expand = 0; !lower_side(mu, s, lo); ++expand) {
        if (expand == kMaxExpand) throw DomainError(kModule, "bisection: no PSD transition below the mean");
        lo = center - (center - lo) * 2.0;
    }

    SupportBounds out;
    out.level = s;
    out.method = BoundMethod::bisection;
    out.bracket_lo = sigma * lo;
    out.bracket_hi = sigma * hi;

    double a = center, b = hi;
    if (upper_side(mu, s, a)) {
        b = a;
    } else {
        while (b - a > width) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            (upper_side(mu, s, mid) ? b : a) = mid;
        }
    }
    const double beta = 0.5 * (a + b);

    a = lo;
    b = center;
    if (lower_side(mu, s, b)) {
        a = b;
    } else {
        while (b - a > width) {
            const double mid = 0.5 * (a + b);
            if (mid <= a || mid >= b) break;
            (lower_side(mu, s, mid) ? a : b) = mid;
        }
    }
    const double alpha = 0.5 * (a + b);

    out.alpha = sigma * alpha;
    out.beta = sigma * beta;
    out.residual = boundary_residual(mu, s, alpha, beta);
    return out;
}

} // namespace moment_bounds
