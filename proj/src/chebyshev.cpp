#include "moment_bounds/chebyshev.hpp"

#include "moment_bounds/error.hpp"

#include <cmath>

namespace moment_bounds::chebyshev {

namespace {

std::vector<std::vector<double>> binomials(std::size_t n) {
    std::vector<std::vector<double>> c(n + 1);
    for (std::size_t i = 0; i <= n; ++i) {
        c[i].assign(i + 1, 1.0);
        for (std::size_t j = 1; j < i; ++j) c[i][j] = c[i - 1][j - 1] + c[i - 1][j];
    }
    return c;
}

} // namespace

std::vector<double> multiply(std::span<const double> a, std::span<const double> b) {
    if (a.empty() || b.empty()) return {};
    std::vector<double> out(a.size() + b.size() - 1, 0.0);
    for (std::size_t i = 0; i < a.size(); ++i)
        for (std::size_t j = 0; j < b.size(); ++j) {
            const double half = 0.5 * a[i] * b[j];
            out[i + j] += half;
            out[i > j ? i - j : j - i] += half;
        }
    return out;
}

double evaluate(std::span<const double> c, double u) {
    double b1 = 0.0, b2 = 0.0;
    for (std::size_t j = c.size(); j-- > 1;) {
        const double b0 = c[j] + 2.0 * u * b1 - b2;
        b2 = b1;
        b1 = b0;
    }
    return c.empty() ? 0.0 : c[0] + u * b1 - b2;
}

std::vector<std::vector<double>> monomial_table(std::size_t degree) {
    std::vector<std::vector<double>> t(degree + 1, std::vector<double>(degree + 1, 0.0));
    t[0][0] = 1.0;
    if (degree >= 1) t[1][1] = 1.0;
    for (std::size_t j = 2; j <= degree; ++j)
        for (std::size_t i = 0; i <= degree; ++i) {
            t[j][i] = -t[j - 2][i];
            if (i > 0) t[j][i] += 2.0 * t[j - 1][i - 1];
        }
    return t;
}

std::vector<double> moments(std::span<const double> m, double center, double half_width, std::size_t degree) {
    if (m.size() <= degree) throw DomainError("eigencount", "not enough moments for the requested degree");
    if (!(half_width > 0.0)) throw DomainError("eigencount", "interval half-width must be positive");
    const auto binom = binomials(degree);
    std::vector<double> mu(degree + 1, 0.0);
    for (std::size_t j = 0; j <= degree; ++j) {
        double s = 0.0;
        for (std::size_t i = 0; i <= j; ++i) s += binom[j][i] * m[i] * std::pow(-center, double(j - i));
        mu[j] = s / std::pow(half_width, double(j));
    }
    const auto t = monomial_table(degree);
    std::vector<double> tau(degree + 1, 0.0);
    for (std::size_t j = 0; j <= degree; ++j)
        for (std::size_t i = 0; i <= j; ++i) tau[j] += t[j][i] * mu[i];
    return tau;
}

std::vector<double> to_monomial(std::span<const double> c, double center, double half_width) {
    if (c.empty()) return {};
    const std::size_t degree = c.size() - 1;
    const auto t = monomial_table(degree);
    std::vector<double> in_u(degree + 1, 0.0);
    for (std::size_t j = 0; j <= degree; ++j)
        for (std::size_t i = 0; i <= j; ++i) in_u[i] += c[j] * t[j][i];
    // u^i = (x - center)^i / h^i
    const auto binom = binomials(degree);
    std::vector<double> out(degree + 1, 0.0);
    for (std::size_t i = 0; i <= degree; ++i) {
        const double scale = in_u[i] / std::pow(half_width, double(i));
        for (std::size_t r = 0; r <= i; ++r) out[r] += scale * binom[i][r] * std::pow(-center, double(i - r));
    }
    return out;
}

} // namespace moment_bounds::chebyshev
