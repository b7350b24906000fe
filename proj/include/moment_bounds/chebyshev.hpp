#pragma once

#include <span>
#include <vector>

namespace moment_bounds::chebyshev {

/// Polynomials are coefficient vectors c with p(u) = sum_j c[j] T_j(u).

/// Product, using T_i T_j = (T_{i+j} + T_{|i-j|}) / 2.
std::vector<double> multiply(std::span<const double> a, std::span<const double> b);

/// Clenshaw recurrence.
double evaluate(std::span<const double> c, double u);

/// Row j holds the monomial coefficients of T_j: T_j(u) = sum_i row[i] u^i.
std::vector<std::vector<double>> monomial_table(std::size_t degree);

/// E[T_j(u)] for u = (x - center) / half_width, j = 0..degree, from the raw
/// moments m_i = E[x^i].
std::vector<double> moments(std::span<const double> m, double center, double half_width, std::size_t degree);

/// Monomial coefficients in x of sum_j c[j] T_j((x - center) / half_width).
std::vector<double> to_monomial(std::span<const double> c, double center, double half_width);

} // namespace moment_bounds::chebyshev
