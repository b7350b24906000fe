#include "moment_bounds/eigencount.hpp"

#include "moment_bounds/chebyshev.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/hankel.hpp"
#include "moment_bounds/parallel.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "eigencount";

// Gram matrix variable block: sigma(u) = sum_ij G_ij T_i T_j, multiplied by `weight`.
struct GramVar {
    std::size_t size = 0;
    std::size_t offset = 0;
    std::vector<double> weight;
    std::size_t count() const { return size * (size + 1) / 2; }
};

std::size_t upper_index(std::size_t size, std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    // rows 0..i-1 hold size + (size-1) + ... entries
    return i * size - i * (i - 1) / 2 + (j - i);
}

struct AffineSpace {
    std::vector<double> origin; ///< z0
    Matrix basis;               ///< cols x free
};

// Solutions of a z = r as z0 + N w, by full-pivot reduction.
AffineSpace null_space(Matrix a, std::vector<double> r) {
    const std::size_t rows = a.rows(), cols = a.cols();
    std::vector<std::size_t> pivot_of_row;
    std::vector<bool> is_pivot(cols, false);
    const double scale = std::max(1.0, a.max_abs());
    std::size_t rank = 0;
    while (rank < rows) {
        double best = 0.0;
        std::size_t bi = 0, bj = 0;
        for (std::size_t i = rank; i < rows; ++i)
            for (std::size_t j = 0; j < cols; ++j)
                if (!is_pivot[j] && std::abs(a(i, j)) > best) {
                    best = std::abs(a(i, j));
                    bi = i;
                    bj = j;
                }
        if (best <= 1e-12 * scale) break;
        if (bi != rank) {
            for (std::size_t j = 0; j < cols; ++j) std::swap(a(bi, j), a(rank, j));
            std::swap(r[bi], r[rank]);
        }
        const double inv = 1.0 / a(rank, bj);
        for (std::size_t j = 0; j < cols; ++j) a(rank, j) *= inv;
        r[rank] *= inv;
        for (std::size_t i = 0; i < rows; ++i) {
            if (i == rank || a(i, bj) == 0.0) continue;
            const double f = a(i, bj);
            for (std::size_t j = 0; j < cols; ++j) a(i, j) -= f * a(rank, j);
            r[i] -= f * r[rank];
        }
        is_pivot[bj] = true;
        pivot_of_row.push_back(bj);
        ++rank;
    }
    for (std::size_t i = rank; i < rows; ++i)
        if (std::abs(r[i]) > 1e-9 * scale) throw ConsistencyError(kModule, "coefficient-matching equalities are inconsistent");

    std::vector<std::size_t> free;
    for (std::size_t j = 0; j < cols; ++j)
        if (!is_pivot[j]) free.push_back(j);
    AffineSpace s{std::vector<double>(cols, 0.0), Matrix(cols, free.size())};
    for (std::size_t i = 0; i < rank; ++i) s.origin[pivot_of_row[i]] = r[i];
    for (std::size_t f = 0; f < free.size(); ++f) {
        s.basis(free[f], f) = 1.0;
        for (std::size_t i = 0; i < rank; ++i) s.basis(pivot_of_row[i], f) = -a(i, free[f]);
    }
    return s;
}

// Adds sum over Gram entries of g * weight to rows [row0, row0 + degree] with sign -1.
void subtract_gram(Matrix& eq, std::size_t row0, std::size_t degree, const GramVar& g) {
    for (std::size_t i = 0; i < g.size; ++i)
        for (std::size_t j = i; j < g.size; ++j) {
            std::vector<double> basis(i + j + 1, 0.0);
            if (i == j) {
                basis[2 * i] += 0.5;
                basis[0] += 0.5;
            } else {
                basis[i + j] += 1.0;
                basis[j - i] += 1.0;
            }
            const auto poly = chebyshev::multiply(basis, g.weight);
            const std::size_t col = g.offset + upper_index(g.size, i, j);
            for (std::size_t l = 0; l < poly.size(); ++l) {
                if (poly[l] == 0.0) continue;
                if (l > degree) throw ConsistencyError(kModule, "Gram block degree exceeds the polynomial degree");
                eq(row0 + l, col) -= poly[l];
            }
        }
}

// Weights w0, w1 with p = w0 sigma0 + w1 sigma1 nonnegative on [lo, hi].
std::pair<std::vector<double>, std::vector<double>> interval_weights(int k, double lo, double hi) {
    if (k % 2 == 0) {
        // (u - lo)(hi - u) = -u^2 + (lo + hi) u - lo hi, u^2 = (T0 + T2) / 2
        return {{1.0}, {-0.5 - lo * hi, lo + hi, -0.5}};
    }
    return {{-lo, 1.0}, {hi, -1.0}};
}

std::pair<std::size_t, std::size_t> gram_sizes(int k) {
    const auto d = static_cast<std::size_t>(k / 2);
    return k % 2 == 0 ? std::pair{d + 1, d} : std::pair{d + 1, d + 1};
}

double sampled_min(std::span<const double> c, double lo, double hi, std::size_t samples) {
    double best = std::min(chebyshev::evaluate(c, lo), chebyshev::evaluate(c, hi));
    if (samples >= 2 && hi > lo)
        for (std::size_t i = 0; i < samples; ++i)
            best = std::min(best, chebyshev::evaluate(c, lo + (hi - lo) * double(i) / double(samples - 1)));
    return best;
}

void require_feasible_moments(const MomentSequence& ms, int k) {
    const int s = k / 2;
    const double m2 = ms[2];
    const std::vector<double> scaled = m2 > 0.0 ? ms.truncated(std::size_t(k)).scaled(std::sqrt(m2))
                                                : std::vector<double>(ms.values().begin(), ms.values().begin() + k + 1);
    const auto rep = check_hamburger(scaled, s);
    if (!rep.feasible)
        throw DomainError(kModule, "moments are not feasible: Hankel matrix R_" + std::to_string(2 * s) +
                                       " has eigenvalue " + std::to_string(rep.min_eigenvalue));
}

EigencountResult constant_answer(double value, int k, double center, double half) {
    EigencountResult out;
    out.z_d = value;
    out.chebyshev.assign(std::size_t(k) + 1, 0.0);
    out.chebyshev[0] = value;
    out.y = chebyshev::to_monomial(out.chebyshev, center, half);
    out.omega_margin = value;
    out.target_margin = value - 1.0;
    out.note = value == 0.0 ? "target misses omega" : "target covers omega";
    return out;
}

} // namespace

void IntervalQuery::validate() const {
    if (k < 2 || k > 5) throw ValidationError(kModule, "k must be between 2 and 5");
    if (!(omega.lo < omega.hi) || !std::isfinite(omega.lo) || !std::isfinite(omega.hi))
        throw ValidationError(kModule, "omega must be a finite interval with lo < hi");
    if (!(target.lo <= target.hi) || std::isnan(target.lo) || std::isnan(target.hi))
        throw ValidationError(kModule, "target interval must satisfy lo <= hi");
}

EigencountResult eigencount_upper(const MomentSequence& ms, const IntervalQuery& q, const EigencountOptions& opt) {
    q.validate();
    if (ms.order() < std::size_t(q.k))
        throw DomainError(kModule, "need moments up to m" + std::to_string(q.k));
    require_feasible_moments(ms, q.k);

    const int k = q.k;
    const auto deg = std::size_t(k);
    const double center = 0.5 * (q.omega.lo + q.omega.hi);
    const double half = 0.5 * (q.omega.hi - q.omega.lo);

    if (q.target.hi < q.omega.lo || q.target.lo > q.omega.hi) return constant_answer(0.0, k, center, half);
    if (q.target.lo <= q.omega.lo && q.target.hi >= q.omega.hi) return constant_answer(1.0, k, center, half);

    const double ta = (std::max(q.target.lo, q.omega.lo) - center) / half;
    const double tb = (std::min(q.target.hi, q.omega.hi) - center) / half;
    const bool point_target = tb - ta <= 1e-12;
    const auto tau = chebyshev::moments(ms.values(), center, half, deg);

    // z = (P_0..P_k, Gram upper triangles)
    const auto [s0, s1] = gram_sizes(k);
    std::vector<GramVar> grams;
    std::size_t next = deg + 1;
    auto add_gram = [&](std::size_t size, std::vector<double> weight) {
        if (size == 0) return;
        GramVar g;
        g.size = size;
        g.offset = next;
        g.weight = std::move(weight);
        next += g.count();
        grams.push_back(std::move(g));
    };
    const auto [w0, w1] = interval_weights(k, -1.0, 1.0);
    add_gram(s0, w0);
    add_gram(s1, w1);
    const std::size_t omega_grams = grams.size();
    if (!point_target) {
        const auto [v0, v1] = interval_weights(k, ta, tb);
        add_gram(s0, v0);
        add_gram(s1, v1);
    }
    const std::size_t nz = next;

    const std::size_t groups = point_target ? 1 : 2;
    Matrix eq(groups * (deg + 1), nz);
    std::vector<double> rhs(groups * (deg + 1), 0.0);
    for (std::size_t grp = 0; grp < groups; ++grp)
        for (std::size_t l = 0; l <= deg; ++l) eq(grp * (deg + 1) + l, l) = 1.0;
    if (!point_target) rhs[deg + 1] = 1.0;
    for (std::size_t gi = 0; gi < grams.size(); ++gi)
        subtract_gram(eq, gi < omega_grams ? 0 : deg + 1, deg, grams[gi]);

    const AffineSpace space = null_space(eq, rhs);
    const std::size_t nf = space.basis.cols();

    SdpProblem prob;
    prob.num_vars = nf;
    prob.objective.assign(nf, 0.0);
    double offset = 0.0;
    for (std::size_t l = 0; l <= deg; ++l) {
        offset += tau[l] * space.origin[l];
        for (std::size_t f = 0; f < nf; ++f) prob.objective[f] += tau[l] * space.basis(l, f);
    }
    for (const auto& g : grams) {
        SdpBlock b{Matrix(g.size, g.size), std::vector<Matrix>(nf, Matrix(g.size, g.size))};
        SdpBlock trace{Matrix{{0.0}}, std::vector<Matrix>(nf, Matrix(1, 1))};
        trace.constant(0, 0) = -opt.trace_bound;
        for (std::size_t i = 0; i < g.size; ++i)
            for (std::size_t j = 0; j < g.size; ++j) {
                const std::size_t z = g.offset + upper_index(g.size, i, j);
                b.constant(i, j) = -space.origin[z];
                for (std::size_t f = 0; f < nf; ++f) b.coefficients[f](i, j) = space.basis(z, f);
                if (i == j) {
                    trace.constant(0, 0) += space.origin[z];
                    for (std::size_t f = 0; f < nf; ++f) trace.coefficients[f](0, 0) -= space.basis(z, f);
                }
            }
        prob.blocks.push_back(std::move(b));
        prob.blocks.push_back(std::move(trace));
    }
    if (point_target) {
        // p(ta) - 1 >= 0
        SdpBlock b{Matrix{{1.0}}, std::vector<Matrix>(nf, Matrix(1, 1))};
        std::vector<double> unit(deg + 1, 0.0);
        for (std::size_t l = 0; l <= deg; ++l) {
            std::fill(unit.begin(), unit.end(), 0.0);
            unit[l] = 1.0;
            const double tl = chebyshev::evaluate(unit, ta);
            b.constant(0, 0) -= tl * space.origin[l];
            for (std::size_t f = 0; f < nf; ++f) b.coefficients[f](0, 0) += tl * space.basis(l, f);
        }
        prob.blocks.push_back(std::move(b));
    }

    const SdpSolution sol = solve_sdp(prob, {opt.tol, 2000});
    std::vector<double> z = space.origin;
    for (std::size_t e = 0; e < nz; ++e)
        for (std::size_t f = 0; f < nf; ++f) z[e] += space.basis(e, f) * sol.y[f];

    EigencountResult out;
    out.status = sol.status;
    out.iterations = sol.iterations;
    out.duality_gap_estimate = sol.duality_gap_estimate;
    out.chebyshev.assign(z.begin(), z.begin() + static_cast<std::ptrdiff_t>(deg + 1));
    out.z_d = offset;
    for (std::size_t f = 0; f < nf; ++f) out.z_d += prob.objective[f] * sol.y[f];
    out.y = chebyshev::to_monomial(out.chebyshev, center, half);
    for (const auto& g : grams) {
        Matrix gm(g.size, g.size);
        double tr = 0.0;
        for (std::size_t i = 0; i < g.size; ++i) {
            for (std::size_t j = 0; j < g.size; ++j) gm(i, j) = z[g.offset + upper_index(g.size, i, j)];
            tr += gm(i, i);
        }
        if (tr >= 0.99 * opt.trace_bound) out.note = "Gram trace bound is active";
        out.certificate.push_back(std::move(gm));
    }
    out.omega_margin = sampled_min(out.chebyshev, -1.0, 1.0, opt.certificate_samples);
    std::vector<double> shifted = out.chebyshev;
    shifted[0] -= 1.0;
    out.target_margin = sampled_min(shifted, ta, tb, point_target ? 0 : opt.certificate_samples);
    return out;
}

std::vector<SweepPoint> cdf_bound_sweep(const MomentSequence& ms, std::span<const double> alphas, Interval omega,
                                        int k, const EigencountOptions& opt, unsigned threads) {
    std::vector<SweepPoint> points(alphas.size());
    parallel_for(alphas.size(), threads, [&](std::size_t i) {
        points[i].alpha = alphas[i];
        try {
            points[i].result =
                eigencount_upper(ms, IntervalQuery{{std::min(omega.lo, alphas[i]), alphas[i]}, omega, k}, opt);
        } catch (const Error& e) {
            points[i].error = e.what();
        }
    });
    return points;
}

namespace {

// Dense tableau simplex for: A x = b, x >= 0.
class Simplex {
public:
    Simplex(std::size_t rows, std::size_t cols) : m_(rows), n_(cols), t_(rows * (cols + 1), 0.0), basis_(rows) {}

    double& at(std::size_t i, std::size_t j) { return t_[i * (n_ + 1) + j]; }
    double& rhs(std::size_t i) { return at(i, n_); }
    std::size_t basic(std::size_t i) const { return basis_[i]; }
    void set_basic(std::size_t i, std::size_t j) { basis_[i] = j; }

    void pivot(std::size_t r, std::size_t c) {
        const double inv = 1.0 / at(r, c);
        for (std::size_t j = 0; j <= n_; ++j) at(r, j) *= inv;
        for (std::size_t i = 0; i < m_; ++i) {
            if (i == r) continue;
            const double f = at(i, c);
            if (f == 0.0) continue;
            for (std::size_t j = 0; j <= n_; ++j) at(i, j) -= f * at(r, j);
            at(i, c) = 0.0;
        }
        basis_[r] = c;
    }

    enum class Result { optimal, unbounded, limit };

    /// Minimizes cost . x over columns with allowed[j] set.
    Result minimize(std::span<const double> cost, const std::vector<char>& allowed) {
        int degenerate = 0;
        for (int iter = 0; iter < 200000; ++iter) {
            const bool bland = degenerate > 50;
            std::size_t enter = n_;
            double best = -1e-11;
            for (std::size_t j = 0; j < n_; ++j) {
                if (!allowed[j]) continue;
                double d = cost[j];
                for (std::size_t i = 0; i < m_; ++i) d -= cost[basis_[i]] * at(i, j);
                if (d < best) {
                    enter = j;
                    if (bland) break;
                    best = d;
                }
            }
            if (enter == n_) return Result::optimal;
            std::size_t leave = m_;
            double ratio = std::numeric_limits<double>::infinity();
            for (std::size_t i = 0; i < m_; ++i) {
                const double a = at(i, enter);
                if (a <= 1e-12) continue;
                const double r = std::max(0.0, rhs(i)) / a;
                if (r < ratio || (r == ratio && leave < m_ && basis_[i] < basis_[leave])) {
                    ratio = r;
                    leave = i;
                }
            }
            if (leave == m_) return Result::unbounded;
            degenerate = ratio == 0.0 ? degenerate + 1 : 0;
            pivot(leave, enter);
        }
        return Result::limit;
    }

private:
    std::size_t m_, n_;
    std::vector<double> t_;
    std::vector<std::size_t> basis_;
};

} // namespace

LpOracleResult primal_lp_oracle(const MomentSequence& ms, const IntervalQuery& q, std::size_t grid_size) {
    q.validate();
    if (grid_size < 100) throw DomainError(kModule, "grid_size must be at least 100");
    if (ms.order() < std::size_t(q.k)) throw DomainError(kModule, "need moments up to m" + std::to_string(q.k));
    const auto deg = std::size_t(q.k);
    const double center = 0.5 * (q.omega.lo + q.omega.hi);
    const double half = 0.5 * (q.omega.hi - q.omega.lo);
    const auto tau = chebyshev::moments(ms.values(), center, half, deg);

    std::vector<double> grid(grid_size);
    for (std::size_t i = 0; i < grid_size; ++i) grid[i] = -1.0 + 2.0 * double(i) / double(grid_size - 1);
    const double ta = (q.target.lo - center) / half, tb = (q.target.hi - center) / half;
    for (double e : {ta, tb})
        if (e > -1.0 && e < 1.0) grid.push_back(e);
    std::sort(grid.begin(), grid.end());
    grid.erase(std::unique(grid.begin(), grid.end()), grid.end());

    const std::size_t rows = deg + 1, cols = grid.size();
    Simplex lp(rows, cols + rows);
    for (std::size_t g = 0; g < cols; ++g) {
        double prev = 1.0, cur = grid[g];
        lp.at(0, g) = 1.0;
        if (rows > 1) lp.at(1, g) = cur;
        for (std::size_t j = 2; j < rows; ++j) {
            const double tj = 2.0 * grid[g] * cur - prev;
            prev = cur;
            cur = tj;
            lp.at(j, g) = tj;
        }
    }
    for (std::size_t j = 0; j < rows; ++j) {
        lp.rhs(j) = tau[j];
        if (tau[j] < 0.0) {
            for (std::size_t g = 0; g < cols; ++g) lp.at(j, g) = -lp.at(j, g);
            lp.rhs(j) = -tau[j];
        }
        lp.at(j, cols + j) = 1.0;
        lp.set_basic(j, cols + j);
    }

    LpOracleResult out;
    out.grid_size = cols;
    std::vector<double> cost(cols + rows, 0.0);
    std::fill(cost.begin() + static_cast<std::ptrdiff_t>(cols), cost.end(), 1.0);
    std::vector<char> allowed(cols + rows, 1);
    if (lp.minimize(cost, allowed) != Simplex::Result::optimal) {
        out.diagnostic = "phase 1 did not terminate";
        return out;
    }
    double residual = 0.0;
    for (std::size_t i = 0; i < rows; ++i)
        if (lp.basic(i) >= cols) residual += lp.rhs(i);
    if (residual > 1e-9) {
        out.diagnostic = "moments cannot be matched on this grid (residual " + std::to_string(residual) + "); refine the grid";
        return out;
    }
    for (std::size_t i = 0; i < rows; ++i) {
        if (lp.basic(i) < cols) continue;
        std::size_t best = cols;
        for (std::size_t g = 0; g < cols; ++g)
            if (std::abs(lp.at(i, g)) > 1e-9 && (best == cols || std::abs(lp.at(i, g)) > std::abs(lp.at(i, best))))
                best = g;
        if (best < cols) lp.pivot(i, best);
    }
    for (std::size_t j = cols; j < cols + rows; ++j) allowed[j] = 0;

    const double eps = 1e-12;
    std::fill(cost.begin(), cost.end(), 0.0);
    for (std::size_t g = 0; g < cols; ++g)
        if (grid[g] >= ta - eps && grid[g] <= tb + eps) cost[g] = -1.0;
    const auto res = lp.minimize(cost, allowed);
    if (res != Simplex::Result::optimal) {
        out.diagnostic = res == Simplex::Result::unbounded ? "phase 2 unbounded" : "iteration limit reached";
        return out;
    }
    out.feasible = true;
    for (std::size_t i = 0; i < rows; ++i)
        if (lp.basic(i) < cols && cost[lp.basic(i)] != 0.0) out.value += lp.rhs(i);
    return out;
}

Interval default_omega(const Graph& g) {
    const double d = double(g.max_degree());
    if (d == 0.0) throw DomainError(kModule, "edgeless graph: all eigenvalues are zero, omega is degenerate");
    return {-d, d};
}

Interval default_omega(const MomentSequence& ms) {
    const double n = double(ms.node_count());
    double r = std::numeric_limits<double>::infinity();
    for (std::size_t k = 2; k <= ms.order(); k += 2)
        if (ms[k] > 0.0 && n > 0.0) r = std::min(r, std::pow(n * ms[k], 1.0 / double(k)));
    if (!std::isfinite(r)) throw DomainError(kModule, "cannot derive omega: need n and a positive even moment");
    return {-r, r};
}

std::vector<double> parse_sweep(std::string_view spec) {
    std::vector<double> parts;
    std::size_t start = 0;
    for (;;) {
        const auto colon = spec.find(':', start);
        const auto token = spec.substr(start, colon == std::string_view::npos ? spec.size() - start : colon - start);
        double v = 0;
        const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), v);
        if (ec != std::errc{} || ptr != token.data() + token.size() || token.empty())
            throw ParseError(kModule, "sweep must look like lo:step:hi, got '" + std::string(spec) + "'");
        parts.push_back(v);
        if (colon == std::string_view::npos) break;
        start = colon + 1;
    }
    if (parts.size() != 3) throw ParseError(kModule, "sweep must look like lo:step:hi");
    const double lo = parts[0], step = parts[1], hi = parts[2];
    if (!(step > 0.0) || hi < lo) throw ParseError(kModule, "sweep needs step > 0 and hi >= lo");
    const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (count > 1000000) throw ParseError(kModule, "sweep has too many points");
    std::vector<double> out(count);
    for (std::size_t i = 0; i < count; ++i) out[i] = lo + double(i) * step;
    return out;
}

} // namespace moment_bounds
