#include "moment_bounds/sdp.hpp"

#include "moment_bounds/error.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "sdp-core";
constexpr double kRunaway = 1e12;
constexpr int kCenterSteps = 200;

// G(x) = sum_j x_j b[j] - d
struct Lmi {
    Matrix d;
    std::vector<Matrix> b;
};

Matrix evaluate(const Lmi& l, std::span<const double> x) {
    Matrix g = -1.0 * l.d;
    for (std::size_t j = 0; j < x.size(); ++j)
        if (x[j] != 0.0) g += x[j] * l.b[j];
    return g;
}

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double inf_norm(std::span<const double> x) {
    double m = 0.0;
    for (double v : x) m = std::max(m, std::abs(v));
    return m;
}

// L^{-1} M L^{-T}, symmetrized
Matrix congruence(const Matrix& linv, const Matrix& m) {
    Matrix c = linv * m * transpose(linv);
    for (std::size_t i = 0; i < c.rows(); ++i)
        for (std::size_t j = i + 1; j < c.cols(); ++j) c(i, j) = c(j, i) = 0.5 * (c(i, j) + c(j, i));
    return c;
}

enum class Outcome { converged, stopped, stalled, runaway, budget };

struct Run {
    std::vector<double> x;
    double gap = 0;
    Outcome outcome = Outcome::budget;
};

class Barrier {
public:
    Barrier(std::vector<Lmi> lmis, std::vector<double> c) : lmis_(std::move(lmis)), c_(std::move(c)) {
        for (const auto& l : lmis_) nu_ += double(l.d.rows());
    }

    double nu() const { return nu_; }

    /// Follows the central path from a strictly feasible x until the gap
    /// estimate nu/t drops below tol * max(1, |c.x|) or `stop(x)` fires.
    Run minimize(std::vector<double> x, double tol, int& budget, const std::function<bool(const std::vector<double>&)>& stop) {
        Run run;
        double t = 1.0;
        for (bool first = true;; first = false) {
            const Outcome o = center(x, t, budget, stop);
            if (o != Outcome::converged) {
                // the iterate is no worse than the previous center
                run.gap = first || o != Outcome::stalled ? nu_ / t : 10.0 * nu_ / t;
                run.outcome = o;
                break;
            }
            run.gap = nu_ / t;
            if (run.gap <= tol * std::max(1.0, std::abs(dot(c_, x)))) {
                run.outcome = Outcome::converged;
                break;
            }
            t *= 10.0;
        }
        run.x = std::move(x);
        return run;
    }

private:
    Outcome center(std::vector<double>& x, double t, int& budget,
                   const std::function<bool(const std::vector<double>&)>& stop) {
        const std::size_t m = x.size();
        int steps = 0;
        for (;;) {
            if (stop && stop(x)) return Outcome::stopped;
            if (inf_norm(x) > kRunaway) return Outcome::runaway;
            if (budget <= 0) return Outcome::budget;
            --budget;

            std::vector<double> grad(c_);
            for (auto& v : grad) v *= t;
            Matrix hess(m, m);
            std::vector<std::vector<Matrix>> w(lmis_.size());
            for (std::size_t k = 0; k < lmis_.size(); ++k) {
                const auto chol = cholesky(evaluate(lmis_[k], x));
                if (!chol) return Outcome::stalled;
                const Matrix linv = lower_inverse(*chol);
                auto& wk = w[k];
                wk.reserve(m);
                for (std::size_t j = 0; j < m; ++j) wk.push_back(congruence(linv, lmis_[k].b[j]));
                for (std::size_t j = 0; j < m; ++j) {
                    double tr = 0.0;
                    for (std::size_t a = 0; a < wk[j].rows(); ++a) tr += wk[j](a, a);
                    grad[j] -= tr;
                    for (std::size_t l = 0; l <= j; ++l) {
                        double s = 0.0;
                        const auto dj = wk[j].data(), dl = wk[l].data();
                        for (std::size_t e = 0; e < dj.size(); ++e) s += dj[e] * dl[e];
                        hess(j, l) += s;
                        if (l != j) hess(l, j) += s;
                    }
                }
            }

            std::optional<Matrix> lh = cholesky(hess);
            double ridge = 1e-14 * std::max(1.0, hess.max_abs());
            for (int attempt = 0; !lh && attempt < 12; ++attempt, ridge *= 100.0) {
                Matrix shifted = hess;
                for (std::size_t j = 0; j < m; ++j) shifted(j, j) += ridge;
                lh = cholesky(shifted);
            }
            if (!lh) return Outcome::stalled;
            std::vector<double> step = cholesky_solve(*lh, grad);
            for (auto& v : step) v = -v;
            const double decrement = -dot(grad, step);
            if (!(decrement >= 0.0)) return Outcome::stalled;
            if (decrement <= 1e-10) return Outcome::converged;

            double alpha = 1.0;
            for (std::size_t k = 0; k < lmis_.size(); ++k) {
                Matrix dir(w[k].empty() ? 0 : w[k][0].rows(), w[k].empty() ? 0 : w[k][0].cols());
                for (std::size_t j = 0; j < m; ++j)
                    if (step[j] != 0.0) dir += step[j] * w[k][j];
                if (dir.rows() == 0) continue;
                const double lo = symmetric_eigen(dir).values.front();
                if (lo < 0.0) alpha = std::min(alpha, 0.99 / -lo);
            }

            // Null directions of a singular Hessian give huge steps; grow geometrically instead.
            const double reach = 10.0 * std::max(1.0, inf_norm(x));
            if (alpha * inf_norm(step) > reach) alpha = reach / inf_norm(step);

            // Exact line search on the directional derivative, which is monotone
            // along the ray and immune to the cancellation in barrier values.
            std::vector<Matrix> dirs(lmis_.size());
            for (std::size_t k = 0; k < lmis_.size(); ++k) {
                Matrix d(lmis_[k].d.rows(), lmis_[k].d.cols());
                for (std::size_t j = 0; j < m; ++j)
                    if (step[j] != 0.0) d += step[j] * lmis_[k].b[j];
                dirs[k] = std::move(d);
            }
            const double slope_c = t * dot(c_, step);
            std::vector<double> trial(m);
            auto slope = [&](double a) -> std::optional<double> {
                for (std::size_t j = 0; j < m; ++j) trial[j] = x[j] + a * step[j];
                double g = slope_c;
                for (std::size_t k = 0; k < lmis_.size(); ++k) {
                    if (dirs[k].rows() == 0) continue;
                    const auto ch = cholesky(evaluate(lmis_[k], trial));
                    if (!ch) return std::nullopt;
                    const Matrix q = congruence(lower_inverse(*ch), dirs[k]);
                    for (std::size_t i = 0; i < q.rows(); ++i) g -= q(i, i);
                }
                return g;
            };
            const auto g_hi = slope(alpha);
            if (!g_hi || *g_hi > 0.0) {
                double lo = 0.0, hi = alpha;
                for (int it = 0; it < 50 && hi - lo > 1e-12 * hi; ++it) {
                    const double mid = 0.5 * (lo + hi);
                    const auto g = slope(mid);
                    if (g && *g <= 0.0) lo = mid;
                    else hi = mid;
                }
                alpha = lo;
            }
            if (alpha <= 0.0) return decrement <= 1e-6 ? Outcome::converged : Outcome::stalled;
            for (std::size_t j = 0; j < m; ++j) trial[j] = x[j] + alpha * step[j];
            if (++steps > kCenterSteps) return Outcome::stalled;
            x = trial;
        }
    }

    std::vector<Lmi> lmis_;
    std::vector<double> c_;
    double nu_ = 0;
};

double min_margin(const Lmi& l, std::span<const double> x) { return symmetric_eigen(evaluate(l, x)).values.front(); }

} // namespace

std::string_view to_string(SdpStatus s) {
    switch (s) {
    case SdpStatus::optimal: return "optimal";
    case SdpStatus::infeasible: return "infeasible";
    case SdpStatus::unbounded: return "unbounded";
    case SdpStatus::max_iter: return "max_iter";
    }
    return "unknown";
}

void SdpProblem::validate() const {
    if (objective.size() != num_vars) throw DomainError(kModule, "objective length differs from num_vars");
    if (!var_bounds.empty() && var_bounds.size() != num_vars)
        throw DomainError(kModule, "var_bounds must be empty or have one entry per variable");
    for (const auto& vb : var_bounds)
        if (vb.lower && vb.upper && *vb.lower > *vb.upper) throw DomainError(kModule, "empty variable box");
    for (const auto& b : blocks) {
        const std::size_t n = b.constant.rows();
        if (n == 0 || b.constant.cols() != n) throw DomainError(kModule, "block constant must be square and nonempty");
        if (b.coefficients.size() != num_vars) throw DomainError(kModule, "coefficient count differs from num_vars");
        auto check = [n](const Matrix& a) {
            if (a.rows() != n || a.cols() != n) throw DomainError(kModule, "coefficient matrix size mismatch");
            const double scale = std::max(1.0, a.max_abs());
            for (std::size_t i = 0; i < n; ++i)
                for (std::size_t j = i + 1; j < n; ++j)
                    if (std::abs(a(i, j) - a(j, i)) > 1e-12 * scale)
                        throw DomainError(kModule, "block matrix is not symmetric");
        };
        check(b.constant);
        for (const auto& a : b.coefficients) check(a);
    }
    for (double v : objective)
        if (!std::isfinite(v)) throw DomainError(kModule, "objective has a non-finite entry");
}

SdpSolution solve_sdp(const SdpProblem& p, const SdpOptions& opt) {
    p.validate();
    if (!(opt.tol > 0.0)) throw DomainError(kModule, "tolerance must be positive");
    const std::size_t m = p.num_vars;

    std::vector<Lmi> lmis;
    for (const auto& b : p.blocks) lmis.push_back({b.constant, b.coefficients});
    const std::size_t user_blocks = lmis.size();
    for (std::size_t j = 0; j < p.var_bounds.size(); ++j) {
        const auto& vb = p.var_bounds[j];
        auto unit = [&](double sign, double bound) {
            Lmi l{Matrix{{sign * bound}}, std::vector<Matrix>(m, Matrix(1, 1))};
            l.b[j](0, 0) = sign;
            lmis.push_back(std::move(l));
        };
        if (vb.lower) unit(1.0, *vb.lower);
        if (vb.upper) unit(-1.0, *vb.upper);
    }

    SdpSolution sol;
    int budget = opt.max_iter;
    auto finish = [&](std::vector<double> y, SdpStatus status) {
        sol.y = std::move(y);
        sol.status = status;
        sol.objective_value = dot(p.objective, sol.y);
        sol.psd_margins.clear();
        for (std::size_t k = 0; k < user_blocks; ++k) sol.psd_margins.push_back(min_margin(lmis[k], sol.y));
        sol.iterations = opt.max_iter - budget;
        return sol;
    };

    std::vector<double> y(m, 0.0);
    if (lmis.empty()) {
        for (double c : p.objective)
            if (c != 0.0) return finish(y, SdpStatus::unbounded);
        return finish(y, SdpStatus::optimal);
    }

    // Phase 1: maximize s subject to G_k(y) - s I >= 0.
    double worst = std::numeric_limits<double>::infinity();
    for (const auto& l : lmis) worst = std::min(worst, min_margin(l, y));
    if (!(worst > 0.0)) {
        std::vector<Lmi> aux;
        for (const auto& l : lmis) {
            Lmi a = l;
            a.b.push_back(-1.0 * Matrix::identity(l.d.rows()));
            aux.push_back(std::move(a));
        }
        std::vector<double> c(m + 1, 0.0);
        c[m] = -1.0;
        std::vector<double> x0(m + 1, 0.0);
        x0[m] = worst - 1.0;
        Barrier phase1(std::move(aux), std::move(c));
        const Run r = phase1.minimize(x0, opt.tol, budget, [m](const std::vector<double>& x) { return x[m] > 0.0; });
        y.assign(r.x.begin(), r.x.begin() + static_cast<std::ptrdiff_t>(m));
        const double s = r.x[m];
        if (r.outcome == Outcome::budget) return finish(y, SdpStatus::max_iter);
        if (!(s > 0.0)) {
            if (s < -opt.tol) return finish(y, SdpStatus::infeasible);
            // No interior: relax every block by tol.
            for (auto& l : lmis) l.d -= opt.tol * Matrix::identity(l.d.rows());
        }
    }

    Barrier phase2(lmis, p.objective);
    const Run r = phase2.minimize(y, opt.tol, budget, {});
    sol.duality_gap_estimate = r.gap;
    const double scale = std::max(1.0, std::abs(dot(p.objective, r.x)));
    switch (r.outcome) {
    case Outcome::runaway: return finish(r.x, SdpStatus::unbounded);
    case Outcome::budget: return finish(r.x, SdpStatus::max_iter);
    case Outcome::stalled:
        return finish(r.x, r.gap <= std::sqrt(opt.tol) * scale ? SdpStatus::optimal : SdpStatus::max_iter);
    default: return finish(r.x, SdpStatus::optimal);
    }
}

} // namespace moment_bounds
