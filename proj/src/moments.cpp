#include "moment_bounds/moments.hpp"

#include "checked.hpp"
#include "moment_bounds/error.hpp"

#include <algorithm>
#include <cmath>
#include "json.hpp"

namespace moment_bounds {

namespace {

constexpr const char* kModule = "moments";

using detail::checked_add;
using detail::checked_mul;

void check_exact_invariants(const std::vector<std::int64_t>& num) {
    if (num.size() > 1 && num[1] != 0) throw ConsistencyError(kModule, "n*m1 must vanish for a loop-free graph");
    if (num.size() > 2 && (num[2] < 0 || num[2] % 2 != 0)) throw ConsistencyError(kModule, "n*m2 must be even");
    if (num.size() > 3 && num[3] % 6 != 0) throw ConsistencyError(kModule, "n*m3 must be divisible by 6");
    for (std::size_t k = 2; k < num.size(); k += 2)
        if (num[k] < 0) throw ConsistencyError(kModule, "negative even moment numerator");
}

} // namespace

std::string_view to_string(MomentSource s) {
    switch (s) {
    case MomentSource::census: return "census";
    case MomentSource::walks: return "walks";
    case MomentSource::spectrum: return "spectrum";
    case MomentSource::external: return "external";
    }
    return "external";
}

MomentSource parse_moment_source(std::string_view name) {
    if (name == "census") return MomentSource::census;
    if (name == "walks") return MomentSource::walks;
    if (name == "spectrum") return MomentSource::spectrum;
    if (name == "external") return MomentSource::external;
    throw ParseError(kModule, "unknown moment source '" + std::string(name) + "'");
}

MomentSequence::MomentSequence(std::size_t n, std::vector<double> m, MomentSource source)
    : n_(n), m_(std::move(m)), source_(source) {
    if (m_.empty()) throw DomainError(kModule, "moment sequence must contain m0");
    if (m_[0] != 1.0) throw DomainError(kModule, "m0 must equal 1");
    for (double v : m_)
        if (!std::isfinite(v)) throw DomainError(kModule, "moment sequence contains a non-finite value");
}

MomentSequence MomentSequence::exact(std::size_t n, std::vector<std::int64_t> numerators, MomentSource source) {
    if (n == 0) throw DomainError(kModule, "moments of an empty graph are undefined (n = 0)");
    if (numerators.empty() || numerators[0] != static_cast<std::int64_t>(n))
        throw ConsistencyError(kModule, "exact moment numerators must start with n");
    check_exact_invariants(numerators);
    std::vector<double> m(numerators.size());
    for (std::size_t k = 0; k < m.size(); ++k) m[k] = static_cast<double>(numerators[k]) / static_cast<double>(n);
    MomentSequence seq(n, std::move(m), source);
    seq.numerators_ = std::move(numerators);
    return seq;
}

MomentSequence MomentSequence::truncated(std::size_t k) const {
    if (k > order()) throw DomainError(kModule, "cannot truncate to order " + std::to_string(k));
    MomentSequence out = *this;
    out.m_.resize(k + 1);
    if (out.numerators_) out.numerators_->resize(k + 1);
    return out;
}

std::vector<double> MomentSequence::scaled(double scale) const {
    std::vector<double> out(m_.size());
    double factor = 1.0;
    for (std::size_t k = 0; k < m_.size(); ++k) {
        out[k] = m_[k] / factor;
        factor *= scale;
    }
    return out;
}

MomentSequence moments_from_census(const NodeCensus& c) {
    const std::size_t n = c.size();
    if (n == 0) throw DomainError(kModule, "moments of an empty graph are undefined (n = 0)");
    std::vector<std::int64_t> num(6, 0);
    num[0] = static_cast<std::int64_t>(n);
    for (std::size_t i = 0; i < n; ++i) {
        const std::int64_t d = c.degree[i], t = c.triangles[i];
        num[2] = checked_add(num[2], d, kModule);
        num[3] = checked_add(num[3], 2 * t, kModule);
        const std::int64_t w4 = checked_add(2 * c.quadrangles[i], checked_mul(2 * d, d - 1, kModule) + d, kModule);
        num[4] = checked_add(num[4], w4, kModule);
        const std::int64_t w5 = checked_add(2 * c.pentagons[i], checked_mul(10 * t, d - 1, kModule), kModule);
        num[5] = checked_add(num[5], w5, kModule);
    }
    return MomentSequence::exact(n, std::move(num), MomentSource::census);
}

MomentSequence moments_from_aggregates(const CensusAggregates& a) {
    if (a.nodes <= 0) throw DomainError(kModule, "moments of an empty graph are undefined (n = 0)");
    std::vector<std::int64_t> num(6, 0);
    num[0] = a.nodes;
    num[2] = 2 * a.edges;
    num[3] = checked_mul(6, a.triangles, kModule);
    num[4] = checked_add(checked_mul(8, a.quadrangles, kModule),
                         checked_mul(2, a.degree_square_sum, kModule) - 2 * a.edges, kModule);
    num[5] = checked_add(checked_mul(10, a.pentagons, kModule),
                         checked_mul(10, a.degree_triangle_sum, kModule) - checked_mul(30, a.triangles, kModule),
                         kModule);
    return MomentSequence::exact(static_cast<std::size_t>(a.nodes), std::move(num), MomentSource::census);
}

MomentSequence moments_from_aggregates(const AggregateDensities& a) {
    if (!(a.nodes > 0)) throw DomainError(kModule, "moments of an empty graph are undefined (n = 0)");
    std::vector<double> m{1.0,
                          0.0,
                          2.0 * a.edges,
                          6.0 * a.triangles,
                          8.0 * a.quadrangles + 2.0 * a.degree_square_sum - 2.0 * a.edges,
                          10.0 * a.pentagons + 10.0 * a.degree_triangle_sum - 30.0 * a.triangles};
    return {static_cast<std::size_t>(std::llround(a.nodes)), std::move(m), MomentSource::external};
}

MomentSequence moments_from_walks(const Graph& g, int kmax, unsigned threads) {
    if (kmax < 1 || kmax > 5) throw DomainError(kModule, "walk-based moments supported for kmax = 1..5");
    const std::size_t n = g.node_count();
    if (n == 0) throw DomainError(kModule, "moments of an empty graph are undefined (n = 0)");
    std::vector<std::int64_t> num(static_cast<std::size_t>(kmax) + 1, 0);
    num[0] = static_cast<std::int64_t>(n);
    for (int k = 1; k <= kmax; ++k) {
        std::int64_t s = 0;
        for (auto w : walk_diagonal(g, k, threads)) s = checked_add(s, w, kModule);
        num[static_cast<std::size_t>(k)] = s;
    }
    return MomentSequence::exact(n, std::move(num), MomentSource::walks);
}

MomentSequence moments_from_spectrum(std::span<const double> eigenvalues, int kmax) {
    if (eigenvalues.empty()) throw DomainError(kModule, "spectrum is empty");
    if (kmax < 0) throw DomainError(kModule, "kmax must be nonnegative");
    std::vector<double> sorted(eigenvalues.begin(), eigenvalues.end());
    std::stable_sort(sorted.begin(), sorted.end(), [](double a, double b) { return std::abs(a) > std::abs(b); });

    const double n = static_cast<double>(sorted.size());
    std::vector<double> m(static_cast<std::size_t>(kmax) + 1, 0.0);
    m[0] = 1.0;
    for (int k = 1; k <= kmax; ++k) {
        // Neumaier summation.
        double sum = 0.0, comp = 0.0;
        for (double x : sorted) {
            const double term = std::pow(x, k);
            const double t = sum + term;
            comp += std::abs(sum) >= std::abs(term) ? (sum - t) + term : (term - t) + sum;
            sum = t;
        }
        m[static_cast<std::size_t>(k)] = (sum + comp) / n;
    }
    return {sorted.size(), std::move(m), MomentSource::spectrum};
}

void to_json(nlohmann::json& j, const MomentSequence& m) {
    j = nlohmann::json{{"n", m.node_count()}, {"m", m.values()}, {"source", to_string(m.source())}};
    if (m.numerators()) j["numerators"] = *m.numerators();
}

void from_json(const nlohmann::json& j, MomentSequence& m) {
    if (!j.is_object() || !j.contains("m")) throw ParseError(kModule, "moment record needs an 'm' array");
    const auto n = j.value("n", std::size_t{0});
    const auto source = parse_moment_source(j.value("source", std::string("external")));
    if (j.contains("numerators") && n > 0) {
        m = MomentSequence::exact(n, j.at("numerators").get<std::vector<std::int64_t>>(), source);
        return;
    }
    m = MomentSequence(n, j.at("m").get<std::vector<double>>(), source);
}

} // namespace moment_bounds
