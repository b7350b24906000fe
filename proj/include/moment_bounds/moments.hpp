#pragma once

#include "moment_bounds/census.hpp"
#include "moment_bounds/graph.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "json.hpp"

namespace moment_bounds {

enum class MomentSource { census, walks, spectrum, external };

std::string_view to_string(MomentSource s);
MomentSource parse_moment_source(std::string_view name);

/// Spectral moments (m_0 = 1, m_1, ..., m_k) of a graph with n nodes.
///
/// Sequences built from integer counts also carry the exact numerators
/// n * m_k; floating values are derived from them by one division.
class MomentSequence {
public:
    MomentSequence() = default;
    MomentSequence(std::size_t n, std::vector<double> m, MomentSource source);

    /// m_k = numerators[k] / n. Requires numerators[0] == n.
    static MomentSequence exact(std::size_t n, std::vector<std::int64_t> numerators, MomentSource source);

    std::size_t node_count() const noexcept { return n_; }
    std::size_t order() const noexcept { return m_.empty() ? 0 : m_.size() - 1; }
    MomentSource source() const noexcept { return source_; }

    double operator[](std::size_t k) const { return m_.at(k); }
    std::span<const double> values() const noexcept { return m_; }
    const std::optional<std::vector<std::int64_t>>& numerators() const noexcept { return numerators_; }

    /// First k+1 entries (m_0..m_k).
    MomentSequence truncated(std::size_t k) const;

    /// Same moments for the variable x / scale: m_k / scale^k.
    std::vector<double> scaled(double scale) const;

private:
    std::size_t n_ = 0;
    std::vector<double> m_;
    std::optional<std::vector<std::int64_t>> numerators_;
    MomentSource source_ = MomentSource::external;
};

/// m1 = 0, m2 = sum d / n, m3 = sum 2t / n, m4 = sum (2q + 4C(d,2) + d) / n,
/// m5 = sum (2p + 10td - 10t) / n. Exact.
MomentSequence moments_from_census(const NodeCensus& c);

/// m4 = (8Q + 2W2 - 2e)/n and m5 = (10Pi + 10C_dt - 30 Delta)/n. Exact.
MomentSequence moments_from_aggregates(const CensusAggregates& a);

/// Same formulas on per-node densities; result carries source `external`.
MomentSequence moments_from_aggregates(const AggregateDensities& a);

/// m_k = (1/n) sum_i (A^k)_ii for k <= kmax <= 5. Exact.
MomentSequence moments_from_walks(const Graph& g, int kmax = 5, unsigned threads = 1);

/// m_k = (1/n) sum_i lambda_i^k using compensated summation in decreasing
/// magnitude order.
MomentSequence moments_from_spectrum(std::span<const double> eigenvalues, int kmax = 5);

void to_json(nlohmann::json& j, const MomentSequence& m);
void from_json(const nlohmann::json& j, MomentSequence& m);

} // namespace moment_bounds
