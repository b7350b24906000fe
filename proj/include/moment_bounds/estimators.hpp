#pragma once

#include "moment_bounds/census.hpp"
#include "moment_bounds/graph.hpp"

#include <optional>
#include <span>

#include "json.hpp"

namespace moment_bounds {

/// Degree-based upper bounds on the spectral radius.
struct ClassicalBounds {
    double u1 = 0; ///< sqrt(2e - (n-1) d_min + (d_min - 1) d_max)
    double u2 = 0; ///< max over edges and both orientations of sqrt(d_i m_j)
};

/// m_j is the mean degree of j's neighbors. Throws DomainError when the graph
/// has no edges.
ClassicalBounds classical_bounds(const Graph& g);

/// W = sum d^2 / sum d. Throws DomainError when every degree is zero.
double chung_lu_estimator(std::span<const std::int64_t> degrees);

/// lambda_a = (10 Pi + 10 C_dt - 30 Delta)^(1/5) and lambda_b =
/// (10 Pi + 10 C_dt)^(1/5) on graph totals, so lambda_a^5 = n m5. Empty when
/// the radicand is not positive.
struct SocialEstimators {
    std::optional<double> lambda_a;
    std::optional<double> lambda_b;
};

SocialEstimators social_estimators(const CensusAggregates& a);

/// Per-node densities are scaled back to totals with `nodes`.
SocialEstimators social_estimators(const AggregateDensities& a);

struct EstimatorReport {
    std::optional<double> u1;
    std::optional<double> u2;
    std::optional<double> w;
    std::optional<double> lambda_a;
    std::optional<double> lambda_b;
    CensusAggregates inputs;
};

/// Every estimator that is defined for the graph.
EstimatorReport estimate(const Graph& g, const NodeCensus& c);

void to_json(nlohmann::json& j, const EstimatorReport& r);
void from_json(const nlohmann::json& j, EstimatorReport& r);
void to_json(nlohmann::json& j, const CensusAggregates& a);
void from_json(const nlohmann::json& j, CensusAggregates& a);
void to_json(nlohmann::json& j, const AggregateDensities& a);
void from_json(const nlohmann::json& j, AggregateDensities& a);

} // namespace moment_bounds
