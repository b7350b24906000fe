#pragma once

#include "moment_bounds/census.hpp"
#include "moment_bounds/eigencount.hpp"
#include "moment_bounds/estimators.hpp"
#include "moment_bounds/graph.hpp"
#include "moment_bounds/moments.hpp"
#include "moment_bounds/support_bounds.hpp"

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "json.hpp"

namespace moment_bounds {

inline constexpr int kReportSchemaVersion = 1;
inline constexpr const char* kVersion = "1.0.0";

struct GraphMeta {
    std::int64_t n = 0;
    std::int64_t e = 0; ///< -1 when only moments are known
    std::string source;
    bool operator==(const GraphMeta&) const = default;
};

struct FeasibilityRecord {
    int level = 0;
    bool feasible = false;
    double min_eigenvalue = 0;
    bool strong_duality = false;
    bool operator==(const FeasibilityRecord&) const = default;
};

struct SpectrumRecord {
    double rho = 0;
    double lambda_min = 0;
    std::vector<double> eigenvalues;
    bool operator==(const SpectrumRecord&) const = default;
};

struct EigencountRecord {
    Interval target;
    Interval omega;
    int k = 0;
    double z_d = 0;
    std::vector<double> y;
    std::string status;
    std::optional<double> exact_fraction;
    bool operator==(const EigencountRecord&) const = default;
};

struct Provenance {
    std::string version = kVersion;
    nlohmann::json config = nlohmann::json::object();
    std::optional<std::string> timestamp;
    std::string omega_note;
    bool operator==(const Provenance&) const = default;
};

struct AnalysisReport {
    int schema_version = kReportSchemaVersion;
    GraphMeta meta;
    std::optional<CensusAggregates> aggregates;
    std::vector<MomentSequence> moments; ///< every route computed, census first
    std::vector<FeasibilityRecord> feasibility;
    std::vector<SupportBounds> bounds;   ///< levels 1 and 2 when defined
    std::optional<EstimatorReport> estimators;
    std::optional<SpectrumRecord> spectrum;
    std::vector<EigencountRecord> eigencount;
    Provenance provenance;
    std::vector<std::string> diagnostics;

    const SupportBounds* bound(int level) const;
};

struct AnalysisConfig {
    double tol = 1e-9;
    unsigned threads = 1;
    std::size_t spectrum_cap = 5000;
    bool keep_eigenvalues = false;
    bool timestamp = false;
    std::vector<IntervalQuery> queries;
    int eigencount_k = 5;
};

/// census -> moments (census and walk routes, spectrum when n <= cap) ->
/// feasibility -> bounds -> estimators -> optional eigencount queries.
AnalysisReport analyze_graph(const Graph& g, const std::string& source, const AnalysisConfig& config = {});

/// Same pipeline from a moment sequence alone.
AnalysisReport analyze_moments(const MomentSequence& ms, const std::string& source, const AnalysisConfig& config = {});

struct EgoSampleOptions {
    std::size_t count = 20;
    unsigned radius = 2;
    std::uint64_t seed = 1;
    unsigned threads = 1;
    std::size_t spectrum_cap = 5000;
};

struct EgoRow {
    std::int64_t root = 0; ///< label in the input graph
    std::int64_t n = 0;
    std::int64_t e = 0;
    std::optional<double> rho, beta1, beta2, w, lambda_a, lambda_b;
    bool operator==(const EgoRow&) const = default;
};

struct EgoBatch {
    std::vector<EgoRow> rows;
    /// Pearson correlation with rho for beta1, beta2, W, lambda_a, lambda_b.
    std::vector<std::pair<std::string, std::optional<double>>> correlations;
    std::vector<std::string> warnings;
};

/// Seeded choice of distinct roots, one ego subgraph per root, analyzed
/// concurrently and reported in root order.
EgoBatch sample_ego(const Graph& g, const EgoSampleOptions& opt);

/// Pearson correlation over pairs where both sides are present; empty when
/// fewer than two pairs or a side is constant.
std::optional<double> pearson(std::span<const std::optional<double>> x, std::span<const std::optional<double>> y);

/// Fixed columns, one row per report, shortest round-trip numbers, RFC 4180
/// quoting.
void write_reports_csv(std::ostream& out, std::span<const AnalysisReport> reports);
void write_ego_csv(std::ostream& out, const EgoBatch& batch);

/// Shortest decimal that reads back as the same double.
std::string format_double(double v);
std::string csv_escape(std::string_view field);

void to_json(nlohmann::json& j, const AnalysisReport& r);
void from_json(const nlohmann::json& j, AnalysisReport& r);
void to_json(nlohmann::json& j, const SupportBounds& b);
void from_json(const nlohmann::json& j, SupportBounds& b);
void to_json(nlohmann::json& j, const EgoBatch& b);

} // namespace moment_bounds
