#include "moment_bounds/estimators.hpp"

#include "moment_bounds/error.hpp"

#include <algorithm>
#include <cmath>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "estimators";

std::optional<double> fifth_root(double radicand) {
    if (!(radicand > 0.0)) return std::nullopt;
    return std::pow(radicand, 0.2);
}

template <class T>
void put_optional(nlohmann::json& j, const char* key, const std::optional<T>& v) {
    j[key] = v ? nlohmann::json(*v) : nlohmann::json(nullptr);
}

template <class T>
std::optional<T> get_optional(const nlohmann::json& j, const char* key) {
    if (!j.contains(key) || j.at(key).is_null()) return std::nullopt;
    return j.at(key).get<T>();
}

} // namespace

ClassicalBounds classical_bounds(const Graph& g) {
    if (g.edge_count() == 0) throw DomainError(kModule, "classical bounds need at least one edge");
    const double n = double(g.node_count());
    const double e = double(g.edge_count());
    const double dmin = double(g.min_degree());
    const double dmax = double(g.max_degree());
    ClassicalBounds b;
    b.u1 = std::sqrt(std::max(0.0, 2.0 * e - (n - 1.0) * dmin + (dmin - 1.0) * dmax));

    std::vector<double> mean_nbr(g.node_count(), 0.0);
    for (NodeId v = 0; v < g.node_count(); ++v) {
        if (g.degree(v) == 0) continue;
        double s = 0.0;
        for (NodeId w : g.neighbors(v)) s += double(g.degree(w));
        mean_nbr[v] = s / double(g.degree(v));
    }
    double best = 0.0;
    for (NodeId i = 0; i < g.node_count(); ++i)
        for (NodeId j : g.neighbors(i)) best = std::max(best, double(g.degree(i)) * mean_nbr[j]);
    b.u2 = std::sqrt(best);
    return b;
}

double chung_lu_estimator(std::span<const std::int64_t> degrees) {
    double s1 = 0.0, s2 = 0.0;
    for (auto d : degrees) {
        if (d < 0) throw DomainError(kModule, "negative degree");
        s1 += double(d);
        s2 += double(d) * double(d);
    }
    if (s1 == 0.0) throw DomainError(kModule, "Chung-Lu estimator needs a nonzero degree");
    return s2 / s1;
}

SocialEstimators social_estimators(const CensusAggregates& a) {
    const double base = 10.0 * double(a.pentagons) + 10.0 * double(a.degree_triangle_sum);
    return {fifth_root(base - 30.0 * double(a.triangles)), fifth_root(base)};
}

SocialEstimators social_estimators(const AggregateDensities& a) {
    const double base = a.nodes * (10.0 * a.pentagons + 10.0 * a.degree_triangle_sum);
    return {fifth_root(base - a.nodes * 30.0 * a.triangles), fifth_root(base)};
}

EstimatorReport estimate(const Graph& g, const NodeCensus& c) {
    EstimatorReport r;
    r.inputs = aggregates(c);
    if (g.edge_count() > 0) {
        const auto cb = classical_bounds(g);
        r.u1 = cb.u1;
        r.u2 = cb.u2;
        r.w = chung_lu_estimator(c.degree);
    }
    const auto s = social_estimators(r.inputs);
    r.lambda_a = s.lambda_a;
    r.lambda_b = s.lambda_b;
    return r;
}

void to_json(nlohmann::json& j, const CensusAggregates& a) {
    j = nlohmann::json{{"nodes", a.nodes},
                       {"edges", a.edges},
                       {"triangles", a.triangles},
                       {"quadrangles", a.quadrangles},
                       {"pentagons", a.pentagons},
                       {"degree_square_sum", a.degree_square_sum},
                       {"degree_triangle_sum", a.degree_triangle_sum}};
}

void from_json(const nlohmann::json& j, CensusAggregates& a) {
    a.nodes = j.at("nodes").get<std::int64_t>();
    a.edges = j.at("edges").get<std::int64_t>();
    a.triangles = j.at("triangles").get<std::int64_t>();
    a.quadrangles = j.at("quadrangles").get<std::int64_t>();
    a.pentagons = j.at("pentagons").get<std::int64_t>();
    a.degree_square_sum = j.at("degree_square_sum").get<std::int64_t>();
    a.degree_triangle_sum = j.at("degree_triangle_sum").get<std::int64_t>();
}

void to_json(nlohmann::json& j, const AggregateDensities& a) {
    j = nlohmann::json{{"nodes", a.nodes},
                       {"edges", a.edges},
                       {"triangles", a.triangles},
                       {"quadrangles", a.quadrangles},
                       {"pentagons", a.pentagons},
                       {"degree_square_sum", a.degree_square_sum},
                       {"degree_triangle_sum", a.degree_triangle_sum}};
}

void from_json(const nlohmann::json& j, AggregateDensities& a) {
    a.nodes = j.at("nodes").get<double>();
    a.edges = j.at("edges").get<double>();
    a.triangles = j.at("triangles").get<double>();
    a.quadrangles = j.at("quadrangles").get<double>();
    a.pentagons = j.at("pentagons").get<double>();
    a.degree_square_sum = j.at("degree_square_sum").get<double>();
    a.degree_triangle_sum = j.at("degree_triangle_sum").get<double>();
}

void to_json(nlohmann::json& j, const EstimatorReport& r) {
    j = nlohmann::json::object();
    put_optional(j, "u1", r.u1);
    put_optional(j, "u2", r.u2);
    put_optional(j, "W", r.w);
    put_optional(j, "lambda_a", r.lambda_a);
    put_optional(j, "lambda_b", r.lambda_b);
    j["inputs"] = r.inputs;
}

void from_json(const nlohmann::json& j, EstimatorReport& r) {
    r.u1 = get_optional<double>(j, "u1");
    r.u2 = get_optional<double>(j, "u2");
    r.w = get_optional<double>(j, "W");
    r.lambda_a = get_optional<double>(j, "lambda_a");
    r.lambda_b = get_optional<double>(j, "lambda_b");
    r.inputs = j.at("inputs").get<CensusAggregates>();
}

} // namespace moment_bounds
