#include "doctest.h"

#include "moment_bounds/census.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/report.hpp"

#include <cmath>
#include <sstream>

using namespace moment_bounds;

TEST_CASE("analysis of a ring") {
    const auto r = analyze_graph(generate(GraphKind::ring, 6), "ring6");
    CHECK(r.meta == GraphMeta{6, 6, "ring6"});
    REQUIRE(r.aggregates);
    CHECK(r.moments.size() == 3);
    CHECK(r.moments.front()[4] == 6);
    REQUIRE(r.bound(1));
    CHECK(r.bound(1)->beta == doctest::Approx(std::sqrt(2.0)));
    REQUIRE(r.spectrum);
    CHECK(r.spectrum->rho == doctest::Approx(2));
    CHECK(r.spectrum->eigenvalues.empty());
    CHECK(r.provenance.version == kVersion);
    CHECK_FALSE(r.provenance.timestamp);
    CHECK_FALSE(r.provenance.omega_note.empty());
}

TEST_CASE("analysis from moments only") {
    const MomentSequence enron(3215, {1, 0, 22.47, 394.7, 33491, 2603200}, MomentSource::external);
    const auto r = analyze_moments(enron, "enron");
    CHECK(r.meta.e == -1);
    CHECK_FALSE(r.aggregates);
    CHECK_FALSE(r.spectrum);
    REQUIRE(r.bound(2));
    CHECK(std::abs(r.bound(2)->beta - 78.53) <= 0.05);
    CHECK(r.bound(2)->alpha <= 0);
}

TEST_CASE("edgeless and isolated inputs are reported, not fatal") {
    const auto r = analyze_graph(Graph::from_edges(1, {}), "single");
    CHECK(r.bounds.empty());
    CHECK_FALSE(r.diagnostics.empty());
    CHECK(r.moments.front()[2] == 0);
}

TEST_CASE("eigencount queries ride along") {
    AnalysisConfig cfg;
    cfg.queries.push_back({{2.5, 3.5}, {-3, 3}, 4});
    cfg.keep_eigenvalues = true;
    const auto r = analyze_graph(generate(GraphKind::complete, 4), "k4", cfg);
    REQUIRE(r.eigencount.size() == 1);
    CHECK(r.eigencount[0].z_d >= 0.25 - 1e-8);
    REQUIRE(r.eigencount[0].exact_fraction);
    CHECK(*r.eigencount[0].exact_fraction == doctest::Approx(0.25));
    CHECK(r.spectrum->eigenvalues.size() == 4);
}

TEST_CASE("report json round trip") {
    AnalysisConfig cfg;
    cfg.queries.push_back({{0.5, 2}, {-4, 4}, 5});
    cfg.keep_eigenvalues = true;
    cfg.timestamp = true;
    const auto r = analyze_graph(generate(GraphKind::erdos_renyi, 30, {0.2, 3}), "er30", cfg);
    CHECK(r.provenance.timestamp);
    const nlohmann::json j = r;
    CHECK(j.at("schema_version") == kReportSchemaVersion);
    const auto back = j.get<AnalysisReport>();
    const nlohmann::json again = back;
    CHECK(again == j);
    CHECK(back.meta == r.meta);
    CHECK(back.aggregates == r.aggregates);
    CHECK(back.spectrum == r.spectrum);
    CHECK(back.eigencount == r.eigencount);
    CHECK(back.provenance == r.provenance);
    REQUIRE(back.bound(2));
    CHECK(back.bound(2)->beta == r.bound(2)->beta);

    // unknown fields from a newer writer are ignored
    nlohmann::json future = j;
    future["something_new"] = {1, 2, 3};
    CHECK_NOTHROW(future.get<AnalysisReport>());
}

TEST_CASE("csv export") {
    std::ostringstream empty;
    write_reports_csv(empty, {});
    CHECK(empty.str() ==
          "source,n,e,m2,m3,m4,m5,alpha1,beta1,alpha2,beta2,rho,lambda_min,u1,u2,W,lambda_a,lambda_b\n");

    std::vector<AnalysisReport> reps;
    reps.push_back(analyze_graph(generate(GraphKind::ring, 6), "a"));
    reps.push_back(analyze_graph(generate(GraphKind::complete, 5), "b,c"));
    reps.push_back(analyze_graph(generate(GraphKind::star, 5), "datén/\"x\".txt"));
    std::ostringstream out;
    write_reports_csv(out, reps);
    const std::string s = out.str();
    CHECK(std::count(s.begin(), s.end(), '\n') == 4);
    CHECK(s.find("\n\"b,c\",5,10,") != std::string::npos);
    CHECK(s.find("\n\"datén/\"\"x\"\".txt\",") != std::string::npos);

    CHECK(csv_escape("plain") == "plain");
    CHECK(csv_escape("a\nb") == "\"a\nb\"");
    CHECK(format_double(0.1) == "0.1");
    CHECK(format_double(2.0) == "2");
    CHECK(std::stod(format_double(1.0 / 3.0)) == 1.0 / 3.0);
}

TEST_CASE("ego batch") {
    const Graph g = generate(GraphKind::erdos_renyi, 400, {0.02, 9});
    EgoSampleOptions opt;
    opt.count = 10;
    opt.radius = 2;
    opt.seed = 4;
    opt.threads = 3;
    const auto a = sample_ego(g, opt);
    REQUIRE(a.rows.size() == 10);
    for (const auto& row : a.rows)
        if (row.rho && row.beta2) CHECK(*row.beta2 <= *row.rho + 1e-8);
    for (const auto& [name, c] : a.correlations)
        if (c) CHECK(std::abs(*c) <= 1 + 1e-12);
    opt.threads = 1;
    const auto b = sample_ego(g, opt);
    CHECK(a.rows == b.rows);
    std::ostringstream sa, sb;
    write_ego_csv(sa, a);
    write_ego_csv(sb, b);
    CHECK(sa.str() == sb.str());

    opt.count = 1000;
    const auto capped = sample_ego(g, opt);
    CHECK(capped.rows.size() == 400);
    CHECK_FALSE(capped.warnings.empty());
}

TEST_CASE("ego batch on an isolated root") {
    const Graph g = Graph::from_edges(1, {});
    const auto b = sample_ego(g, {.count = 1});
    REQUIRE(b.rows.size() == 1);
    CHECK(b.rows[0].n == 1);
    CHECK_FALSE(b.rows[0].beta1);
}

TEST_CASE("pearson") {
    std::vector<std::optional<double>> x{1, 2, 3, std::nullopt}, y{2, 4, 6, 1};
    CHECK(*pearson(x, y) == doctest::Approx(1));
    std::vector<std::optional<double>> flat{1, 1, 1, 1};
    CHECK_FALSE(pearson(flat, y));
    std::vector<std::optional<double>> one{1, std::nullopt, std::nullopt, std::nullopt};
    CHECK_FALSE(pearson(one, y));
}
