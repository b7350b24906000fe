#include "doctest.h"

#include "moment_bounds/cli.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "json.hpp"

using moment_bounds::run;

namespace {

struct Outcome {
    int code;
    std::string out;
    std::string err;
};

Outcome call(std::vector<std::string> args) {
    std::ostringstream out, err;
    const int code = run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string data(const std::string& name) { return std::string(MB_DATA_DIR) + "/" + name; }

std::filesystem::path scratch(const std::string& name, const std::string& content) {
    const auto dir = std::filesystem::temp_directory_path() / "moment_bounds_cli_test";
    std::filesystem::create_directories(dir);
    const auto p = dir / name;
    std::ofstream(p) << content;
    return p;
}

} // namespace

TEST_CASE("analyze a generated ring") {
    const auto r = call({"--generate", "ring:6", "analyze"});
    REQUIRE(r.code == 0);
    const auto j = nlohmann::json::parse(r.out);
    CHECK(j.at("moments").at(0).at("m").at(4) == 6.0);
    CHECK(j.at("bounds").at(0).at("beta").get<double>() == doctest::Approx(std::sqrt(2.0)));
    CHECK_FALSE(j.at("provenance").contains("timestamp"));
}

TEST_CASE("golden bounds from moments files") {
    const auto e = call({"--moments-file", data("enron_moments.json"), "bounds", "--level", "2"});
    REQUIRE(e.code == 0);
    const auto je = nlohmann::json::parse(e.out);
    const auto& b = je.at("bounds").at(0);
    CHECK(std::abs(b.at("beta").get<double>() - 78.53) <= 0.05);
    CHECK(b.at("alpha").get<double>() <= 0);

    const auto s = call({"bounds", "--moments-file", data("as_skitter_moments.json"), "--level", "2"});
    REQUIRE(s.code == 0);
    CHECK(std::abs(nlohmann::json::parse(s.out).at("bounds").at(0).at("beta").get<double>() - 74.72) <= 0.05);

    const auto bis = call({"--moments-file", data("enron_moments.json"), "bounds", "--level", "2", "--method", "bisect"});
    REQUIRE(bis.code == 0);
    const double beta_bis = nlohmann::json::parse(bis.out).at("bounds").at(0).at("beta").get<double>();
    CHECK(std::abs(beta_bis - b.at("beta").get<double>()) <= 1e-5);
}

TEST_CASE("exit codes") {
    const auto missing = call({"analyze", "/nonexistent/graph.txt"});
    CHECK(missing.code == 2);
    CHECK_FALSE(missing.err.empty());
    CHECK(missing.out.empty());

    CHECK(call({"--no-such-flag", "analyze"}).code == 2);
    CHECK(call({"bounds", "--level", "7", "--generate", "ring:6"}).code == 2);
    CHECK(call({}).code == 2);

    const auto bad = scratch("bad.txt", "0 1\nx y\n");
    const auto parse = call({"census", bad.string()});
    CHECK(parse.code == 2);
    CHECK(parse.err.find("line 2") != std::string::npos);

    const auto infeasible = scratch("infeasible.json", R"({"n": 4, "m": [1, 0, 1, 0, 0.5, 0]})");
    const auto inf = call({"--moments-file", infeasible.string(), "bounds", "--level", "2"});
    CHECK(inf.code == 1);
    CHECK(inf.err.find("error") != std::string::npos);

    const auto edgeless = scratch("edgeless.txt", "# nothing\n");
    CHECK(call({"bounds", edgeless.string()}).code == 1);
}

TEST_CASE("census and spectrum exports") {
    const auto g = scratch("paw.txt", "0 1\n1 2\n0 2\n2 3\n");
    const auto c = call({"--format", "csv", "census", g.string()});
    REQUIRE(c.code == 0);
    CHECK(c.out == "node,d,t,q,p\n0,2,1,0,0\n1,2,1,0,0\n2,3,1,0,0\n3,1,0,0,0\n");

    const auto s = call({"--format", "csv", "spectrum", g.string(), "--bins", "3"});
    REQUIRE(s.code == 0);
    CHECK(s.out.rfind("bin_lo,bin_hi,count\n", 0) == 0);

    const auto est = call({"estimate", g.string()});
    REQUIRE(est.code == 0);
    CHECK(nlohmann::json::parse(est.out).at("W") == 2.25);

    const auto based = scratch("paw1.txt", "1 2\n2 3\n1 3\n3 4\n");
    const auto c1 = call({"--format", "csv", "--index-base", "1", "census", based.string()});
    REQUIRE(c1.code == 0);
    CHECK(c1.out == "node,d,t,q,p\n1,2,1,0,0\n2,2,1,0,0\n3,3,1,0,0\n4,1,0,0,0\n");
}

TEST_CASE("facebook aggregates") {
    const auto f = scratch("fb.json", R"({"nodes": 2404, "edges": 9.478, "triangles": 28.15, "quadrangles": 825.3,
        "pentagons": 31794, "degree_square_sum": 1318, "degree_triangle_sum": 8520})");
    const auto m = call({"moments", "--aggregates-file", f.string()});
    REQUIRE(m.code == 0);
    const auto mj = nlohmann::json::parse(m.out);
    const auto& ms = mj.is_array() ? mj.at(0).at("m") : mj.at("m");
    CHECK(ms.at(2).get<double>() == doctest::Approx(18.95).epsilon(0.002));
    const auto e = call({"estimate", "--aggregates-file", f.string()});
    REQUIRE(e.code == 0);
    CHECK(std::abs(nlohmann::json::parse(e.out).at("lambda_a").get<double>() - 62.6) <= 0.5);
}

TEST_CASE("eigencount sweep csv") {
    const auto r = call({"--format", "csv", "--moments-file", data("example2_moments.json"), "eigencount",
                         "--sweep=-5:0.25:3", "--omega=-3,3", "--k", "5"});
    REQUIRE(r.code == 0);
    std::istringstream in(r.out);
    std::string line;
    std::getline(in, line);
    CHECK(line == "alpha,Z_D,F_exact");
    int rows = 0;
    while (std::getline(in, line)) {
        ++rows;
        const double z = std::stod(line.substr(line.find(',') + 1));
        CHECK(z <= 1 + 1e-6);
    }
    CHECK(rows == 33);

    const auto one = call({"--generate", "complete:4", "eigencount", "--interval", "2.5,3.5", "--k", "4"});
    REQUIRE(one.code == 0);
    const auto j = nlohmann::json::parse(one.out);
    CHECK(j.at("z_d").get<double>() >= 0.25 - 1e-8);
    CHECK(j.at("exact_fraction") == 0.25);

    CHECK(call({"--generate", "ring:6", "eigencount", "--sweep", "1:0:2"}).code == 2);
}

TEST_CASE("sample-ego is deterministic") {
    const std::vector<std::string> args{"--generate", "erdos_renyi:500:0.01", "--seed", "3", "--threads", "2",
                                        "sample-ego", "--count", "8", "--radius", "2"};
    const auto a = call(args);
    const auto b = call(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
    const auto j = nlohmann::json::parse(a.out);
    CHECK(j.at("rows").size() == 8);
    CHECK(j.contains("correlations_with_rho"));
}

TEST_CASE("report joins saved analyses") {
    const auto r6 = call({"--generate", "ring:6", "analyze"});
    const auto k5 = call({"--generate", "complete:5", "analyze"});
    REQUIRE(r6.code == 0);
    REQUIRE(k5.code == 0);
    const auto a = scratch("r6.json", r6.out);
    const auto b = scratch("k5.json", k5.out);
    const auto csv = call({"report", a.string(), b.string()});
    REQUIRE(csv.code == 0);
    CHECK(std::count(csv.out.begin(), csv.out.end(), '\n') == 3);
    CHECK(csv.out.find("\ngenerated:complete:5,5,10,") != std::string::npos);

    const auto json = call({"--format", "json", "report", a.string()});
    REQUIRE(json.code == 0);
    CHECK(nlohmann::json::parse(json.out).is_array());
}
