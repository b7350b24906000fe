#include "doctest.h"

#include "corpus.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/graph.hpp"

#include <numeric>
#include <sstream>

using namespace moment_bounds;

namespace {

Graph from_text(const std::string& text, EdgeListOptions opt = {}) {
    std::istringstream in(text);
    return load_edge_list(in, opt);
}

std::vector<Edge> sorted_edges(const Graph& g) {
    auto e = g.edges();
    std::sort(e.begin(), e.end());
    return e;
}

} // namespace

TEST_CASE("edge list loading") {
    const Graph g = from_text("0 1\n1 2");
    CHECK(g.node_count() == 3);
    CHECK(g.edge_count() == 2);
    CHECK(g.has_edge(0, 1));
    CHECK(g.has_edge(2, 1));
    CHECK_FALSE(g.has_edge(0, 2));

    const Graph h = from_text("1 2\n2 3", {.index_base = 1});
    CHECK(sorted_edges(h) == sorted_edges(g));

    CHECK_THROWS_AS(from_text("0 0"), ValidationError);
    CHECK_THROWS_AS(from_text("0 1\n1 0"), ValidationError);
    const Graph d = from_text("0 0\n0 1\n1 0\n", {.allow_duplicates = true});
    CHECK(d.edge_count() == 1);

    const Graph c = from_text("# header\n\n  # indented comment\n3 4\n");
    CHECK(c.node_count() == 5);
    CHECK(c.edge_count() == 1);
    CHECK(c.degree(0) == 0);
}

TEST_CASE("malformed lines report their line number") {
    try {
        from_text("0 1\n1 x\n");
        FAIL("expected a parse error");
    } catch (const ParseError& e) {
        CHECK(e.line() == 2);
    }
    CHECK_THROWS_AS(from_text("0 1 2\n"), ParseError);
    CHECK_THROWS_AS(from_text("0\n"), ParseError);
    CHECK_THROWS_AS(from_text("-1 2\n"), ParseError);
    CHECK_THROWS_AS(from_text("0 1\n", {.index_base = 1}), ParseError);
}

TEST_CASE("from_edges rejects out of range endpoints") {
    const std::vector<Edge> e{{0, 5}};
    CHECK_THROWS_AS(Graph::from_edges(3, e), ValidationError);
    CHECK_THROWS_AS(Graph::from_edges(3, e, true), ValidationError);
}

TEST_CASE("ego subgraphs") {
    const Graph p5 = generate(GraphKind::path, 5);
    const auto one = ego_subgraph(p5, {2, 1});
    CHECK(one.graph.node_count() == 3);
    CHECK(one.graph.edge_count() == 2);
    CHECK(one.node_map.front() == 2);
    auto nodes = one.node_map;
    std::sort(nodes.begin(), nodes.end());
    CHECK(nodes == std::vector<NodeId>{1, 2, 3});

    const auto two = ego_subgraph(p5, {2, 2});
    CHECK(two.graph.node_count() == 5);
    CHECK(two.graph.edge_count() == 4);

    const auto k4 = ego_subgraph(generate(GraphKind::complete, 4), {0, 1});
    CHECK(k4.graph.node_count() == 4);
    CHECK(k4.graph.edge_count() == 6);

    CHECK_THROWS_AS(ego_subgraph(p5, {5, 1}), ValidationError);

    CHECK_THROWS_AS(ego_subgraph(p5, {0, 0}), ValidationError);
}

TEST_CASE("ego ball with a large radius is the connected component") {
    // two disjoint triangles plus an isolated node
    const std::vector<Edge> e{{0, 1}, {1, 2}, {0, 2}, {3, 4}, {4, 5}, {3, 5}};
    const Graph g = Graph::from_edges(7, e);
    const auto ego = ego_subgraph(g, {4, 10});
    CHECK(ego.graph.node_count() == 3);
    CHECK(ego.graph.edge_count() == 3);
    CHECK(ego_subgraph(g, {6, 10}).graph.node_count() == 1);
}

TEST_CASE("generators") {
    const Graph r6 = generate(GraphKind::ring, 6);
    CHECK(r6.edge_count() == 6);
    for (NodeId v = 0; v < 6; ++v) CHECK(r6.degree(v) == 2);

    CHECK(generate(GraphKind::complete, 4).edge_count() == 6);
    CHECK(generate(GraphKind::star, 5).max_degree() == 4);
    CHECK(generate(GraphKind::path, 5).edge_count() == 4);
    CHECK(generate(GraphKind::ring, 1).edge_count() == 0);
    CHECK(generate(GraphKind::ring, 2).edge_count() == 1);

    const Graph a = generate(GraphKind::erdos_renyi, 30, {0.2, 7});
    const Graph b = generate(GraphKind::erdos_renyi, 30, {0.2, 7});
    CHECK(a.edges() == b.edges());
    CHECK(a.edges() != generate(GraphKind::erdos_renyi, 30, {0.2, 8}).edges());
    CHECK(generate(GraphKind::erdos_renyi, 10, {0.0, 1}).edge_count() == 0);
    CHECK(generate(GraphKind::erdos_renyi, 10, {1.0, 1}).edge_count() == 45);

    CHECK_THROWS(generate(GraphKind::ring, 0));
    CHECK_THROWS(generate(GraphKind::erdos_renyi, 10, {1.5, 1}));
    CHECK(parse_graph_kind("erdos_renyi") == GraphKind::erdos_renyi);
    CHECK(to_string(GraphKind::star) == "star");
    CHECK_THROWS(parse_graph_kind("hypercube"));
}

TEST_CASE("structural invariants hold across the corpus") {
    for (const auto& [name, g] : mbtest::full_corpus()) {
        CAPTURE(name);
        CHECK_NOTHROW(g.validate());
        std::size_t sum = 0;
        for (NodeId v = 0; v < g.node_count(); ++v) sum += g.degree(v);
        CHECK(sum == 2 * g.edge_count());
    }
}

TEST_CASE("labels survive re-basing") {
    const Graph g = from_text("10 20\n20 30\n", {.index_base = 0});
    CHECK(g.node_count() == 31);
    CHECK(g.label(20) == 20);
}
