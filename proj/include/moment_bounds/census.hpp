#pragma once

#include "moment_bounds/graph.hpp"

#include <cstdint>
#include <iosfwd>
#include <vector>

namespace moment_bounds {

/// Per-node local structure: degree d, and the number of distinct triangles
/// t, 4-cycles q and 5-cycles p that contain the node.
struct NodeCensus {
    std::vector<std::int64_t> degree;
    std::vector<std::int64_t> triangles;
    std::vector<std::int64_t> quadrangles;
    std::vector<std::int64_t> pentagons;

    std::size_t size() const noexcept { return degree.size(); }
};

/// Graph totals derived from a NodeCensus.
struct CensusAggregates {
    std::int64_t nodes = 0;
    std::int64_t edges = 0;
    std::int64_t triangles = 0;           ///< Delta
    std::int64_t quadrangles = 0;         ///< Q
    std::int64_t pentagons = 0;           ///< Pi
    std::int64_t degree_square_sum = 0;   ///< W2 = sum d_i^2
    std::int64_t degree_triangle_sum = 0; ///< C_dt = sum d_i t_i

    bool operator==(const CensusAggregates&) const = default;
};

/// The same totals expressed per node, possibly non-integral. This is the
/// form in which aggregates are usually published.
struct AggregateDensities {
    double nodes = 0;
    double edges = 0;
    double triangles = 0;
    double quadrangles = 0;
    double pentagons = 0;
    double degree_square_sum = 0;
    double degree_triangle_sum = 0;

    static AggregateDensities from(const CensusAggregates& a);
};

/// Triangles through each edge, aligned with the flat adjacency array:
/// entry `g.adjacency_offset(i) + k` belongs to edge (i, neighbors(i)[k]).
std::vector<std::int64_t> edge_triangles(const Graph& g, unsigned threads = 1);

/// Exact census. Triangles come from sorted-list intersection; quadrangles
/// and pentagons are recovered from the closed-walk diagonal by subtracting
/// the non-cycle walk types rooted at each node.
NodeCensus node_census(const Graph& g, unsigned threads = 1);

/// Throws ConsistencyError if the per-node sums are not divisible by the
/// cycle length (each k-cycle is seen from k nodes).
CensusAggregates aggregates(const NodeCensus& c);

/// Number of closed walks of length k (0..5) from each node back to itself.
/// Uses sparse propagation over at most two hops; no dense matrix powers.
std::vector<std::int64_t> walk_diagonal(const Graph& g, int k, unsigned threads = 1);

/// Distinct k-cycles (k in {3,4,5}) through node i by explicit path
/// enumeration. Exponential in k; meant as a test oracle on small graphs.
std::int64_t brute_force_cycles(const Graph& g, int k, NodeId i);

/// Closed 4-walks from one start node, split by the shape of the subgraph
/// they trace: (a) a 4-cycle, (b) two distinct edges at the start node,
/// (c) an edge plus a pendant edge at the far end, (d) a single edge.
struct WalkTypes4 {
    std::int64_t a = 0, b = 0, c = 0, d = 0;
    std::int64_t total() const { return a + b + c + d; }
};

/// Closed 5-walks from one start node: (a) a 5-cycle; (b) an edge to a
/// triangle not containing the start; (c) a triangle through the start with a
/// pendant edge at another corner; (d) a triangle through the start with a
/// pendant edge at the start; (e)+(f) the triangle alone, 10 walks per
/// triangle, split 8/2.
struct WalkTypes5 {
    std::int64_t a = 0, b = 0, c = 0, d = 0, e = 0, f = 0;
    std::int64_t total() const { return a + b + c + d + e + f; }
};

WalkTypes4 walk_types4(const Graph& g, const NodeCensus& c, NodeId i);
WalkTypes5 walk_types5(const Graph& g, const NodeCensus& c, std::span<const std::int64_t> edge_tri, NodeId i);

/// Graph-wide totals of the walk types.
WalkTypes4 walk_types4(const Graph& g, const NodeCensus& c);
WalkTypes5 walk_types5(const Graph& g, const NodeCensus& c);

/// CSV with header `node,d,t,q,p`; node is the input label.
void write_census_csv(std::ostream& out, const Graph& g, const NodeCensus& c);

} // namespace moment_bounds
