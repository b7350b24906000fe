#include "moment_bounds/graph.hpp"

#include "moment_bounds/error.hpp"
#include "random.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <queue>
#include <sstream>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "graph-core";

} // namespace

Graph Graph::from_edges(std::size_t n, std::span<const Edge> edges, bool drop_invalid) {
    if (n > std::numeric_limits<NodeId>::max())
        throw ValidationError(kModule, "node count " + std::to_string(n) + " exceeds the 32-bit id range");

    std::vector<Edge> directed;
    directed.reserve(2 * edges.size());
    for (const auto& [u, v] : edges) {
        if (u >= n || v >= n)
            throw ValidationError(kModule, "edge (" + std::to_string(u) + ", " + std::to_string(v) +
                                               ") references a node outside 0.." + std::to_string(n) + ")");
        if (u == v) {
            if (drop_invalid) continue;
            throw ValidationError(kModule, "self-loop at node " + std::to_string(u));
        }
        directed.emplace_back(u, v);
        directed.emplace_back(v, u);
    }
    std::sort(directed.begin(), directed.end());
    const auto last = std::unique(directed.begin(), directed.end());
    if (last != directed.end()) {
        if (!drop_invalid) {
            const auto dup = std::adjacent_find(directed.begin(), directed.end());
            throw ValidationError(kModule, "duplicate edge (" + std::to_string(std::min(dup->first, dup->second)) +
                                               ", " + std::to_string(std::max(dup->first, dup->second)) + ")");
        }
        directed.erase(last, directed.end());
    }

    Graph g;
    g.offsets_.assign(n + 1, 0);
    g.neighbors_.reserve(directed.size());
    for (const auto& [u, v] : directed) {
        ++g.offsets_[u + 1];
        g.neighbors_.push_back(v);
    }
    for (std::size_t i = 0; i < n; ++i) g.offsets_[i + 1] += g.offsets_[i];
    return g;
}

bool Graph::has_edge(NodeId u, NodeId v) const {
    const auto nb = neighbors(u);
    return std::binary_search(nb.begin(), nb.end(), v);
}

std::size_t Graph::max_degree() const noexcept {
    std::size_t best = 0;
    for (std::size_t v = 0; v < node_count(); ++v) best = std::max(best, degree(static_cast<NodeId>(v)));
    return best;
}

std::size_t Graph::min_degree() const noexcept {
    if (node_count() == 0) return 0;
    std::size_t best = std::numeric_limits<std::size_t>::max();
    for (std::size_t v = 0; v < node_count(); ++v) best = std::min(best, degree(static_cast<NodeId>(v)));
    return best;
}

void Graph::set_labels(std::vector<std::int64_t> labels) {
    if (!labels.empty() && labels.size() != node_count())
        throw ValidationError(kModule, "label map size does not match node count");
    labels_ = std::move(labels);
}

std::vector<Edge> Graph::edges() const {
    std::vector<Edge> out;
    out.reserve(edge_count());
    for (NodeId u = 0; u < node_count(); ++u)
        for (NodeId v : neighbors(u))
            if (u < v) out.emplace_back(u, v);
    return out;
}

void Graph::validate() const {
    const std::size_t n = node_count();
    if (!offsets_.empty() && (offsets_.front() != 0 || offsets_.back() != neighbors_.size()))
        throw ValidationError(kModule, "offset array inconsistent with adjacency size");
    if (neighbors_.size() % 2 != 0) throw ValidationError(kModule, "odd adjacency size: degree sum must equal 2e");
    for (NodeId u = 0; u < n; ++u) {
        const auto nb = neighbors(u);
        for (std::size_t k = 0; k < nb.size(); ++k) {
            const NodeId v = nb[k];
            if (v >= n) throw ValidationError(kModule, "neighbor index out of range at node " + std::to_string(u));
            if (v == u) throw ValidationError(kModule, "self-loop at node " + std::to_string(u));
            if (k > 0 && nb[k - 1] >= v)
                throw ValidationError(kModule, "adjacency of node " + std::to_string(u) + " not strictly increasing");
            if (!has_edge(v, u))
                throw ValidationError(kModule, "asymmetric edge " + std::to_string(u) + " -> " + std::to_string(v));
        }
    }
}

Graph load_edge_list(std::istream& in, const EdgeListOptions& options) {
    if (options.index_base != 0 && options.index_base != 1)
        throw ValidationError(kModule, "index base must be 0 or 1");

    std::vector<Edge> edges;
    std::int64_t max_index = -1;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;

        std::int64_t ids[2];
        std::size_t found = 0;
        const char* p = line.data() + first;
        const char* end = line.data() + line.size();
        while (p < end) {
            while (p < end && (*p == ' ' || *p == '\t' || *p == '\r')) ++p;
            if (p == end) break;
            const char* tok_end = p;
            while (tok_end < end && *tok_end != ' ' && *tok_end != '\t' && *tok_end != '\r') ++tok_end;
            if (found == 2) throw ParseError(kModule, "expected exactly two node ids", line_no);
            std::int64_t value = 0;
            const auto [ptr, ec] = std::from_chars(p, tok_end, value);
            if (ec != std::errc{} || ptr != tok_end)
                throw ParseError(kModule, "malformed node id '" + std::string(p, tok_end) + "'", line_no);
            ids[found++] = value - options.index_base;
            p = tok_end;
        }
        if (found != 2) throw ParseError(kModule, "expected exactly two node ids", line_no);
        for (auto id : ids) {
            if (id < 0) throw ParseError(kModule, "negative node id after re-basing", line_no);
            if (id >= static_cast<std::int64_t>(std::numeric_limits<NodeId>::max()))
                throw ParseError(kModule, "node id too large", line_no);
            max_index = std::max(max_index, id);
        }
        edges.emplace_back(static_cast<NodeId>(ids[0]), static_cast<NodeId>(ids[1]));
    }
    if (in.bad()) throw IoError(kModule, "read failure while parsing edge list");

    const std::size_t n = static_cast<std::size_t>(max_index + 1);
    Graph g = Graph::from_edges(n, edges, options.allow_duplicates);
    if (options.index_base != 0) {
        std::vector<std::int64_t> labels(n);
        for (std::size_t i = 0; i < n; ++i) labels[i] = static_cast<std::int64_t>(i) + options.index_base;
        g.set_labels(std::move(labels));
    }
    return g;
}

Graph load_edge_list_file(const std::filesystem::path& path, const EdgeListOptions& options) {
    std::ifstream in(path);
    if (!in) throw IoError(kModule, "cannot open edge list '" + path.string() + "'");
    return load_edge_list(in, options);
}

EgoSubgraph ego_subgraph(const Graph& g, const EgoSpec& spec) {
    const std::size_t n = g.node_count();
    if (spec.root >= n)
        throw ValidationError(kModule, "ego root " + std::to_string(spec.root) + " out of range for n=" + std::to_string(n));
    if (spec.radius < 1) throw ValidationError(kModule, "ego radius must be at least 1");

    constexpr auto unseen = std::numeric_limits<NodeId>::max();
    std::vector<NodeId> local(n, unseen);
    std::vector<unsigned> depth(n, 0);
    EgoSubgraph out;
    std::queue<NodeId> frontier;
    local[spec.root] = 0;
    out.node_map.push_back(spec.root);
    frontier.push(spec.root);
    while (!frontier.empty()) {
        const NodeId u = frontier.front();
        frontier.pop();
        if (depth[u] == spec.radius) continue;
        for (NodeId v : g.neighbors(u)) {
            if (local[v] != unseen) continue;
            local[v] = static_cast<NodeId>(out.node_map.size());
            depth[v] = depth[u] + 1;
            out.node_map.push_back(v);
            frontier.push(v);
        }
    }

    std::vector<Edge> edges;
    for (NodeId i = 0; i < out.node_map.size(); ++i) {
        for (NodeId v : g.neighbors(out.node_map[i])) {
            const NodeId j = local[v];
            if (j != unseen && i < j) edges.emplace_back(i, j);
        }
    }
    out.graph = Graph::from_edges(out.node_map.size(), edges);
    std::vector<std::int64_t> labels;
    labels.reserve(out.node_map.size());
    for (NodeId v : out.node_map) labels.push_back(g.label(v));
    out.graph.set_labels(std::move(labels));
    return out;
}

GraphKind parse_graph_kind(std::string_view name) {
    if (name == "ring") return GraphKind::ring;
    if (name == "complete") return GraphKind::complete;
    if (name == "star") return GraphKind::star;
    if (name == "path") return GraphKind::path;
    if (name == "erdos_renyi" || name == "er") return GraphKind::erdos_renyi;
    throw ValidationError(kModule, "unknown graph kind '" + std::string(name) + "'");
}

std::string_view to_string(GraphKind kind) {
    switch (kind) {
    case GraphKind::ring: return "ring";
    case GraphKind::complete: return "complete";
    case GraphKind::star: return "star";
    case GraphKind::path: return "path";
    case GraphKind::erdos_renyi: return "erdos_renyi";
    }
    return "unknown";
}

Graph generate(GraphKind kind, std::size_t n, const GenerateParams& params) {
    if (n < 1) throw ValidationError(kModule, "generated graphs need n >= 1");
    std::vector<Edge> edges;
    const auto id = [](std::size_t v) { return static_cast<NodeId>(v); };
    switch (kind) {
    case GraphKind::ring:
        for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(id(i), id(i + 1));
        if (n >= 3) edges.emplace_back(id(n - 1), 0);
        break;
    case GraphKind::path:
        for (std::size_t i = 0; i + 1 < n; ++i) edges.emplace_back(id(i), id(i + 1));
        break;
    case GraphKind::complete:
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) edges.emplace_back(id(i), id(j));
        break;
    case GraphKind::star:
        for (std::size_t i = 1; i < n; ++i) edges.emplace_back(0, id(i));
        break;
    case GraphKind::erdos_renyi: {
        const double p = params.p;
        if (!(p >= 0.0 && p <= 1.0)) throw ValidationError(kModule, "edge probability must lie in [0, 1]");
        if (p == 0.0) break;
        if (p == 1.0) return generate(GraphKind::complete, n, params);
        // Geometric skipping over the lexicographically ordered pairs (w < v).
        SeededRandom rng(params.seed);
        const double log_q = std::log1p(-p);
        std::int64_t v = 1, w = -1;
        const auto nn = static_cast<std::int64_t>(n);
        while (v < nn) {
            const double r = rng.uniform();
            w += 1 + static_cast<std::int64_t>(std::floor(std::log1p(-r) / log_q));
            while (w >= v && v < nn) {
                w -= v;
                ++v;
            }
            if (v < nn) edges.emplace_back(id(static_cast<std::size_t>(w)), id(static_cast<std::size_t>(v)));
        }
        break;
    }
    }
    return Graph::from_edges(n, edges);
}

} // namespace moment_bounds
