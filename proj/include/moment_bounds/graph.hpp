#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace moment_bounds {

using NodeId = std::uint32_t;
using Edge = std::pair<NodeId, NodeId>;

/// Immutable undirected simple graph in compressed sparse row form.
///
/// Neighbor lists are strictly increasing, symmetric and loop-free; this is
/// checked on construction. Node ids are contiguous `0..n-1`; the label each
/// node carried in the input is kept in `label()` for reports.
class Graph {
public:
    Graph() = default;

    /// Builds a graph on `n` nodes. With `drop_invalid` set, self-loops and
    /// repeated edges are silently discarded; otherwise they raise
    /// ValidationError. Endpoints >= n always raise.
    static Graph from_edges(std::size_t n, std::span<const Edge> edges, bool drop_invalid = false);

    std::size_t node_count() const noexcept { return offsets_.empty() ? 0 : offsets_.size() - 1; }
    std::size_t edge_count() const noexcept { return neighbors_.size() / 2; }

    std::span<const NodeId> neighbors(NodeId v) const {
        return {neighbors_.data() + offsets_[v], neighbors_.data() + offsets_[v + 1]};
    }
    std::size_t degree(NodeId v) const { return offsets_[v + 1] - offsets_[v]; }
    bool has_edge(NodeId u, NodeId v) const;

    std::size_t max_degree() const noexcept;
    std::size_t min_degree() const noexcept;

    /// Position of neighbors(v)[0] inside the flat adjacency array; used to
    /// align per-edge data with the adjacency lists.
    std::size_t adjacency_offset(NodeId v) const { return offsets_[v]; }
    std::size_t adjacency_size() const noexcept { return neighbors_.size(); }

    std::int64_t label(NodeId v) const { return labels_.empty() ? v : labels_[v]; }
    void set_labels(std::vector<std::int64_t> labels);

    std::vector<Edge> edges() const;

    /// Full structural re-check; throws ValidationError on the first violation.
    void validate() const;

private:
    std::vector<std::size_t> offsets_;
    std::vector<NodeId> neighbors_;
    std::vector<std::int64_t> labels_;
};

struct EdgeListOptions {
    int index_base = 0;            ///< 0 or 1
    bool allow_duplicates = false; ///< drop loops/duplicates instead of rejecting them
};

/// Reads whitespace separated "u v" pairs, one per line. Lines whose first
/// non-blank character is `#` and blank lines are skipped.
Graph load_edge_list(std::istream& in, const EdgeListOptions& options = {});
Graph load_edge_list_file(const std::filesystem::path& path, const EdgeListOptions& options = {});

struct EgoSpec {
    NodeId root = 0;
    unsigned radius = 1;
};

struct EgoSubgraph {
    Graph graph;
    std::vector<NodeId> node_map; ///< original index of each subgraph node, BFS order
};

/// Induced subgraph on every node within `radius` hops of `root`.
EgoSubgraph ego_subgraph(const Graph& g, const EgoSpec& spec);

enum class GraphKind { ring, complete, star, path, erdos_renyi };

GraphKind parse_graph_kind(std::string_view name);
std::string_view to_string(GraphKind kind);

struct GenerateParams {
    double p = 0.0;
    std::uint64_t seed = 0;
};

/// Deterministic synthetic graphs. `star` has one hub and n-1 leaves; `ring`
/// degenerates to a single node (n=1) or a single edge (n=2).
Graph generate(GraphKind kind, std::size_t n, const GenerateParams& params = {});

} // namespace moment_bounds
