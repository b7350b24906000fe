#include "moment_bounds/census.hpp"

#include "checked.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/parallel.hpp"

#include <algorithm>
#include <ostream>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "census";

using detail::checked_add;
using detail::checked_mul;

std::int64_t intersection_size(std::span<const NodeId> a, std::span<const NodeId> b) {
    std::int64_t count = 0;
    auto ia = a.begin(), ib = b.begin();
    while (ia != a.end() && ib != b.end()) {
        if (*ia < *ib) {
            ++ia;
        } else if (*ib < *ia) {
            ++ib;
        } else {
            ++count;
            ++ia;
            ++ib;
        }
    }
    return count;
}

std::int64_t halve_exact(std::int64_t twice, const char* what, NodeId node) {
    if (twice < 0 || twice % 2 != 0)
        throw ConsistencyError(kModule, std::string("walk decomposition for ") + what + " at node " +
                                            std::to_string(node) + " left " + std::to_string(twice) +
                                            " walks (must be even and nonnegative)");
    return twice / 2;
}

// Closed 2-walk counts from a fixed root: counts[x] = (A^2)_{root,x}. The
// scratch array is all-zero between uses; `touched` lists nonzero entries.
struct TwoHop {
    std::vector<std::int64_t> counts;
    std::vector<NodeId> touched;

    explicit TwoHop(std::size_t n) : counts(n, 0) {}

    void fill(const Graph& g, NodeId root) {
        for (NodeId j : g.neighbors(root))
            for (NodeId x : g.neighbors(j))
                if (counts[x]++ == 0) touched.push_back(x);
    }

    void clear() {
        for (NodeId x : touched) counts[x] = 0;
        touched.clear();
    }

    std::int64_t closed4() const {
        std::int64_t s = 0;
        for (NodeId x : touched) s = checked_add(s, checked_mul(counts[x], counts[x], kModule), kModule);
        return s;
    }

    // (A^5)_ii = w' A w with w = A^2 e_i.
    std::int64_t closed5(const Graph& g) const {
        std::int64_t s = 0;
        for (NodeId x : touched) {
            std::int64_t around = 0;
            for (NodeId y : g.neighbors(x)) around += counts[y];
            s = checked_add(s, checked_mul(counts[x], around, kModule), kModule);
        }
        return s;
    }
};

std::int64_t closed3(const Graph& g, const TwoHop& w, NodeId root) {
    std::int64_t s = 0;
    for (NodeId j : g.neighbors(root)) s += w.counts[j];
    return s;
}

// Non-cycle closed 4-walks rooted at i (types b, c, d).
std::int64_t tree_walks4(const Graph& g, NodeId i) {
    const auto d = static_cast<std::int64_t>(g.degree(i));
    std::int64_t pendant = 0;
    for (NodeId j : g.neighbors(i)) pendant += static_cast<std::int64_t>(g.degree(j)) - 1;
    return d * (d - 1) + pendant + d;
}

} // namespace

AggregateDensities AggregateDensities::from(const CensusAggregates& a) {
    const double n = static_cast<double>(a.nodes);
    if (n <= 0) throw DomainError(kModule, "aggregates of an empty graph have no per-node form");
    return {n,
            static_cast<double>(a.edges) / n,
            static_cast<double>(a.triangles) / n,
            static_cast<double>(a.quadrangles) / n,
            static_cast<double>(a.pentagons) / n,
            static_cast<double>(a.degree_square_sum) / n,
            static_cast<double>(a.degree_triangle_sum) / n};
}

std::vector<std::int64_t> edge_triangles(const Graph& g, unsigned threads) {
    std::vector<std::int64_t> tri(g.adjacency_size(), 0);
    parallel_for(g.node_count(), threads, [&](std::size_t iu) {
        const auto i = static_cast<NodeId>(iu);
        const auto ni = g.neighbors(i);
        for (std::size_t k = 0; k < ni.size(); ++k) {
            const NodeId j = ni[k];
            if (j < i) continue;
            const auto nj = g.neighbors(j);
            const std::int64_t c = intersection_size(ni, nj);
            tri[g.adjacency_offset(i) + k] = c;
            const auto back = std::lower_bound(nj.begin(), nj.end(), i) - nj.begin();
            tri[g.adjacency_offset(j) + static_cast<std::size_t>(back)] = c;
        }
    });
    return tri;
}

NodeCensus node_census(const Graph& g, unsigned threads) {
    const std::size_t n = g.node_count();
    NodeCensus c;
    c.degree.resize(n);
    c.triangles.resize(n);
    c.quadrangles.resize(n);
    c.pentagons.resize(n);

    const auto et = edge_triangles(g, threads);
    for (NodeId i = 0; i < n; ++i) {
        c.degree[i] = static_cast<std::int64_t>(g.degree(i));
        std::int64_t twice = 0;
        for (std::size_t k = 0; k < g.degree(i); ++k) twice += et[g.adjacency_offset(i) + k];
        c.triangles[i] = halve_exact(twice, "triangles", i);
    }

    const std::size_t workers = std::max(1u, threads);
    const std::size_t chunks = std::min<std::size_t>(workers * 8, std::max<std::size_t>(n, 1));
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        TwoHop w(n);
        for (std::size_t iu = chunk; iu < n; iu += chunks) {
            const auto i = static_cast<NodeId>(iu);
            w.fill(g, i);
            const std::int64_t a4 = w.closed4();
            const std::int64_t a5 = w.closed5(g);
            w.clear();

            c.quadrangles[i] = halve_exact(a4 - tree_walks4(g, i), "quadrangles", i);
            const WalkTypes5 types = walk_types5(g, c, et, i);
            c.pentagons[i] = halve_exact(a5 - (types.b + types.c + types.d + types.e + types.f), "pentagons", i);
        }
    });
    return c;
}

CensusAggregates aggregates(const NodeCensus& c) {
    CensusAggregates a;
    a.nodes = static_cast<std::int64_t>(c.size());
    std::int64_t deg = 0, tri = 0, quad = 0, pent = 0;
    for (std::size_t i = 0; i < c.size(); ++i) {
        if (c.degree[i] < 0 || c.triangles[i] < 0 || c.quadrangles[i] < 0 || c.pentagons[i] < 0)
            throw ConsistencyError(kModule, "negative census entry at node " + std::to_string(i));
        deg = checked_add(deg, c.degree[i], kModule);
        tri = checked_add(tri, c.triangles[i], kModule);
        quad = checked_add(quad, c.quadrangles[i], kModule);
        pent = checked_add(pent, c.pentagons[i], kModule);
        a.degree_square_sum = checked_add(a.degree_square_sum, checked_mul(c.degree[i], c.degree[i], kModule), kModule);
        a.degree_triangle_sum =
            checked_add(a.degree_triangle_sum, checked_mul(c.degree[i], c.triangles[i], kModule), kModule);
    }
    const auto divide = [](std::int64_t sum, std::int64_t by, const char* what) {
        if (sum % by != 0)
            throw ConsistencyError(kModule, std::string("sum of per-node ") + what + " (" + std::to_string(sum) +
                                                ") is not divisible by " + std::to_string(by));
        return sum / by;
    };
    a.edges = divide(deg, 2, "degrees");
    a.triangles = divide(tri, 3, "triangles");
    a.quadrangles = divide(quad, 4, "quadrangles");
    a.pentagons = divide(pent, 5, "pentagons");
    return a;
}

std::vector<std::int64_t> walk_diagonal(const Graph& g, int k, unsigned threads) {
    if (k < 0 || k > 5) throw DomainError(kModule, "closed-walk diagonal supported for k = 0..5 only");
    const std::size_t n = g.node_count();
    std::vector<std::int64_t> out(n, 0);
    if (k == 0) {
        std::fill(out.begin(), out.end(), 1);
        return out;
    }
    if (k == 1) return out;
    if (k == 2) {
        for (NodeId i = 0; i < n; ++i) out[i] = static_cast<std::int64_t>(g.degree(i));
        return out;
    }
    const std::size_t chunks = std::min<std::size_t>(std::max(1u, threads) * 8, std::max<std::size_t>(n, 1));
    parallel_for(chunks, threads, [&](std::size_t chunk) {
        TwoHop w(n);
        for (std::size_t iu = chunk; iu < n; iu += chunks) {
            const auto i = static_cast<NodeId>(iu);
            w.fill(g, i);
            out[i] = k == 3 ? closed3(g, w, i) : k == 4 ? w.closed4() : w.closed5(g);
            w.clear();
        }
    });
    return out;
}

std::int64_t brute_force_cycles(const Graph& g, int k, NodeId i) {
    if (k < 3 || k > 5) throw DomainError(kModule, "brute-force cycle count supports k = 3, 4, 5");
    if (i >= g.node_count()) throw ValidationError(kModule, "node out of range");

    std::vector<NodeId> path{i};
    std::vector<char> on_path(g.node_count(), 0);
    on_path[i] = 1;
    std::int64_t closed = 0;
    // Every cycle through i is found once per direction.
    auto extend = [&](auto&& self) -> void {
        const NodeId tail = path.back();
        if (static_cast<int>(path.size()) == k) {
            if (g.has_edge(tail, i)) ++closed;
            return;
        }
        for (NodeId v : g.neighbors(tail)) {
            if (on_path[v]) continue;
            on_path[v] = 1;
            path.push_back(v);
            self(self);
            path.pop_back();
            on_path[v] = 0;
        }
    };
    extend(extend);
    return closed / 2;
}

WalkTypes4 walk_types4(const Graph& g, const NodeCensus& c, NodeId i) {
    WalkTypes4 w;
    const std::int64_t d = c.degree[i];
    w.a = 2 * c.quadrangles[i];
    w.b = d * (d - 1);
    for (NodeId j : g.neighbors(i)) w.c += c.degree[j] - 1;
    w.d = d;
    return w;
}

WalkTypes5 walk_types5(const Graph& g, const NodeCensus& c, std::span<const std::int64_t> edge_tri, NodeId i) {
    WalkTypes5 w;
    const std::int64_t d = c.degree[i];
    const std::int64_t t = c.triangles[i];
    w.a = 2 * c.pentagons[i];
    const auto nb = g.neighbors(i);
    for (std::size_t k = 0; k < nb.size(); ++k) {
        const NodeId j = nb[k];
        const std::int64_t tij = edge_tri[g.adjacency_offset(i) + k];
        w.b = checked_add(w.b, 2 * (c.triangles[j] - tij), kModule);
        w.c = checked_add(w.c, checked_mul(2 * tij, c.degree[j] - 2, kModule), kModule);
    }
    w.d = t > 0 ? checked_mul(4 * t, d - 2, kModule) : 0;
    w.e = 8 * t;
    w.f = 2 * t;
    return w;
}

WalkTypes4 walk_types4(const Graph& g, const NodeCensus& c) {
    WalkTypes4 total;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto w = walk_types4(g, c, i);
        total.a += w.a;
        total.b += w.b;
        total.c += w.c;
        total.d += w.d;
    }
    return total;
}

WalkTypes5 walk_types5(const Graph& g, const NodeCensus& c) {
    const auto et = edge_triangles(g);
    WalkTypes5 total;
    for (NodeId i = 0; i < g.node_count(); ++i) {
        const auto w = walk_types5(g, c, et, i);
        total.a = checked_add(total.a, w.a, kModule);
        total.b = checked_add(total.b, w.b, kModule);
        total.c = checked_add(total.c, w.c, kModule);
        total.d = checked_add(total.d, w.d, kModule);
        total.e = checked_add(total.e, w.e, kModule);
        total.f = checked_add(total.f, w.f, kModule);
    }
    return total;
}

void write_census_csv(std::ostream& out, const Graph& g, const NodeCensus& c) {
    out << "node,d,t,q,p\n";
    for (NodeId i = 0; i < c.size(); ++i)
        out << g.label(i) << ',' << c.degree[i] << ',' << c.triangles[i] << ',' << c.quadrangles[i] << ','
            << c.pentagons[i] << '\n';
}

} // namespace moment_bounds
