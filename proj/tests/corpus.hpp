#pragma once

#include "moment_bounds/graph.hpp"

#include <string>
#include <vector>

namespace mbtest {

struct NamedGraph {
    std::string name;
    moment_bounds::Graph graph;
};

// 200 seeded G(n, p) graphs, n <= 30, p cycling through 0.1, 0.3, 0.5.
inline std::vector<NamedGraph> random_corpus() {
    using namespace moment_bounds;
    const double ps[] = {0.1, 0.3, 0.5};
    std::vector<NamedGraph> out;
    for (int i = 0; i < 200; ++i) {
        const std::size_t n = 5 + static_cast<std::size_t>(i % 26);
        const double p = ps[i % 3];
        const std::uint64_t seed = 1000 + static_cast<std::uint64_t>(i);
        out.push_back({"er" + std::to_string(n) + "_" + std::to_string(i),
                       generate(GraphKind::erdos_renyi, n, {p, seed})});
    }
    return out;
}

// Random corpus plus complete graphs, stars, paths and rings up to 200 nodes.
inline std::vector<NamedGraph> full_corpus() {
    using namespace moment_bounds;
    auto out = random_corpus();
    for (std::size_t n : {2, 3, 4, 5, 8, 13, 30, 60})
        out.push_back({"K" + std::to_string(n), generate(GraphKind::complete, n)});
    for (std::size_t n : {3, 5, 9, 40, 200}) out.push_back({"S" + std::to_string(n), generate(GraphKind::star, n)});
    for (std::size_t n : {2, 3, 7, 50, 200}) out.push_back({"P" + std::to_string(n), generate(GraphKind::path, n)});
    for (std::size_t n : {3, 4, 5, 6, 7, 8, 12, 99, 200})
        out.push_back({"R" + std::to_string(n), generate(GraphKind::ring, n)});
    return out;
}

} // namespace mbtest
