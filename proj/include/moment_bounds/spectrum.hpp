#pragma once

#include "moment_bounds/graph.hpp"
#include "moment_bounds/moments.hpp"

#include <cstddef>
#include <vector>

namespace moment_bounds {

struct SpectrumOptions {
    std::size_t cap = 5000;             ///< refuse larger graphs
    std::size_t residual_samples = 8;   ///< eigenpairs checked for ||Av - lv||
};

struct SpectrumSummary {
    std::vector<double> eigenvalues; ///< descending
    double rho = 0;
    double lambda_min = 0;
    MomentSequence moments;          ///< m_0..m_5, source spectrum
    double max_residual = 0;         ///< over the sampled pairs, relative to ||A||
};

/// Dense symmetric eigendecomposition of the adjacency matrix. Throws
/// DomainError above the node cap and ConsistencyError if a sampled
/// residual exceeds 1e-8 ||A||.
SpectrumSummary compute_spectrum(const Graph& g, const SpectrumOptions& opt = {});

/// Builds a summary from known eigenvalues (any order).
SpectrumSummary summarize_spectrum(std::vector<double> eigenvalues);

/// Fraction of eigenvalues <= alpha.
double spectral_cdf(const SpectrumSummary& s, double alpha);

/// Fraction of eigenvalues in [lo, hi].
double spectral_fraction(const SpectrumSummary& s, double lo, double hi);

struct Histogram {
    std::vector<double> edges;        ///< bins + 1 entries
    std::vector<std::size_t> counts;
};

/// Equal-width bins over [lambda_min, rho]; the last bin is closed.
Histogram histogram(const SpectrumSummary& s, std::size_t bins);

} // namespace moment_bounds
