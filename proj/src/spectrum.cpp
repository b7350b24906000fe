#include "moment_bounds/spectrum.hpp"

#include "moment_bounds/error.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>
#include <functional>

namespace moment_bounds {

namespace {

constexpr const char* kModule = "spectral-oracle";

} // namespace

SpectrumSummary summarize_spectrum(std::vector<double> eigenvalues) {
    if (eigenvalues.empty()) throw DomainError(kModule, "empty spectrum");
    std::stable_sort(eigenvalues.begin(), eigenvalues.end(), std::greater<>());
    SpectrumSummary s;
    s.moments = moments_from_spectrum(eigenvalues, 5);
    s.rho = eigenvalues.front();
    s.lambda_min = eigenvalues.back();
    s.eigenvalues = std::move(eigenvalues);
    return s;
}

SpectrumSummary compute_spectrum(const Graph& g, const SpectrumOptions& opt) {
    const std::size_t n = g.node_count();
    if (n == 0) throw DomainError(kModule, "graph has no nodes");
    if (n > opt.cap)
        throw DomainError(kModule, "graph has " + std::to_string(n) + " nodes, above the dense eigensolver cap of " +
                                       std::to_string(opt.cap) + "; use the moment-based bounds instead");

    Eigen::MatrixXd a = Eigen::MatrixXd::Zero(Eigen::Index(n), Eigen::Index(n));
    for (NodeId i = 0; i < n; ++i)
        for (NodeId j : g.neighbors(i)) a(i, j) = 1.0;
    const bool vectors = opt.residual_samples > 0;
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(a, vectors ? Eigen::ComputeEigenvectors : Eigen::EigenvaluesOnly);
    if (solver.info() != Eigen::Success) throw DomainError(kModule, "eigensolver did not converge");

    const auto& values = solver.eigenvalues();
    double max_residual = 0.0;
    if (vectors) {
        const double norm = std::max(1.0, std::max(std::abs(values(0)), std::abs(values(Eigen::Index(n) - 1))));
        const std::size_t samples = std::min(opt.residual_samples, n);
        for (std::size_t s = 0; s < samples; ++s) {
            const auto k = Eigen::Index(samples == 1 ? 0 : s * (n - 1) / (samples - 1));
            const Eigen::VectorXd v = solver.eigenvectors().col(k);
            const double r = (a * v - values(k) * v).norm() / norm;
            max_residual = std::max(max_residual, r);
        }
        if (max_residual > 1e-8)
            throw ConsistencyError(kModule, "eigenpair residual " + std::to_string(max_residual) + " exceeds 1e-8 ||A||");
    }
    SpectrumSummary out = summarize_spectrum(std::vector<double>(values.data(), values.data() + n));
    out.max_residual = max_residual;
    return out;
}

double spectral_cdf(const SpectrumSummary& s, double alpha) {
    if (s.eigenvalues.empty()) return 0.0;
    const auto count = std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double l) { return l <= alpha; });
    return double(count) / double(s.eigenvalues.size());
}

double spectral_fraction(const SpectrumSummary& s, double lo, double hi) {
    if (s.eigenvalues.empty()) return 0.0;
    const auto count =
        std::count_if(s.eigenvalues.begin(), s.eigenvalues.end(), [&](double l) { return l >= lo && l <= hi; });
    return double(count) / double(s.eigenvalues.size());
}

Histogram histogram(const SpectrumSummary& s, std::size_t bins) {
    if (bins == 0) throw DomainError(kModule, "histogram needs at least one bin");
    Histogram h;
    h.counts.assign(bins, 0);
    const double lo = s.lambda_min, hi = s.rho;
    const double width = (hi - lo) / double(bins);
    h.edges.resize(bins + 1);
    for (std::size_t b = 0; b <= bins; ++b) h.edges[b] = b == bins ? hi : lo + width * double(b);
    for (double l : s.eigenvalues) {
        std::size_t b = 0;
        if (width > 0.0) {
            const double pos = std::floor((l - lo) / width);
            b = pos <= 0.0 ? 0 : std::min(bins - 1, static_cast<std::size_t>(pos));
        }
        ++h.counts[b];
    }
    return h;
}

} // namespace moment_bounds
