#include "doctest.h"

#include "corpus.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/spectrum.hpp"

#include <cmath>
#include <numbers>

using namespace moment_bounds;

TEST_CASE("known spectra") {
    const auto k3 = compute_spectrum(generate(GraphKind::complete, 3));
    REQUIRE(k3.eigenvalues.size() == 3);
    CHECK(k3.eigenvalues[0] == doctest::Approx(2));
    CHECK(k3.eigenvalues[1] == doctest::Approx(-1));
    CHECK(k3.eigenvalues[2] == doctest::Approx(-1));
    CHECK(k3.rho == doctest::Approx(2));
    CHECK(k3.lambda_min == doctest::Approx(-1));

    for (std::size_t n : {5, 8, 11}) {
        const auto r = compute_spectrum(generate(GraphKind::ring, n));
        std::vector<double> expected;
        for (std::size_t i = 0; i < n; ++i) expected.push_back(2 * std::cos(2 * std::numbers::pi * i / n));
        std::sort(expected.rbegin(), expected.rend());
        for (std::size_t i = 0; i < n; ++i) CHECK(r.eigenvalues[i] == doctest::Approx(expected[i]).scale(1));
    }

    const auto s5 = compute_spectrum(generate(GraphKind::star, 5));
    const std::vector<double> star{2, 0, 0, 0, -2};
    for (std::size_t i = 0; i < 5; ++i) CHECK(s5.eigenvalues[i] == doctest::Approx(star[i]).scale(1));
}

TEST_CASE("spectrum invariants") {
    for (const auto& [name, g] : mbtest::full_corpus()) {
        CAPTURE(name);
        const auto s = compute_spectrum(g);
        double sum = 0;
        for (double v : s.eigenvalues) sum += v;
        const double norm = std::max(1.0, s.rho);
        CHECK(std::abs(sum) <= 1e-8 * g.node_count() * norm);
        CHECK(std::is_sorted(s.eigenvalues.rbegin(), s.eigenvalues.rend()));
        CHECK(s.rho <= g.max_degree() + 1e-9);
        CHECK(s.rho >= 2.0 * g.edge_count() / g.node_count() - 1e-9);
        CHECK(s.max_residual <= 1e-8);
        CHECK(s.moments.source() == MomentSource::spectrum);
    }
}

TEST_CASE("node cap") {
    CHECK_THROWS_AS(compute_spectrum(generate(GraphKind::ring, 50), {.cap = 40}), DomainError);
}

TEST_CASE("cdf") {
    const auto ex2 = summarize_spectrum({-2, -1, -1, 0, 0, 0, 1, 1, 2});
    CHECK(spectral_cdf(ex2, 0) == doctest::Approx(6.0 / 9.0));
    CHECK(spectral_cdf(ex2, -2.5) == 0);
    CHECK(spectral_cdf(ex2, 2) == 1);
    CHECK(spectral_cdf(ex2, 7) == 1);
    const auto k3 = summarize_spectrum({2, -1, -1});
    CHECK(spectral_cdf(k3, -1) == doctest::Approx(2.0 / 3.0));
    CHECK(spectral_fraction(ex2, -1, 1) == doctest::Approx(7.0 / 9.0));
    CHECK(spectral_fraction(ex2, 0.5, 0.7) == 0);

    double prev = 0;
    for (double a = -3; a <= 3; a += 0.01) {
        const double f = spectral_cdf(ex2, a);
        CHECK(f >= prev);
        prev = f;
    }
}

TEST_CASE("histogram") {
    const auto k3 = summarize_spectrum({2, -1, -1});
    const auto h = histogram(k3, 2);
    CHECK(h.counts == std::vector<std::size_t>{2, 1});
    CHECK(h.edges.front() == -1);
    CHECK(h.edges.back() == 2);

    const auto g = compute_spectrum(generate(GraphKind::erdos_renyi, 40, {0.2, 2}));
    CHECK(histogram(g, 1).counts == std::vector<std::size_t>{40});
    std::size_t total = 0;
    for (auto c : histogram(g, 7).counts) total += c;
    CHECK(total == 40);

    const auto r8 = compute_spectrum(generate(GraphKind::ring, 8));
    const auto h4 = histogram(r8, 4).counts;
    CHECK(h4.size() == 4);
    CHECK(h4[0] + h4[1] + h4[2] + h4[3] == 8);
    // {2, sqrt2 x2, 0 x2, -sqrt2 x2, -2}: an odd bin count keeps values off the edges
    CHECK(histogram(r8, 5).counts == std::vector<std::size_t>{3, 0, 2, 0, 3});
    CHECK_THROWS(histogram(r8, 0));
}
