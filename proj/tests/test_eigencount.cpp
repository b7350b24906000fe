#include "doctest.h"

#include "moment_bounds/census.hpp"
#include "moment_bounds/chebyshev.hpp"
#include "moment_bounds/eigencount.hpp"
#include "moment_bounds/error.hpp"
#include "moment_bounds/spectrum.hpp"

#include <cmath>
#include <random>

using namespace moment_bounds;

namespace {

const MomentSequence kExample2(9, {1, 0, 4.0 / 3.0, 0, 4, 0}, MomentSource::external);
const Interval kOmega{-3, 3};

// Discretized primal solved with scipy HiGHS on 10^4 grid points.
struct Frozen {
    double lo, hi;
    int k;
    double value;
};
constexpr Frozen kScipy[] = {
    {-3, -2, 2, 0.2499999905059137},  {-3, -2, 3, 0.19166666020492873}, {-3, -2, 4, 0.13888887440764472},
    {-3, -2, 5, 0.12765955120535347}, {-3, -1, 5, 0.5052063776927916},  {-3, 0, 5, 0.7777777731760281},
    {-3, 1, 5, 0.9786645567615992},   {-3, -1.5, 5, 0.2892078854664099}, {-3, 0.5, 5, 0.8739460022325227},
};

} // namespace

TEST_CASE("chebyshev helpers") {
    const std::vector<double> t1{0, 1}, t2{0, 0, 1};
    const auto prod = chebyshev::multiply(t1, t2);  // T1 T2 = (T3 + T1) / 2
    REQUIRE(prod.size() == 4);
    CHECK(prod[1] == doctest::Approx(0.5));
    CHECK(prod[3] == doctest::Approx(0.5));
    CHECK(chebyshev::evaluate(t2, 0.3) == doctest::Approx(2 * 0.09 - 1));

    const auto table = chebyshev::monomial_table(3);
    CHECK(table[3] == std::vector<double>{0, -3, 0, 4});

    // p(x) = T2((x - 1) / 2) = ((x - 1)^2) / 2 - 1
    const auto mono = chebyshev::to_monomial(t2, 1, 2);
    CHECK(mono[0] == doctest::Approx(-0.5));
    CHECK(mono[1] == doctest::Approx(-1));
    CHECK(mono[2] == doctest::Approx(0.5));

    const auto cm = chebyshev::moments(kExample2.values(), 0, 3, 4);
    CHECK(cm[0] == doctest::Approx(1));
    CHECK(cm[2] == doctest::Approx(2 * (4.0 / 3.0) / 9 - 1));
}

TEST_CASE("whole omega as target") {
    const auto r = eigencount_upper(kExample2, {kOmega, kOmega, 4});
    CHECK(r.z_d == doctest::Approx(1).epsilon(1e-7));
    CHECK(r.status == SdpStatus::optimal);
}

TEST_CASE("example measure against the scipy primal") {
    for (const auto& f : kScipy) {
        CAPTURE(f.hi);
        CAPTURE(f.k);
        const auto r = eigencount_upper(kExample2, {{f.lo, f.hi}, kOmega, f.k});
        CHECK(r.status == SdpStatus::optimal);
        CHECK(std::abs(r.z_d - f.value) <= 1e-6);
        CHECK(r.omega_margin >= -1e-8);
        CHECK(r.target_margin >= -1e-8);
        REQUIRE(r.y.size() == static_cast<std::size_t>(f.k + 1));
        double zd = 0;
        for (std::size_t i = 0; i < r.y.size(); ++i) zd += r.y[i] * kExample2[i];
        CHECK(zd == doctest::Approx(r.z_d).epsilon(1e-9));
    }
    const auto r = eigencount_upper(kExample2, {{-3, -2}, kOmega, 4});
    CHECK(r.z_d >= 1.0 / 9.0);
    CHECK(r.z_d <= 1.0);
}

TEST_CASE("certificate is a valid nonnegativity proof") {
    const auto r = eigencount_upper(kExample2, {{-1, 0.5}, kOmega, 5});
    REQUIRE(r.certificate.size() >= 2);
    for (const auto& g : r.certificate) CHECK(min_eig(g).value >= -1e-8 * std::max(1.0, g.max_abs()));
    auto p = [&](double x) {
        double v = 0, xp = 1;
        for (double c : r.y) v += c * xp, xp *= x;
        return v;
    };
    for (int i = 0; i <= 6000; ++i) {
        const double x = -3 + i * 1e-3;
        CHECK(p(x) >= -1e-7);
        if (x >= -1 && x <= 0.5) CHECK(p(x) >= 1 - 1e-7);
    }
}

TEST_CASE("complete graph query") {
    const auto ms = moments_from_census(node_census(generate(GraphKind::complete, 4)));
    const auto r = eigencount_upper(ms, {{2.5, 3.5}, {-1.5, 3.5}, 4});
    CHECK(r.z_d >= 0.25 - 1e-8);
    CHECK(r.z_d == doctest::Approx(0.25).epsilon(1e-5));
}

TEST_CASE("two moments give the one sided Chebyshev bound") {
    const MomentSequence ms(100, {1, 0, 1}, MomentSource::external);
    const auto r = eigencount_upper(ms, {{1.5, 3}, kOmega, 2});
    CHECK(r.z_d == doctest::Approx(1 / 3.25).epsilon(1e-6));
}

TEST_CASE("monotone in information and in the target") {
    double prev = 2;
    for (int k = 2; k <= 5; ++k) {
        const double z = eigencount_upper(kExample2, {{-3, -1.5}, kOmega, k}).z_d;
        CHECK(z <= prev + 1e-7);
        prev = z;
    }
    const double inner = eigencount_upper(kExample2, {{-0.5, 0.5}, kOmega, 5}).z_d;
    const double outer = eigencount_upper(kExample2, {{-1.2, 0.8}, kOmega, 5}).z_d;
    CHECK(inner <= outer + 1e-7);
}

TEST_CASE("target outside omega and clipping") {
    const auto miss = eigencount_upper(kExample2, {{-9, -4}, kOmega, 5});
    CHECK(miss.z_d == 0);
    const auto cover = eigencount_upper(kExample2, {{-9, 9}, kOmega, 5});
    CHECK(cover.z_d == 1);
    const auto clipped = eigencount_upper(kExample2, {{-9, -2}, kOmega, 5});
    CHECK(clipped.z_d == doctest::Approx(eigencount_upper(kExample2, {{-3, -2}, kOmega, 5}).z_d));
}

TEST_CASE("point target") {
    const auto r = eigencount_upper(kExample2, {{0, 0}, kOmega, 4});
    CHECK(r.z_d >= 3.0 / 9.0 - 1e-8);
    CHECK(r.z_d <= 1 + 1e-8);
}

TEST_CASE("query validation and infeasible moments") {
    CHECK_THROWS(IntervalQuery{{0, 1}, {1, 1}, 4}.validate());
    CHECK_THROWS(IntervalQuery{{1, 0}, kOmega, 4}.validate());
    CHECK_THROWS(IntervalQuery{{0, 1}, kOmega, 1}.validate());
    CHECK_THROWS(IntervalQuery{{0, 1}, kOmega, 6}.validate());
    CHECK_THROWS_AS(eigencount_upper(kExample2, {{0, 1}, kOmega, 6}), ValidationError);
    const MomentSequence bad(4, {1, 0, 1, 0, 0.5, 0}, MomentSource::external);
    CHECK_THROWS_AS(eigencount_upper(bad, {{0, 1}, kOmega, 4}), DomainError);
}

TEST_CASE("cdf sweep") {
    const auto alphas = parse_sweep("-5:0.25:3");
    REQUIRE(alphas.size() == 33);
    CHECK(alphas.back() == 3);
    const auto pts = cdf_bound_sweep(kExample2, alphas, kOmega, 5, {}, 3);
    REQUIRE(pts.size() == alphas.size());
    const auto exact = summarize_spectrum({-2, -1, -1, 0, 0, 0, 1, 1, 2});
    for (const auto& p : pts) {
        CAPTURE(p.alpha);
        REQUIRE(p.result);
        CHECK(p.result->z_d >= spectral_cdf(exact, p.alpha) - 1e-8);
        CHECK(p.result->z_d <= 1 + 1e-6);
        if (p.alpha < kOmega.lo) CHECK(p.result->z_d == 0);
        if (p.alpha >= kOmega.hi) CHECK(p.result->z_d == 1);
    }
    CHECK(spectral_cdf(exact, 0) == doctest::Approx(6.0 / 9.0));
    // ordered like the input regardless of threads
    const auto serial = cdf_bound_sweep(kExample2, alphas, kOmega, 5, {}, 1);
    for (std::size_t i = 0; i < pts.size(); ++i) CHECK(serial[i].result->z_d == pts[i].result->z_d);
}

TEST_CASE("sweep parsing") {
    CHECK(parse_sweep("0:0.5:1") == std::vector<double>{0, 0.5, 1});
    CHECK(parse_sweep("2:1:2") == std::vector<double>{2});
    CHECK_THROWS_AS(parse_sweep("0:0:1"), ParseError);
    CHECK_THROWS_AS(parse_sweep("1:1:0"), ParseError);
    CHECK_THROWS_AS(parse_sweep("a:b"), ParseError);
}

TEST_CASE("lp oracle") {
    const auto whole = primal_lp_oracle(kExample2, {kOmega, kOmega, 5}, 500);
    CHECK(whole.feasible);
    CHECK(whole.value == doctest::Approx(1).epsilon(1e-9));

    const auto lp = primal_lp_oracle(kExample2, {{-3, -2}, kOmega, 4}, 2000);
    CHECK(lp.feasible);
    CHECK(lp.grid_size >= 2000);
    CHECK(std::abs(lp.value - kScipy[2].value) <= 1e-4);
    CHECK(lp.value <= eigencount_upper(kExample2, {{-3, -2}, kOmega, 4}).z_d + 1e-7);

    const MomentSequence wide(10, {1, 0, 1}, MomentSource::external);
    CHECK_FALSE(primal_lp_oracle(wide, {{0, 0.5}, {-0.5, 0.5}, 2}, 200).feasible);
    CHECK_THROWS(primal_lp_oracle(kExample2, {{-3, -2}, kOmega, 4}, 50));
}

TEST_CASE("default omega") {
    const Interval g = default_omega(generate(GraphKind::star, 6));
    CHECK(g == Interval{-5, 5});
    const auto k4 = moments_from_census(node_census(generate(GraphKind::complete, 4)));
    const Interval m = default_omega(k4);
    CHECK(m.hi == doctest::Approx(std::pow(84.0, 0.25)));
    CHECK(m.lo == -m.hi);
    CHECK(m.hi >= 3);
}

TEST_CASE("bound dominates the exact fraction on small graphs") {
    std::mt19937_64 rng(5);
    for (int gi = 0; gi < 5; ++gi) {
        const Graph g = generate(GraphKind::erdos_renyi, 12 + 3 * gi, {0.3, 40 + static_cast<std::uint64_t>(gi)});
        const auto ms = moments_from_census(node_census(g));
        const auto sp = compute_spectrum(g);
        const Interval omega = default_omega(g);
        std::uniform_real_distribution<double> u(omega.lo, omega.hi);
        for (int q = 0; q < 4; ++q) {
            double a = u(rng), b = u(rng);
            if (a > b) std::swap(a, b);
            const auto r = eigencount_upper(ms, {{a, b}, omega, 5});
            CHECK(r.z_d >= spectral_fraction(sp, a, b) - 1e-8);
        }
    }
}
