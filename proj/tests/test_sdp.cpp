#include "doctest.h"

#include "moment_bounds/error.hpp"
#include "moment_bounds/sdp.hpp"

#include <cmath>
#include <random>

using namespace moment_bounds;

namespace {

SdpBlock scalar_block(double constant, std::vector<double> coeffs) {
    SdpBlock b;
    b.constant = Matrix{{constant}};
    for (double c : coeffs) b.coefficients.push_back(Matrix{{c}});
    return b;
}

void check_margins(const SdpSolution& s, double tol) {
    for (double m : s.psd_margins) CHECK(m >= -tol);
}

} // namespace

TEST_CASE("scalar lmi") {
    SdpProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.blocks.push_back(scalar_block(1, {1}));
    const auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::optimal);
    CHECK(s.y[0] == doctest::Approx(1).epsilon(1e-6));
    CHECK(s.objective_value == doctest::Approx(1).epsilon(1e-6));
    check_margins(s, 1e-9);
}

TEST_CASE("separable diagonal lmi") {
    SdpProblem p;
    p.num_vars = 2;
    p.objective = {1, 1};
    SdpBlock b;
    b.constant = Matrix{{1, 0}, {0, 2}};
    b.coefficients = {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 0}, {0, 1}}};
    p.blocks.push_back(b);
    const auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::optimal);
    CHECK(s.objective_value == doctest::Approx(3).epsilon(1e-6));
    check_margins(s, 1e-9);
}

TEST_CASE("coupled 2x2 lmi") {
    SdpProblem p;
    p.num_vars = 1;
    p.objective = {1};
    SdpBlock b;
    b.constant = Matrix{{0, -1}, {-1, 0}};
    b.coefficients = {Matrix::identity(2)};
    p.blocks.push_back(b);
    const auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::optimal);
    CHECK(s.y[0] == doctest::Approx(1).epsilon(1e-6));
}

TEST_CASE("infeasible and unbounded problems") {
    SdpProblem inf;
    inf.num_vars = 1;
    inf.objective = {1};
    inf.blocks.push_back(scalar_block(1, {1}));   // y >= 1
    inf.blocks.push_back(scalar_block(0, {-1}));  // y <= 0
    CHECK(solve_sdp(inf).status == SdpStatus::infeasible);

    SdpProblem unb;
    unb.num_vars = 1;
    unb.objective = {-1};
    unb.blocks.push_back(scalar_block(1, {1}));
    CHECK(solve_sdp(unb).status == SdpStatus::unbounded);
}

TEST_CASE("box bounds") {
    SdpProblem p;
    p.num_vars = 2;
    p.objective = {1, -1};
    p.blocks.push_back(scalar_block(0, {1, 1}));  // y1 + y2 >= 0
    p.var_bounds = {VarBound{}, VarBound{std::nullopt, 4.0}};
    const auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::optimal);
    CHECK(s.objective_value == doctest::Approx(-8).epsilon(1e-6));
    CHECK(s.y[1] <= 4.0 + 1e-9);
}

TEST_CASE("lmi without interior is relaxed") {
    // y >= 1 and y <= 1
    SdpProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.blocks.push_back(scalar_block(1, {1}));
    p.blocks.push_back(scalar_block(-1, {-1}));
    const auto s = solve_sdp(p);
    CHECK(s.status == SdpStatus::optimal);
    CHECK(s.y[0] == doctest::Approx(1).epsilon(1e-6));
    check_margins(s, 1e-8);
}

TEST_CASE("randomized diagonal instances") {
    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 20; ++trial) {
        // minimize sum w_j y_j subject to y_j >= c_j, in one diagonal block
        const std::size_t m = 1 + trial % 5;
        SdpProblem p;
        p.num_vars = m;
        SdpBlock b;
        b.constant = Matrix(m, m);
        double expected = 0;
        for (std::size_t j = 0; j < m; ++j) {
            const double w = u(rng), c = u(rng) - 1.5;
            p.objective.push_back(w);
            b.constant(j, j) = c;
            Matrix e(m, m);
            e(j, j) = 1;
            b.coefficients.push_back(e);
            expected += w * c;
        }
        p.blocks.push_back(b);
        const auto s = solve_sdp(p);
        CHECK(s.status == SdpStatus::optimal);
        CHECK(std::abs(s.objective_value - expected) <= 1e-6 * std::max(1.0, std::abs(expected)));
        check_margins(s, 1e-9);
    }
}

TEST_CASE("determinism") {
    SdpProblem p;
    p.num_vars = 2;
    p.objective = {1, 2};
    SdpBlock b;
    b.constant = Matrix{{1, 0.5}, {0.5, 1}};
    b.coefficients = {Matrix{{1, 0}, {0, 0}}, Matrix{{0, 1}, {1, 1}}};
    p.blocks.push_back(b);
    const auto a = solve_sdp(p);
    const auto c = solve_sdp(p);
    CHECK(a.y == c.y);
    CHECK(a.iterations == c.iterations);
}

TEST_CASE("validation") {
    SdpProblem p;
    p.num_vars = 2;
    p.objective = {1};
    p.blocks.push_back(scalar_block(1, {1, 1}));
    CHECK_THROWS_AS(p.validate(), DomainError);
    p.objective = {1, 1};
    CHECK_NOTHROW(p.validate());
    p.blocks[0].coefficients[0] = Matrix{{1, 2}, {0, 1}};
    CHECK_THROWS_AS(p.validate(), DomainError);
    CHECK(to_string(SdpStatus::max_iter) == "max_iter");
}

TEST_CASE("iteration budget surfaces as max_iter") {
    SdpProblem p;
    p.num_vars = 1;
    p.objective = {1};
    p.blocks.push_back(scalar_block(1, {1}));
    const auto s = solve_sdp(p, {1e-9, 2});
    CHECK(s.status == SdpStatus::max_iter);
    CHECK(s.y.size() == 1);
}
