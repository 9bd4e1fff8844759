#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhflow/error.hpp"
#include "qhflow/series.hpp"

#include <cmath>
#include <numbers>

using namespace qhflow;

namespace {

MixedPolynomial geometric(int N) {
    MixedPolynomial f(2);
    for (int m = 1; m <= N; ++m) f.add_holomorphic({m, 0}, 1.0);
    return f;
}

}  // namespace

TEST_CASE("formal series validation") {
    Lambda l = Lambda::integers({1, 2});
    auto S = FormalSeries::from_polynomial(MixedPolynomial::holomorphic({2, 0}) + MixedPolynomial::holomorphic({0, 1}), l);
    CHECK(S.blocks.size() == 1);
    CHECK(S.blocks[0].poly.size() == 2);
    S.validate();
    FormalSeries bad{l, {{MixedPolynomial::holomorphic({1, 0}), l.constant(Rational(2))}}, 64};
    CHECK_THROWS_AS(bad.validate(), DomainError);
    FormalSeries order{l, {{MixedPolynomial::holomorphic({0, 1}), l.constant(Rational(2))},
                           {MixedPolynomial::holomorphic({1, 0}), l.constant(Rational(1))}}, 64};
    CHECK_THROWS_AS(order.validate(), DomainError);
    CHECK(FormalSeries::from_polynomial(geometric(10), Lambda::integers({1, 1}), 4).truncation() == 4);
}

TEST_CASE("Dirichlet evaluation along a leaf") {
    Lambda l = Lambda::integers({1, 1});
    auto S = FormalSeries::from_polynomial(MixedPolynomial::holomorphic({1, 0}), l);
    auto r = dirichlet_eval(S, {1.0, 0.0}, 1.0);
    REQUIRE(r.terms.size() == 1);
    CHECK(std::abs(r.terms[0] - std::exp(-1.0)) < 1e-15);
    CHECK(r.verdict.kind == Convergence::Converges);
    CHECK_THROWS_AS(dirichlet_eval(S, {1.0, 0.0}, cplx(0.0, 1.0)), DomainError);
    CHECK_THROWS_AS(dirichlet_eval(S, {1.0, 0.0}, -0.5), DomainError);

    // partial sums reproduce f at the flowed point
    Lambda l12 = Lambda::integers({1, 2});
    MixedPolynomial f = MixedPolynomial::constant(2, 0.5) + MixedPolynomial::holomorphic({1, 0}, cplx(0, 2)) +
                        MixedPolynomial::holomorphic({0, 1}, -1.0) + MixedPolynomial::holomorphic({2, 1}, 3.0);
    auto T = FormalSeries::from_polynomial(f, l12);
    Point z{cplx(0.7, -0.1), cplx(0.2, 0.9)};
    cplx t(0.3, 1.7);
    auto d = dirichlet_eval(T, z, t);
    CHECK(std::abs(d.partial_sums.back() - f(flow_map(l12, z, t))) < 1e-12);
}

TEST_CASE("convergence region of a geometric series") {
    Lambda l = Lambda::integers({1, 1});
    auto S = FormalSeries::from_polynomial(geometric(40), l);
    std::vector<Point> grid;
    for (int j = 0; j <= 20; ++j) grid.push_back({cplx(0.1 * j), cplx(0.3)});
    auto R = convergence_region(S, grid);
    CHECK(R.kind == "convergence");
    CHECK(R.M == 40);
    for (std::size_t i = 0; i < grid.size(); ++i) {
        double a = std::abs(grid[i][0]);
        CHECK(R.values[i] == doctest::Approx(a).epsilon(1e-12));
        CHECK(R.inside[i] == (a < 1 - 1e-3));
    }
    auto too_short = FormalSeries::from_polynomial(geometric(3), l);
    CHECK_THROWS_AS(convergence_region(too_short, grid), DomainError);
}

TEST_CASE("z_lambda") {
    Point z{cplx(0.3, 0.4), cplx(-1.2, 0)};
    auto w = z_lambda(z, Lambda::integers({1, 1}));
    double r = norm(z);
    CHECK(std::abs(w[0] - z[0] / r) < 1e-15);
    CHECK(std::abs(w[1] - z[1] / r) < 1e-15);
    auto v = z_lambda(z, Lambda::integers({1, 2}));
    CHECK(std::abs(v[0] - z[0] / std::sqrt(r)) < 1e-15);
    CHECK(std::abs(v[1] - z[1] / r) < 1e-15);
    CHECK_THROWS_AS(z_lambda({0.0, 0.0}, Lambda::integers({1, 1})), DomainError);
}

TEST_CASE("capacity ball") {
    Lambda l = Lambda::integers({1, 1});
    auto grid = sphere_grid(2, 24);
    std::vector<WeightedDegree> caps{l.constant(Rational(1)), l.constant(Rational(2))};
    auto full = omega_from_capacity(sphere_grid(2, 60), l, caps, grid);
    REQUIRE(full.radius.size() == 2);
    for (double r : full.radius) CHECK(r == doctest::Approx(1.0).epsilon(0.05));

    auto single = omega_from_capacity(SampledSet(2, {{0.6, 0.8}}), l, caps, grid);
    // decays, or sits at the saturation floor at every cap
    bool all_sat = single.saturated[0] && single.saturated[1];
    CHECK(single.radius.back() <= single.radius.front());
    CHECK((single.radius.back() < single.radius.front() || all_sat));
    for (double r : single.radius) {
        CHECK(r > 0);
        CHECK(r <= 1);
    }
}

TEST_CASE("omega prime") {
    Lambda l = Lambda::integers({1, 1});
    auto F = sphere_grid(2, 40);
    std::vector<Point> grid{{0.3, 0.2}, {0.0, 0.5}, {5.0, 3.0}};
    auto R = omega_prime(F, l, grid, 2);
    CHECK(R.kind == "omega_prime");
    CHECK(R.inside[0]);
    CHECK(R.inside[1]);
    CHECK_FALSE(R.inside[2]);
    // equal weights: |z| * phi(z / |z|) on the suspension samples
    auto E = Suspension{l, F, {}}.leaf_samples();
    Point u{grid[0][0] / norm(grid[0]), grid[0][1] / norm(grid[0])};
    CHECK(R.values[0] == doctest::Approx(norm(grid[0]) * green_estimate(E, u, 2).value).epsilon(1e-12));
    std::vector<Point> bad{{0.0, 0.0}};
    CHECK_THROWS_AS(omega_prime(F, l, bad, 2), DomainError);
}

TEST_CASE("omega hat") {
    Lambda l = Lambda::integers({1, 1});
    auto base = ball_sample(2, 150);
    std::vector<Point> grid{{1.1, 0.0}, {0.9, 0.9}, base.points()[3], {0.0, 0.0}};
    auto cap = l.constant(Rational(2));
    auto alone = omega_hat(base, SampledSet(), l, grid, cap);
    auto same = omega_hat(base, SampledSet(2, {}), l, grid, cap);
    CHECK(alone.values == same.values);
    CHECK(alone.inside[2]);
    CHECK(alone.inside[3]);
    CHECK_FALSE(alone.inside[0]);

    auto extra = torus_sample({1.2, 1.2}, 8);
    auto more = omega_hat(base, extra, l, grid, cap);
    for (std::size_t i = 0; i < grid.size(); ++i) CHECK(more.values[i] <= alone.values[i] + 1e-9);
    CHECK(more.inside[0]);
}

TEST_CASE("divergent series from the built-in family") {
    auto fam = builtin_divergent_family(25, 32);
    auto d = build_divergent_series(fam.p_seq, fam.lambda, fam.a, fam.K);
    CHECK(d.verified);
    CHECK(d.max_rel_error < 1e-9);
    REQUIRE(!d.b.empty());
    CHECK(std::abs(d.b[0][0] - 1.0) < 1e-15);
    // q_m(b_1) = m^rho_m
    for (std::size_t m = 0; m < 6 && m < d.series.blocks.size(); ++m) {
        double rho = d.series.blocks[m].rho.value();
        double expect = std::pow(static_cast<double>(m + 1), rho);
        CHECK(std::abs(d.series.blocks[m](d.b[0])) == doctest::Approx(expect).epsilon(1e-9));
    }
    auto div = dirichlet_eval(d.series, d.b[0], 0.01);
    CHECK(div.verdict.kind == Convergence::Diverges);

    std::vector<HoloQHPolynomial> dead{{MixedPolynomial::holomorphic({0, 1}), fam.lambda.constant(Rational(1))}};
    CHECK_THROWS_AS(build_divergent_series(dead, fam.lambda, fam.a, {fam.K[0]}), DomainError);
}

TEST_CASE("exact leaf grid and coefficient bound") {
    Lambda l = Lambda::integers({1, 2});
    MixedPolynomial f = MixedPolynomial::holomorphic({1, 0}) + MixedPolynomial::holomorphic({0, 1}, 2.0) +
                        MixedPolynomial::holomorphic({1, 1}, -1.0);
    auto S = FormalSeries::from_polynomial(f, l);
    auto grid = exact_leaf_grid(S);
    Point z{cplx(0.5, 0.5), cplx(-0.3, 0.1)};
    auto b = coefficient_bound(S, z, grid);
    CHECK(b.block_abs.size() == S.blocks.size());
    CHECK(b.worst_ratio <= 1 + 1e-12);
    CHECK(b.leaf_sup >= std::abs(f(z)) - 1e-12);
    Lambda irr({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, NumberBasis{{"sqrt2"}, {std::numbers::sqrt2}});
    FormalSeries T{irr, {{MixedPolynomial::holomorphic({1, 0}), irr.constant(Rational(1))}}, 64};
    CHECK_THROWS(exact_leaf_grid(T));
}
