#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhflow/error.hpp"
#include "qhflow/weights.hpp"

#include <cmath>
#include <map>
#include <numbers>
#include <set>

using namespace qhflow;

namespace {

Lambda tau_pair() {
    return Lambda({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, NumberBasis{{"tau"}, {std::numbers::sqrt2}});
}

// brute force over a box of multi-indices
std::map<std::vector<Rational>, std::set<MultiIndex>> brute_rho(const Lambda& l, double cap, int box) {
    std::map<std::vector<Rational>, std::set<MultiIndex>> out;
    MultiIndex k(l.n(), 0);
    while (true) {
        auto d = weighted_degree(l, k);
        if (d.value() <= cap + 1e-12) out[d.coords()].insert(k);
        int i = 0;
        while (i < l.n() && ++k[i] > box) k[i++] = 0;
        if (i == l.n()) break;
    }
    return out;
}

}  // namespace

TEST_CASE("weighted degree of a multi-index") {
    CHECK(weighted_degree(Lambda::integers({1, 1}), {0, 0}).is_zero());
    CHECK(weighted_degree(Lambda::integers({1, 2}), {1, 2}) == Lambda::integers({1, 2}).constant(Rational(5)));
    auto d = weighted_degree(tau_pair(), {2, 3});
    CHECK(d.coords() == std::vector<Rational>{2, 3});
    CHECK(d.value() == doctest::Approx(2 + 3 * std::numbers::sqrt2));
    CHECK(d.str() == "2+3tau");
}

TEST_CASE("lambda validation") {
    CHECK_THROWS_AS(Lambda::integers({2, 1}), DomainError);
    CHECK_THROWS_AS(Lambda::rational({Rational(1), Rational(-1, 2)}), DomainError);
    CHECK_THROWS_AS(Lambda::rational({}), DomainError);
    Lambda l = Lambda::rational({Rational(1), Rational(3, 2)});
    CHECK(l.max() == 1.5);
    CHECK(l.min() == 1.0);
    CHECK(l.is_rational());
    CHECK_FALSE(l.all_integer());
    CHECK(l.constant(0.25) == l.constant(Rational(1, 4)));
}

TEST_CASE("rational comparisons against integer literals terminate") {
    Rational q(3, 2);
    CHECK(q > 1);
    CHECK(q < 2);
    CHECK_FALSE(q == 1);
    CHECK(Rational(2) == 2);
    CHECK(1 < q);
}

TEST_CASE("rho sequence matches brute force") {
    SUBCASE("(1,2) cap 4") {
        Lambda l = Lambda::integers({1, 2});
        auto seq = enumerate_rho(l, l.constant(Rational(4)));
        REQUIRE(seq.entries.size() == 5);
        for (int v = 0; v <= 4; ++v) {
            CHECK(seq.entries[v].rho == l.constant(Rational(v)));
            CHECK(static_cast<int>(seq.entries[v].indices.size()) == v / 2 + 1);
            CHECK(seq.find(l.constant(Rational(v))) == v);
        }
        CHECK(seq.find(l.constant(Rational(7))) == -1);
    }
    SUBCASE("(1,1) cap 0") {
        Lambda l = Lambda::integers({1, 1});
        auto seq = enumerate_rho(l, l.zero());
        REQUIRE(seq.entries.size() == 1);
        CHECK(seq.entries[0].indices == std::vector<MultiIndex>{{0, 0}});
    }
    SUBCASE("irrational pair cap 2 against exact-coordinate oracle") {
        Lambda l = tau_pair();
        auto seq = enumerate_rho(l, l.constant(Rational(2)));
        auto oracle = brute_rho(l, 2.0, 3);
        REQUIRE(seq.entries.size() == oracle.size());
        for (const auto& e : seq.entries) {
            REQUIRE(oracle.count(e.rho.coords()) == 1);
            std::set<MultiIndex> got(e.indices.begin(), e.indices.end());
            CHECK(got == oracle[e.rho.coords()]);
            // independent basis: one multi-index per value
            CHECK(e.indices.size() == 1);
        }
        for (std::size_t i = 1; i < seq.entries.size(); ++i) CHECK(seq.entries[i - 1].rho < seq.entries[i].rho);
    }
    SUBCASE("(1,3/2) cap 6 against brute force") {
        Lambda l = Lambda::rational({Rational(1), Rational(3, 2)});
        auto seq = enumerate_rho(l, l.constant(Rational(6)));
        auto oracle = brute_rho(l, 6.0, 7);
        REQUIRE(seq.entries.size() == oracle.size());
        for (const auto& e : seq.entries) {
            std::set<MultiIndex> got(e.indices.begin(), e.indices.end());
            CHECK(got == oracle[e.rho.coords()]);
        }
    }
}

TEST_CASE("count below and its polynomial bound") {
    auto c = count_below(Lambda::integers({1, 1}), 2);
    CHECK(c.count == 6);
    CHECK(count_below(Lambda::integers({1, 2}), 1).count == 2);
    auto c3 = count_below(Lambda::integers({1, 1}), 3);
    CHECK(c3.count == 10);
    CHECK(c3.bound >= 10);
    for (int j = 0; j <= 6; ++j) {
        auto cj = count_below(Lambda::rational({Rational(1), Rational(3, 2)}), j);
        CHECK(BigInt(cj.count) <= cj.bound);
    }
}

TEST_CASE("Z-dependence") {
    auto d = is_z_dependent(Lambda::integers({1, 2}));
    REQUIRE(d.dependent);
    CHECK(d.gamma == Lambda::integers({1, 2}).constant(Rational(2)));
    auto e = is_z_dependent(Lambda::integers({1, 1}));
    REQUIRE(e.dependent);
    CHECK(e.gamma == Lambda::integers({1, 1}).constant(Rational(1)));
    CHECK_FALSE(is_z_dependent(tau_pair()).dependent);
    CHECK_FALSE(is_z_dependent(Lambda::integers({1})).dependent);

    // relation must hold exactly for a three-weight case
    Lambda l = Lambda::rational({Rational(1), Rational(2, 3), Rational(5, 7)});
    auto r = is_z_dependent(l);
    REQUIRE(r.dependent);
    WeightedDegree lhs = l.zero(), rhs = l.zero();
    for (int k = 0; k < l.n(); ++k) {
        lhs = lhs + l.entry(k) * r.alpha[k];
        rhs = rhs + l.entry(k) * r.beta[k];
        CHECK((r.alpha[k] == 0 || r.beta[k] == 0));
    }
    CHECK(lhs == rhs);
    CHECK(lhs == r.gamma);
    CHECK_FALSE(r.gamma.is_zero());
}

TEST_CASE("root test") {
    Lambda l = Lambda::integers({1, 1});
    auto seq = enumerate_rho(l, l.constant(Rational(40)));
    std::vector<std::pair<WeightedDegree, std::complex<double>>> half, dbl, one;
    for (const auto& e : seq.entries) {
        if (e.rho.is_zero()) continue;
        half.emplace_back(e.rho, std::pow(0.5, e.rho.value()));
        dbl.emplace_back(e.rho, std::pow(2.0, e.rho.value()));
        one.emplace_back(e.rho, 1.0);
    }
    auto h = root_test(half);
    CHECK(h.kind == Convergence::Converges);
    CHECK(h.r_hat == doctest::Approx(0.5));
    CHECK(root_test(dbl).kind == Convergence::Diverges);
    auto o = root_test(one);
    CHECK(o.kind == Convergence::Inconclusive);
    CHECK(o.r_hat == doctest::Approx(1.0));
}
