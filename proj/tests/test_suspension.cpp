#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qhflow/error.hpp"
#include "qhflow/suspension.hpp"

#include <cmath>
#include <numbers>

using namespace qhflow;

namespace {

SampledSet real_circle(int count) {
    std::vector<Point> pts;
    for (int j = 0; j < count; ++j) {
        double th = 2 * std::numbers::pi * (j + 0.5) / count;
        pts.push_back({cplx(std::cos(th)), cplx(std::sin(th))});
    }
    return SampledSet(2, pts).flag_on_sphere();
}

}  // namespace

TEST_CASE("leaf samples follow the flow") {
    Lambda l = Lambda::integers({1, 2});
    SampledSet F(2, {{1.0, 0.0}});
    TGrid g{{0.0, 1.0}, 4, 2 * std::numbers::pi};
    auto pts = leaf_points(l, {1.0, 1.0}, g);
    REQUIRE(pts.size() == 8);
    Suspension s{l, F, g};
    CHECK(s.leaf_samples().size() == 8);
    bool hit = false;
    for (const auto& p : pts) hit = hit || (std::abs(p[0] - std::exp(-1.0)) < 1e-15 && std::abs(p[1] - std::exp(-2.0)) < 1e-15);
    CHECK(hit);
}

TEST_CASE("direction set") {
    Lambda l = Lambda::integers({1, 2});
    auto ds = direction_set(SampledSet(2, {{1.0, 0.0}}), l);
    REQUIRE(ds.branch1.size() == 1);
    CHECK(std::abs(ds.branch1[0][0]) == 0.0);
    CHECK(ds.branch2.empty());

    auto none = direction_set(SampledSet(2, {{0.0, 1.0}}), l);
    CHECK(none.branch1.empty());
    CHECK(none.branch2.empty());

    // z1 = -1 lies on both cut half planes' common boundary only for Ray
    SampledSet neg(2, {{-1.0, 1.0}});
    auto hp = direction_set(neg, l, CutConvention::HalfPlane);
    CHECK(hp.branch1.empty());
    CHECK(hp.branch2.size() == 1);
    auto ray = direction_set(neg, l, CutConvention::Ray);
    CHECK(ray.branch1.empty());
    CHECK(ray.branch2.size() == 1);
    // (-1)^2 on branch 2 is exp(2 * i pi) = 1
    CHECK(std::abs(ray.branch2[0][0] - cplx(1.0)) < 1e-14);

    // direction set of a leaf point equals that of its base point
    Point z{cplx(0.6, 0.3), cplx(-0.2, 0.7)};
    Point zt = flow_map(l, z, cplx(0.4, 0.3));
    auto a = direction_set(SampledSet(2, {z}), l), b = direction_set(SampledSet(2, {zt}), l);
    CHECK(std::abs(a.branch1[0][0] - b.branch1[0][0]) < 1e-13);

    CHECK_THROWS_AS(direction_set(SampledSet(1, {{1.0}}), Lambda::integers({1})), DomainError);
    CHECK(std::abs(branch_power(cplx(0, 1), 0.5, 1) - std::polar(1.0, std::numbers::pi / 4)) < 1e-15);
}

TEST_CASE("vanishing system") {
    Lambda l = Lambda::integers({1, 1});
    auto one = l.constant(Rational(1));
    auto full = vanishing_system(sphere_grid(2, 200), l, one, one);
    CHECK(full.basis.size() == 4);
    CHECK(full.nullspace.empty());
    CHECK(full.singular_values.back() > 1e-3);

    auto pt = vanishing_system(SampledSet(2, {{1.0, 0.0}}), l, one, one);
    CHECK(pt.nullspace.size() == pt.basis.size() - 1);
    for (const auto& v : pt.nullspace) CHECK(std::abs(pt.poly(v, 2)({1.0, 0.0})) < 1e-12);

    auto e = vanishing_system(sphere_grid(2, 50), l, l.constant(Rational(1, 2)), one);
    CHECK(e.empty_basis);
    CHECK_THROWS(vanishing_system(sphere_grid(2, 50), l, one, l.zero()));
}

TEST_CASE("sparse witness from a relation") {
    auto w11 = sparse_witness_from_relation(is_z_dependent(Lambda::integers({1, 1})));
    MixedPolynomial im11(2);
    im11.add({1, 0}, {0, 1}, cplx(0, -0.5));
    im11.add({0, 1}, {1, 0}, cplx(0, 0.5));
    CHECK(w11 == im11);
    Point p{cplx(0.3, 0.4), cplx(-1.2, 0.5)};
    CHECK(std::abs(w11(p) - cplx((p[0] * std::conj(p[1])).imag(), 0)) < 1e-15);

    Lambda l12 = Lambda::integers({1, 2});
    auto w12 = sparse_witness_from_relation(is_z_dependent(l12));
    CHECK(std::abs(w12(p) - cplx((p[0] * p[0] * std::conj(p[1])).imag(), 0)) < 1e-15);
    // vanishes on the suspension of a real set
    Suspension s{l12, real_circle(12), {}};
    const auto leaves = s.leaf_samples();
    for (const auto& x : leaves.points()) CHECK(std::abs(w12(x)) < 1e-12);

    CHECK_THROWS_AS(sparse_witness_from_relation(DependenceVerdict{}), DomainError);
}

TEST_CASE("sparseness scan") {
    Lambda l = Lambda::integers({1, 1});
    const auto circ = real_circle(40);
    auto rep = sparseness_scan(circ, l, l.constant(Rational(2)));
    CHECK(rep.verdict == ScanVerdict::SparseCandidate);
    REQUIRE(rep.witness_record >= 0);
    const auto& rec = rep.records[rep.witness_record];
    CHECK(rec.residual < 1e-8);
    for (const auto& x : circ.points()) CHECK(std::abs((*rec.witness)(x)) < 1e-8);

    auto rep2 = sparseness_scan(sphere_grid(2, 200), l, l.constant(Rational(2)));
    CHECK(rep2.verdict == ScanVerdict::NoObstructionUpToCap);
    CHECK(rep2.witness_record == -1);

    ScanOptions opt;
    opt.localize_center = Point{0.0, 1.0};
    opt.localize_radius = 0.1;
    auto loc = sparseness_scan(sphere_grid(2, 200), l, l.constant(Rational(1)), opt);
    CHECK(loc.samples_used < 200);
}

TEST_CASE("nonsparse certificate for independent weights") {
    Lambda li({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, NumberBasis{{"sqrt2"}, {std::numbers::sqrt2}});
    CHECK(nonsparse_certificate_independent(li, {1.0, 0.0}) == NonsparseVerdict::NotCertified);
    CHECK(nonsparse_certificate_independent(li, {0.6, 0.8}) == NonsparseVerdict::CertifiedNonsparse);
    CHECK_THROWS_AS(nonsparse_certificate_independent(Lambda::integers({1, 2}), {0.6, 0.8}), DomainError);
}

TEST_CASE("formal obstruction of a jet") {
    Lambda l = Lambda::integers({1, 2, 3});
    auto F = SampledSet::from(Descriptor{RealSlice{3, {0, 1}, 100, 3}}, true);
    MixedPolynomial holo = MixedPolynomial::holomorphic({1, 0, 0}) + MixedPolynomial::holomorphic({0, 2, 1}, 2.0);
    auto h = forelli_obstruction(holo, F, l);
    CHECK(h.formal_holomorphic_type);
    CHECK(h.blocks.empty());

    MixedPolynomial block = MixedPolynomial::monomial({2, 0, 0}, {0, 1, 0}) - MixedPolynomial::monomial({0, 1, 0}, {2, 0, 0});
    auto r = forelli_obstruction(holo + block, F, l);
    CHECK_FALSE(r.formal_holomorphic_type);
    REQUIRE(r.blocks.size() == 1);
    CHECK(r.blocks[0].vanishes_on_F);
    CHECK(r.blocks[0].mu == l.constant(Rational(2)));

    auto s = forelli_obstruction(MixedPolynomial::monomial({0, 0, 1}, {0, 0, 1}), F, l);
    REQUIRE(s.blocks.size() == 1);
    CHECK_FALSE(s.blocks[0].vanishes_on_F);
}
