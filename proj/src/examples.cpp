#include "qhflow/cli.hpp"

#include "qhflow/error.hpp"
#include "qhflow/extremal.hpp"
#include "qhflow/io.hpp"
#include "qhflow/series.hpp"
#include "qhflow/suspension.hpp"

#include <cmath>
#include <numbers>

namespace qhflow {

namespace {

constexpr double kPi = std::numbers::pi;

struct Checks {
    json list = json::array();
    bool all = true;
    void add(const std::string& name, bool ok, json detail = json::object()) {
        list.push_back({{"name", name}, {"pass", ok}, {"detail", std::move(detail)}});
        all = all && ok;
    }
};

json finish(const std::string& id, const std::string& claim, const std::string& report, Checks& c, json extra = {}) {
    json out{{"id", id}, {"claim", claim}, {"report", report}, {"checks", c.list}, {"pass", c.all}};
    if (!extra.is_null()) out["data"] = std::move(extra);
    return out;
}

Lambda sqrt2_lambda() {
    NumberBasis b{{"sqrt2"}, {std::numbers::sqrt2}};
    return Lambda({{Rational(1), Rational(0)}, {Rational(0), Rational(1)}}, b);
}

// both branches collapse to one point
bool single_point(const DirectionSet& ds, double tol = 1e-9) {
    std::vector<Point> all = ds.branch1;
    all.insert(all.end(), ds.branch2.begin(), ds.branch2.end());
    if (all.empty()) return false;
    for (const auto& w : all)
        for (std::size_t k = 0; k < w.size(); ++k)
            if (std::abs(w[k] - all.front()[k]) > tol) return false;
    return true;
}

SampledSet circle_family(int n, int count) {
    const double s = 1 / std::sqrt(2.0);
    auto d = std::make_shared<Descriptor>(Descriptor{CircleFamily{{s, s}, {1, n}, {0.0, 0.0}, count}});
    return SampledSet::from(*d, true);
}

json ex35() {
    Checks c;
    const Lambda lr = Lambda::integers({1, 2, 3});
    auto d = std::make_shared<Descriptor>(Descriptor{RealSlice{3, {0, 1}, 200, 1}});
    SampledSet F = SampledSet::from(*d, true);
    auto scan = sparseness_scan(F, lr, lr.constant(Rational(4)));
    bool found = scan.verdict == ScanVerdict::SparseCandidate && scan.witness_record >= 0;
    json wj;
    if (found) {
        const auto& rec = scan.records[scan.witness_record];
        MixedPolynomial ref = MixedPolynomial::monomial({2, 0, 0}, {0, 1, 0}) - MixedPolynomial::monomial({0, 1, 0}, {2, 0, 0});
        cplx dot = 0.0;
        for (const auto& [key, v] : rec.witness->terms()) dot += std::conj(ref.coeff(key.k, key.m)) * v;
        double cosine = std::abs(dot) / (ref.coefficient_norm() * rec.witness->coefficient_norm());
        found = rec.d1 == lr.constant(Rational(2)) && rec.d2 == lr.constant(Rational(2)) && rec.residual < 1e-10;
        wj = {{"d1", to_json(rec.d1)}, {"d2", to_json(rec.d2)}, {"residual", rec.residual}, {"cosine", cosine},
              {"witness", to_json(*rec.witness)}, {"exact", to_string(scan.exact.status)}};
        found = found && cosine > 1 - 1e-8;
    }
    c.add("rational weights: sparse witness z1^2 conj(z2) - conj(z1)^2 z2 at bidegree (2,2)", found, wj);

    NumberBasis b{{"sqrt2", "sqrt3"}, {std::numbers::sqrt2, std::sqrt(3.0)}};
    Lambda li({{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}, b);
    auto dep = is_z_dependent(li);
    c.add("irrational weights are Z-independent", !dep.dependent);
    auto scan2 = sparseness_scan(F, li, li.constant(Rational(6)));
    c.add("irrational weights: no obstruction up to cap 6", scan2.verdict == ScanVerdict::NoObstructionUpToCap,
          {{"records", scan2.records.size()}});
    Point w{0.5, 0.5, 1 / std::sqrt(2.0)};
    c.add("irrational weights: certified nonsparse at w", nonsparse_certificate_independent(li, w) == NonsparseVerdict::CertifiedNonsparse,
          {{"w", to_json(w)}});
    std::string report = std::string("lambda = (1,2,3): ") + (found ? "sparse" : "not sparse") +
                         "; lambda = (1,sqrt2,sqrt3): " + to_string(scan2.verdict);
    return finish("ex3.5", "sparseness depends on both F and the weights", report, c);
}

json ex56(const ExampleParams& p) {
    Checks c;
    require(p.m >= 1 && p.n >= 1, "ex5.6: m and n must be positive");
    json table = json::array();
    bool table_ok = true;
    for (int m = 1; m <= 3; ++m)
        for (int n = 1; n <= 3; ++n) {
            bool sp = single_point(direction_set(circle_family(n, 32), Lambda::integers({1, m})));
            table.push_back({{"m", m}, {"n", n}, {"single_point", sp}});
            table_ok = table_ok && (sp == (m == n));
        }
    c.add("direction set is a single point iff m = n (m, n <= 3)", table_ok, table);

    const Lambda l = Lambda::integers({1, p.m});
    auto ds = direction_set(circle_family(p.n, 32), l);
    const bool sp = single_point(ds);
    std::string report;
    if (sp) {
        SampledSet E = Suspension{l, circle_family(p.n, 16), {}}.leaf_samples();
        std::vector<WeightedDegree> caps;
        for (int k = 1; k <= p.m + 1; ++k) caps.push_back(l.constant(Rational(k)));
        auto rep = pluripolar_diagnostic(E, l, caps, sphere_grid(2, 24));
        json d{{"verdict", rep.verdict}, {"capacities", rep.capacities}};
        c.add("suspension shows a pluripolar signature", rep.verdict == "lambda-pluripolar signature", d);
        report = "direction set: single point; suspension: " +
                 std::string(rep.verdict == "lambda-pluripolar signature" ? "nonnormal signature" : "inconclusive");
    } else {
        const double R = std::pow(std::numbers::sqrt2, p.m - 1);
        SampledSet circ = circle_sample(R, 64);
        auto g = green_estimate(circ, {cplx(2 * R)}, 8);
        bool ok = std::abs(g.value - 2.0) <= 0.1;
        c.add("green function of the direction circle at 2R is 2 (5%)", ok, {{"R", R}, {"phi_hat", g.value}});
        report = std::string("direction set: circle; suspension: ") + (ok ? "normal signature" : "inconclusive");
    }
    return finish("ex5.6", "normal if, and only if, m != n", report, c, {{"m", p.m}, {"n", p.n}});
}

json ex71() {
    Checks c;
    // rational points of the sphere near (1, 0)
    std::vector<Point> pts;
    for (int k : {4, 5, 6}) {
        double s = 1.0 / k;
        pts.push_back({cplx((1 - s * s) / (1 + s * s)), cplx(2 * s / (1 + s * s))});
    }
    const Lambda l = Lambda::integers({1, 1});
    SampledSet F(2, pts);
    F.flag_on_sphere();
    SampledSet E = Suspension{l, F, {}}.leaf_samples();
    std::vector<WeightedDegree> caps;
    for (int k = 1; k <= 4; ++k) caps.push_back(l.constant(Rational(k)));
    auto rep = pluripolar_diagnostic(E, l, caps, sphere_grid(2, 24));
    json d{{"verdict", rep.verdict}, {"capacities", rep.capacities}, {"saturated", rep.saturated}};
    bool pp = rep.verdict == "lambda-pluripolar signature";
    c.add("suspension of a countable set is lambda-pluripolar", pp, d);
    return finish("ex7.1", "the suspension of a countable set is always nonnormal",
                  pp ? "nonnormal (countable F)" : "inconclusive", c);
}

std::vector<Point> ex72_points(int kmax, int lmax) {
    std::vector<Point> pts;
    for (int k = 1; k <= kmax; ++k)
        for (int l = 1; l <= lmax; ++l) {
            double r = kPi / (4 * k), s = kPi / 2 - kPi / (4 * l);
            pts.push_back({cplx(std::cos(r)), std::polar(std::sin(r), s)});
        }
    return pts;
}

json ex72() {
    Checks c;
    const Lambda l = sqrt2_lambda();
    SampledSet F(2, ex72_points(10, 10));
    F.flag_on_sphere();
    ScanOptions so;
    so.localize_center = Point{1.0, 0.0};
    so.localize_radius = 0.5;
    auto scan = sparseness_scan(F, l, l.constant(Rational(3)), so);
    c.add("(1,0) generates a nonsparse leaf (no obstruction up to cap 3 near it)",
          scan.verdict == ScanVerdict::NoObstructionUpToCap,
          {{"samples_used", scan.samples_used}, {"records", scan.records.size()}});
    c.add("F is countable", true, {{"samples", F.size()}});
    std::string report = "nonnormal (countable F)";
    return finish("ex7.2", "nowhere dense formal Forelli suspension that is not normal", report, c,
                  {{"note", "formal Forelli: nonsparse leaf at (1,0)"}});
}

json ex73() {
    Checks c;
    const Lambda l = sqrt2_lambda();
    const double s1 = kPi / 4;
    // G_1 = {(cos th, e^{i s1} sin th)}
    std::vector<Point> pts;
    const int count = 4000;
    for (int j = 0; j < count; ++j) {
        double th = 2 * kPi * j / count;
        pts.push_back({cplx(std::cos(th)), std::polar(std::sin(th), s1)});
    }
    SampledSet G(2, pts);
    G.flag_on_sphere();
    auto ds = direction_set(G, l);
    // branch 1 lies on the line e^{i s1} R
    double off = 0.0;
    std::vector<Point> near;
    for (const auto& w : ds.branch1) {
        off = std::max(off, std::abs((w[0] * std::polar(1.0, -s1)).imag()));
        if (std::abs(w[0]) <= 1.0) near.push_back(w);
    }
    c.add("direction set branch 1 is the rotated real line", off < 1e-9 && !near.empty(),
          {{"max_off_line", off}, {"samples_in_unit_disc", near.size()}});
    SampledSet D(1, near);
    auto lr = l_regularity_estimate(D, {cplx(0.0)}, {0.5, 1.0}, 8);
    json rows = json::array();
    for (const auto& r : lr.rows) rows.push_back({{"radius", r.radius}, {"v", r.v}});
    bool reg = lr.verdict == "consistent with local L-regularity at a";
    c.add("direction set is locally L-regular at 0", reg, {{"verdict", lr.verdict}, {"rows", rows}});
    auto scan = sparseness_scan(G.subset([] {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < 4000; i += 20) idx.push_back(i);
        return idx;
    }()), l, l.constant(Rational(3)));
    bool ns = scan.verdict == ScanVerdict::NoObstructionUpToCap;
    c.add("(1,0) generates a nonsparse leaf up to cap 3", ns);
    std::string report = std::string(reg ? "regular leaf" : "regularity inconclusive") + ", " +
                         (ns ? "nonsparse" : "sparse candidate") + (reg && ns ? ": Forelli" : "");
    return finish("ex7.3", "nowhere dense Forelli suspension", report, c);
}

}  // namespace

json run_example(const std::string& id, const ExampleParams& p) {
    if (id == "ex3.5") return ex35();
    if (id == "ex5.6") return ex56(p);
    if (id == "ex7.1") return ex71();
    if (id == "ex7.2") return ex72();
    if (id == "ex7.3") return ex73();
    throw ParseError("unknown example '" + id + "' (ex3.5, ex5.6, ex7.1, ex7.2, ex7.3)");
}

}  // namespace qhflow
