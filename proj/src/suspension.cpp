#include "qhflow/suspension.hpp"

#include "qhflow/error.hpp"

#include <Eigen/SVD>

#include <algorithm>
#include <cmath>
#include <numbers>

namespace qhflow {

namespace {
constexpr double kPi = std::numbers::pi;
constexpr double kZeroTol = 1e-12;
}  // namespace

// ---------------------------------------------------------------- suspension

std::vector<Point> leaf_points(const Lambda& lambda, const Point& z, const TGrid& grid) {
    std::vector<Point> out;
    out.reserve(grid.re.size() * grid.im_count);
    for (double a : grid.re) {
        require(a >= 0, "leaf grid needs Re t >= 0");
        for (int j = 0; j < grid.im_count; ++j) out.push_back(flow_map(lambda, z, cplx(a, grid.im_period * j / grid.im_count)));
    }
    return out;
}

SampledSet Suspension::leaf_samples() const {
    require(F.n() == lambda.n(), "suspension: F and lambda dimensions differ");
    std::vector<Point> pts;
    for (const auto& z : F.points()) {
        auto leaf = leaf_points(lambda, z, grid);
        pts.insert(pts.end(), leaf.begin(), leaf.end());
    }
    return SampledSet(F.n(), std::move(pts));
}

// ---------------------------------------------------------------- direction set

cplx branch_power(cplx z1, double lambda_k, int branch) {
    double arg = std::arg(z1);
    if (branch == 2 && arg <= 0) arg += 2 * kPi;
    return std::exp(lambda_k * cplx(std::log(std::abs(z1)), arg));
}

DirectionSet direction_set(const SampledSet& F, const Lambda& lambda, CutConvention cut) {
    if (lambda.n() < 2) throw DomainError("direction set needs n >= 2");
    require(F.n() == lambda.n(), "direction_set: F and lambda dimensions differ");
    DirectionSet ds;
    const auto& pts = F.points();
    for (std::size_t i = 0; i < pts.size(); ++i) {
        cplx z1 = pts[i][0];
        if (std::abs(z1) <= kZeroTol) continue;
        bool off1, off2;
        if (cut == CutConvention::HalfPlane) {
            off1 = z1.real() > kZeroTol;
            off2 = z1.real() < -kZeroTol;
        } else {
            bool on_real = std::abs(z1.imag()) <= kZeroTol;
            off1 = !(on_real && z1.real() <= 0);
            off2 = !(on_real && z1.real() >= 0);
        }
        for (int b = 1; b <= 2; ++b) {
            if ((b == 1 && !off1) || (b == 2 && !off2)) continue;
            Point w(lambda.n() - 1);
            for (int k = 1; k < lambda.n(); ++k) w[k - 1] = pts[i][k] / branch_power(z1, lambda.approx(k), b);
            (b == 1 ? ds.branch1 : ds.branch2).push_back(std::move(w));
            (b == 1 ? ds.source1 : ds.source2).push_back(i);
        }
    }
    return ds;
}

// ---------------------------------------------------------------- vanishing systems

MixedPolynomial VanishingSystem::poly(const std::vector<cplx>& coeffs, int n) const {
    MixedPolynomial p(n);
    for (std::size_t j = 0; j < basis.size(); ++j) p.add(basis[j].k, basis[j].m, coeffs[j]);
    return p;
}

VanishingSystem vanishing_system(const SampledSet& F, const Lambda& lambda, const WeightedDegree& d1,
                                 const WeightedDegree& d2, double null_threshold) {
    require(!d2.is_zero(), "vanishing_system needs d2 != 0");
    require(F.n() == lambda.n(), "vanishing_system: F and lambda dimensions differ");
    VanishingSystem vs{d1, d2, {}, {}, {}, false};
    auto seq = enumerate_rho(lambda, std::max(d1, d2));
    int i1 = seq.find(d1), i2 = seq.find(d2);
    if (i1 < 0 || i2 < 0) {
        vs.empty_basis = true;
        return vs;
    }
    for (const auto& k : seq.entries[i1].indices)
        for (const auto& m : seq.entries[i2].indices) vs.basis.push_back({k, m});

    const auto& pts = F.points();
    const auto rows = static_cast<Eigen::Index>(pts.size());
    const auto cols = static_cast<Eigen::Index>(vs.basis.size());
    Eigen::MatrixXcd A(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c) A(r, c) = monomial_value(vs.basis[c].k, vs.basis[c].m, pts[r]);

    std::vector<double> sv(cols, 0.0);
    Eigen::MatrixXcd V;
    if (rows > 0) {
        Eigen::JacobiSVD<Eigen::MatrixXcd> svd(A, Eigen::ComputeFullV);
        const auto& s = svd.singularValues();
        for (Eigen::Index j = 0; j < s.size(); ++j) sv[j] = s(j);
        V = svd.matrixV();
    } else {
        V = Eigen::MatrixXcd::Identity(cols, cols);
    }
    vs.singular_values = sv;
    double smax = sv.empty() ? 0.0 : sv.front();
    for (Eigen::Index j = 0; j < cols; ++j) {
        if (sv[j] > null_threshold * smax && smax > 0) continue;
        std::vector<cplx> v(cols);
        for (Eigen::Index r = 0; r < cols; ++r) v[r] = V(r, j);
        vs.nullspace.push_back(std::move(v));
    }
    return vs;
}

namespace {

// unit norm, largest entry real positive, tiny entries dropped
std::vector<cplx> normalize_witness(std::vector<cplx> v) {
    double big = 0.0;
    for (const auto& c : v) big = std::max(big, std::abs(c));
    for (auto& c : v)
        if (std::abs(c) < 1e-13 * big) c = 0.0;
    std::size_t lead = 0;
    for (std::size_t j = 0; j < v.size(); ++j)
        if (std::abs(v[j]) >= big * (1 - 1e-9)) {
            lead = j;
            break;
        }
    cplx ph = std::abs(v[lead]) > 0 ? std::conj(v[lead]) / std::abs(v[lead]) : cplx(1.0);
    double s = 0.0;
    for (auto& c : v) {
        c *= ph;
        s += std::norm(c);
    }
    s = std::sqrt(s);
    for (auto& c : v) c /= s;
    v[lead] = std::abs(v[lead]);
    return v;
}

}  // namespace

ScanReport sparseness_scan(const SampledSet& F_in, const Lambda& lambda, const WeightedDegree& cap,
                           const ScanOptions& opt) {
    SampledSet F = F_in;
    if (opt.localize_center) F = F_in.within(*opt.localize_center, opt.localize_radius);
    if (F_in.descriptor()) F.set_descriptor(F_in.descriptor());

    ScanReport rep;
    rep.cap = cap;
    rep.samples_used = F.size();
    auto seq = enumerate_rho(lambda, cap);
    std::vector<std::pair<int, int>> pairs;
    for (std::size_t i = 0; i < seq.entries.size(); ++i)
        for (std::size_t j = 1; j < seq.entries.size(); ++j)
            if (seq.entries[i].rho + seq.entries[j].rho <= cap) pairs.emplace_back(static_cast<int>(i), static_cast<int>(j));
    std::sort(pairs.begin(), pairs.end(), [&](const auto& a, const auto& b) {
        auto sa = seq.entries[a.first].rho + seq.entries[a.second].rho;
        auto sb = seq.entries[b.first].rho + seq.entries[b.second].rho;
        if (sa != sb) return sa < sb;
        return a.first < b.first;
    });

    for (const auto& [i, j] : pairs) {
        const auto& d1 = seq.entries[i].rho;
        const auto& d2 = seq.entries[j].rho;
        auto vs = vanishing_system(F, lambda, d1, d2, opt.null_threshold);
        BidegreeRecord rec{d1, d2, vs.basis.size(), vs.nullspace.size(), vs.singular_values, std::nullopt, 0.0};
        if (!vs.nullspace.empty()) {
            auto q = vs.poly(normalize_witness(vs.nullspace.back()), lambda.n());
            double res = 0.0;
            for (const auto& x : F.points()) res = std::max(res, std::abs(q(x)));
            rec.witness = std::move(q);
            rec.residual = res;
            if (res < opt.witness_tol && rep.witness_record < 0) rep.witness_record = static_cast<int>(rep.records.size());
        }
        rep.records.push_back(std::move(rec));
    }
    if (rep.witness_record >= 0) {
        rep.verdict = ScanVerdict::SparseCandidate;
        if (F.descriptor() && !opt.localize_center)
            rep.exact = exact_verify(*rep.records[rep.witness_record].witness, *F.descriptor());
        else
            rep.exact.note = "no symbolic descriptor";
    }
    return rep;
}

MixedPolynomial sparse_witness_from_relation(const DependenceVerdict& relation) {
    if (!relation.dependent) throw DomainError("sparse witness needs a dependent relation");
    const int n = static_cast<int>(relation.alpha.size());
    MultiIndex a(n), b(n);
    for (int i = 0; i < n; ++i) {
        a[i] = static_cast<int>(relation.alpha[i]);
        b[i] = static_cast<int>(relation.beta[i]);
    }
    // Im(z^a zbar^b) = (z^a zbar^b - z^b zbar^a) / 2i
    MixedPolynomial q(n);
    q.add(a, b, cplx(0.0, -0.5));
    q.add(b, a, cplx(0.0, 0.5));
    return q;
}

NonsparseVerdict nonsparse_certificate_independent(const Lambda& lambda, const Point& w) {
    require(static_cast<int>(w.size()) == lambda.n(), "certificate point has wrong dimension");
    if (is_z_dependent(lambda).dependent)
        throw DomainError("lambda is Z-dependent; use sparseness_scan instead");
    for (const auto& c : w)
        if (std::abs(c) <= kZeroTol) return NonsparseVerdict::NotCertified;
    return NonsparseVerdict::CertifiedNonsparse;
}

ObstructionReport forelli_obstruction(const TaylorJet& jet, const SampledSet& F, const Lambda& lambda, double tol) {
    ObstructionReport rep;
    for (const auto& comp : bidegree_decompose(jet, lambda)) {
        if (comp.d2.is_zero()) continue;
        ObstructionBlock b{comp.d1, comp.d2, 0.0, comp.poly.coefficient_norm(), false};
        for (const auto& x : F.points()) b.max_abs = std::max(b.max_abs, std::abs(comp.poly(x)));
        b.vanishes_on_F = b.max_abs < tol && b.coeff_norm > 0;
        rep.blocks.push_back(b);
        rep.formal_holomorphic_type = false;
    }
    return rep;
}

const char* to_string(ScanVerdict v) {
    return v == ScanVerdict::SparseCandidate ? "SparseCandidate" : "NoObstructionUpToCap";
}

const char* to_string(NonsparseVerdict v) {
    return v == NonsparseVerdict::CertifiedNonsparse ? "Certified-Nonsparse" : "Not-Certified";
}

}  // namespace qhflow
