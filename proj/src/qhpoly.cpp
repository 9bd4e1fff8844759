#include "qhflow/qhpoly.hpp"

#include "qhflow/error.hpp"

#include <algorithm>
#include <cmath>

namespace qhflow {

// ---------------------------------------------------------------- monomials

cplx monomial_value(const MultiIndex& k, const MultiIndex& m, const Point& z) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        for (int e = 0; e < k[i]; ++e) v *= z[i];
        cplx zb = std::conj(z[i]);
        for (int e = 0; e < m[i]; ++e) v *= zb;
    }
    return v;
}

cplx holomorphic_monomial(const MultiIndex& k, const Point& z) {
    cplx v = 1.0;
    for (std::size_t i = 0; i < z.size(); ++i)
        for (int e = 0; e < k[i]; ++e) v *= z[i];
    return v;
}

// ---------------------------------------------------------------- polynomial

MixedPolynomial MixedPolynomial::monomial(const MultiIndex& k, const MultiIndex& m, cplx c) {
    require(k.size() == m.size(), "monomial exponent lengths differ");
    MixedPolynomial p(static_cast<int>(k.size()));
    p.add(k, m, c);
    return p;
}

MixedPolynomial MixedPolynomial::holomorphic(const MultiIndex& k, cplx c) {
    return monomial(k, MultiIndex(k.size(), 0), c);
}

MixedPolynomial MixedPolynomial::constant(int n, cplx c) {
    MixedPolynomial p(n);
    p.add(MultiIndex(n, 0), MultiIndex(n, 0), c);
    return p;
}

void MixedPolynomial::add(const MultiIndex& k, const MultiIndex& m, cplx c) {
    require(static_cast<int>(k.size()) == n_ && static_cast<int>(m.size()) == n_,
            "term exponent length does not match polynomial dimension");
    for (int i = 0; i < n_; ++i) require(k[i] >= 0 && m[i] >= 0, "negative exponent");
    if (c == cplx(0.0)) return;
    auto [it, fresh] = terms_.try_emplace(MonoKey{k, m}, c);
    if (!fresh) {
        it->second += c;
        if (it->second == cplx(0.0)) terms_.erase(it);
    }
}

void MixedPolynomial::add_holomorphic(const MultiIndex& k, cplx c) { add(k, MultiIndex(n_, 0), c); }

cplx MixedPolynomial::coeff(const MultiIndex& k, const MultiIndex& m) const {
    auto it = terms_.find(MonoKey{k, m});
    return it == terms_.end() ? cplx(0.0) : it->second;
}

cplx MixedPolynomial::operator()(const Point& z) const {
    require(static_cast<int>(z.size()) == n_, "point dimension does not match polynomial");
    cplx s = 0.0;
    for (const auto& [key, c] : terms_) s += c * monomial_value(key.k, key.m, z);
    return s;
}

MixedPolynomial MixedPolynomial::operator+(const MixedPolynomial& o) const {
    if (empty()) return o;
    if (o.empty()) return *this;
    require(n_ == o.n_, "dimension mismatch");
    MixedPolynomial r = *this;
    for (const auto& [key, c] : o.terms_) r.add(key.k, key.m, c);
    return r;
}

MixedPolynomial MixedPolynomial::operator-(const MixedPolynomial& o) const { return *this + o * cplx(-1.0); }

MixedPolynomial MixedPolynomial::operator*(const MixedPolynomial& o) const {
    require(n_ == o.n_, "dimension mismatch");
    MixedPolynomial r(n_);
    for (const auto& [a, ca] : terms_)
        for (const auto& [b, cb] : o.terms_) {
            MultiIndex k(n_), m(n_);
            for (int i = 0; i < n_; ++i) {
                k[i] = a.k[i] + b.k[i];
                m[i] = a.m[i] + b.m[i];
            }
            r.add(k, m, ca * cb);
        }
    return r;
}

MixedPolynomial MixedPolynomial::operator*(cplx s) const {
    MixedPolynomial r(n_);
    for (const auto& [key, c] : terms_) r.add(key.k, key.m, c * s);
    return r;
}

MixedPolynomial MixedPolynomial::pow(int e) const {
    require(e >= 0, "negative power");
    MixedPolynomial r = constant(n_, 1.0);
    for (int i = 0; i < e; ++i) r = r * *this;
    return r;
}

bool MixedPolynomial::is_holomorphic() const {
    return std::all_of(terms_.begin(), terms_.end(), [](const auto& t) {
        return std::all_of(t.first.m.begin(), t.first.m.end(), [](int x) { return x == 0; });
    });
}

int MixedPolynomial::degree() const {
    int d = 0;
    for (const auto& [key, c] : terms_) {
        int s = 0;
        for (int i = 0; i < n_; ++i) s += key.k[i] + key.m[i];
        d = std::max(d, s);
    }
    return d;
}

double MixedPolynomial::coefficient_norm() const {
    double s = 0.0;
    for (const auto& [key, c] : terms_) s += std::norm(c);
    return std::sqrt(s);
}

double MixedPolynomial::coefficient_l1() const {
    double s = 0.0;
    for (const auto& [key, c] : terms_) s += std::abs(c);
    return s;
}

MixedPolynomial MixedPolynomial::pruned(double tol) const {
    MixedPolynomial r(n_);
    for (const auto& [key, c] : terms_)
        if (std::abs(c) > tol) r.add(key.k, key.m, c);
    return r;
}

// ---------------------------------------------------------------- flow

Point flow_map(const Lambda& lambda, const Point& z, cplx t) {
    require(static_cast<int>(z.size()) == lambda.n(), "point dimension does not match lambda");
    Point w(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) w[i] = z[i] * std::exp(-lambda.approx(static_cast<int>(i)) * t);
    return w;
}

std::vector<QHComponent> bidegree_decompose(const MixedPolynomial& p, const Lambda& lambda) {
    require(p.empty() || p.n() == lambda.n(), "polynomial dimension does not match lambda");
    std::vector<QHComponent> out;
    for (const auto& [key, c] : p.terms()) {
        auto d1 = weighted_degree(lambda, key.k);
        auto d2 = weighted_degree(lambda, key.m);
        auto it = std::find_if(out.begin(), out.end(), [&](const QHComponent& q) { return q.d1 == d1 && q.d2 == d2; });
        if (it == out.end()) {
            out.push_back({MixedPolynomial(p.n()), d1, d2, lambda});
            it = out.end() - 1;
        }
        it->poly.add(key.k, key.m, c);
    }
    std::sort(out.begin(), out.end(), [](const QHComponent& a, const QHComponent& b) {
        if (a.d1 + a.d2 != b.d1 + b.d2) return a.d1 + a.d2 < b.d1 + b.d2;
        return a.d1 < b.d1;
    });
    return out;
}

double flow_equivariance_residual(const QHComponent& q, const Point& z, cplx t) {
    if (t == cplx(0.0)) return 0.0;
    cplx lhs = q.poly(flow_map(q.lambda, z, t));
    cplx rhs = std::exp(-q.d1.value() * t - q.d2.value() * std::conj(t)) * q.poly(z);
    return std::abs(lhs - rhs);
}

double equivariance_tolerance(const QHComponent& q, const Point& z, cplx t) {
    double d = std::abs(q.d1.value()) + std::abs(q.d2.value());
    return 1e-9 * (1.0 + std::abs(q.poly(z))) * std::exp(d * std::abs(t.real()));
}

std::vector<AsymptoticTerm> taylor_to_asymptotic(const TaylorJet& jet, const Lambda& lambda, const Point& z) {
    std::vector<AsymptoticTerm> out;
    for (const auto& comp : bidegree_decompose(jet, lambda)) {
        auto rho = comp.d1 + comp.d2;
        if (out.empty() || out.back().rho != rho) out.push_back({rho, {}});
        out.back().rows.push_back({comp.d1, comp.d2, comp.poly(z)});
    }
    return out;
}

std::vector<HoloQHPolynomial> series_decompose(const MixedPolynomial& f, const Lambda& lambda) {
    if (!f.is_holomorphic()) throw DomainError("series_decompose: input has conjugate terms");
    std::vector<HoloQHPolynomial> out;
    for (auto& comp : bidegree_decompose(f, lambda)) out.push_back({std::move(comp.poly), comp.d1});
    return out;
}

double norm(const Point& z) {
    double s = 0.0;
    for (const auto& c : z) s += std::norm(c);
    return std::sqrt(s);
}

double bernstein_walsh_residual(const MixedPolynomial& q, double r, double normK, const Point& z) {
    if (!(r > 0)) throw DomainError("bernstein_walsh_residual: radius must be positive");
    require(q.is_holomorphic(), "bernstein_walsh_residual: polynomial must be holomorphic");
    double growth = std::max(1.0, norm(z) / r);
    return std::abs(q(z)) - normK * std::pow(growth, q.degree());
}

MixedPolynomial affine_substitute(const MixedPolynomial& q, const Point& center, double scale) {
    require(q.is_holomorphic(), "affine_substitute: polynomial must be holomorphic");
    const int n = q.n();
    require(static_cast<int>(center.size()) == n, "affine_substitute: center dimension");
    // powers of the linear forms (z_i - c_i)/s, built lazily
    std::vector<std::vector<MixedPolynomial>> pw(n);
    for (int i = 0; i < n; ++i) {
        MultiIndex e(n, 0);
        e[i] = 1;
        MixedPolynomial lin = MixedPolynomial::holomorphic(e, 1.0 / scale);
        lin.add_holomorphic(MultiIndex(n, 0), -center[i] / scale);
        pw[i].push_back(MixedPolynomial::constant(n, 1.0));
        pw[i].push_back(lin);
    }
    MixedPolynomial out(n);
    for (const auto& [key, c] : q.terms()) {
        MixedPolynomial term = MixedPolynomial::constant(n, c);
        for (int i = 0; i < n; ++i) {
            while (static_cast<int>(pw[i].size()) <= key.k[i]) pw[i].push_back(pw[i].back() * pw[i][1]);
            if (key.k[i] > 0) term = term * pw[i][key.k[i]];
        }
        out = out + term;
    }
    return out;
}

}  // namespace qhflow
