#include "qhflow/sampling.hpp"

#include "qhflow/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

namespace qhflow {

namespace {

constexpr double kPi = std::numbers::pi;

// magnitude vectors of the positive orthant of S^{n-1}, hyperspherical grid
std::vector<std::vector<double>> orthant_grid(int n, int K) {
    std::vector<std::vector<double>> out;
    std::set<std::vector<long long>> seen;
    std::vector<int> idx(std::max(0, n - 1), 0);
    while (true) {
        std::vector<double> r(n);
        double s = 1.0;
        for (int j = 0; j < n - 1; ++j) {
            double eta = (kPi / 2) * idx[j] / (K - 1);
            double c = idx[j] == K - 1 ? 0.0 : std::cos(eta);
            double sn = idx[j] == 0 ? 0.0 : std::sin(eta);
            r[j] = s * c;
            s *= sn;
        }
        r[n - 1] = s;
        std::vector<long long> key(n);
        for (int j = 0; j < n; ++j) key[j] = std::llround(r[j] * 1e12);
        if (seen.insert(key).second) out.push_back(r);
        int j = 0;
        while (j < n - 1 && ++idx[j] == K) idx[j++] = 0;
        if (j == n - 1) break;
    }
    return out;
}

void shell_points(int n, int K, int L, double radius, std::vector<Point>& out) {
    if (n == 1) {
        for (int a = 0; a < L; ++a) out.push_back({std::polar(radius, 2 * kPi * a / L)});
        return;
    }
    for (const auto& r : orthant_grid(n, K)) {
        std::vector<int> active;
        for (int j = 0; j < n; ++j)
            if (r[j] > 0) active.push_back(j);
        std::vector<int> ph(active.size(), 0);
        while (true) {
            Point p(n, 0.0);
            for (std::size_t a = 0; a < active.size(); ++a)
                p[active[a]] = std::polar(radius * r[active[a]], 2 * kPi * ph[a] / L);
            out.push_back(std::move(p));
            std::size_t j = 0;
            while (j < ph.size() && ++ph[j] == L) ph[j++] = 0;
            if (j == ph.size()) break;
        }
    }
}

double sphere_mesh(int n, int K, int L) {
    double eta = n > 1 ? (kPi / 2) / (K - 1) / 2 : 0.0;
    double phi = kPi / L;
    return std::sqrt((n - 1) * eta * eta + n * phi * phi);
}

}  // namespace

// ---------------------------------------------------------------- descriptors

int descriptor_dimension(const Descriptor& d) {
    return std::visit(
        [](const auto& x) -> int {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ExplicitList>) {
                return x.points.empty() ? 0 : static_cast<int>(x.points.front().size());
            } else if constexpr (std::is_same_v<T, CircleFamily>) {
                return static_cast<int>(x.moduli.size());
            } else if constexpr (std::is_same_v<T, RealSlice>) {
                return x.n;
            } else if constexpr (std::is_same_v<T, UnionOf>) {
                return x.parts.empty() ? 0 : descriptor_dimension(*x.parts.front());
            } else {
                int s = 0;
                for (const auto& p : x.parts) s += descriptor_dimension(*p);
                return s;
            }
        },
        d.v);
}

std::vector<Point> generate(const Descriptor& d) {
    return std::visit(
        [](const auto& x) -> std::vector<Point> {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ExplicitList>) {
                return x.points;
            } else if constexpr (std::is_same_v<T, CircleFamily>) {
                const std::size_t n = x.moduli.size();
                require(n > 0 && x.frequencies.size() == n && x.phases.size() == n,
                        "circle_family: moduli/frequencies/phases must have equal nonzero length");
                require(x.count > 0, "circle_family: count must be positive");
                std::vector<Point> out;
                for (int j = 0; j < x.count; ++j) {
                    double th = x.theta0 + (x.theta1 - x.theta0) * j / x.count;
                    Point p(n);
                    for (std::size_t k = 0; k < n; ++k) p[k] = std::polar(x.moduli[k], x.frequencies[k] * th + x.phases[k]);
                    out.push_back(std::move(p));
                }
                return out;
            } else if constexpr (std::is_same_v<T, RealSlice>) {
                require(x.n >= 1 && x.count > 0, "real_slice: bad n/count");
                std::vector<bool> real(x.n, false);
                for (int c : x.real_coords) {
                    require(c >= 0 && c < x.n, "real_slice: coordinate out of range");
                    real[c] = true;
                }
                int D = 0;
                for (int k = 0; k < x.n; ++k) D += real[k] ? 1 : 2;
                std::mt19937_64 rng(x.seed);
                std::normal_distribution<double> g(0.0, 1.0);
                std::vector<Point> out;
                while (static_cast<int>(out.size()) < x.count) {
                    std::vector<double> v(D);
                    double s = 0.0;
                    for (auto& vi : v) {
                        vi = g(rng);
                        s += vi * vi;
                    }
                    s = std::sqrt(s);
                    if (s < 1e-8) continue;
                    Point p(x.n);
                    int i = 0;
                    for (int k = 0; k < x.n; ++k) {
                        if (real[k]) p[k] = v[i++] / s;
                        else {
                            p[k] = cplx(v[i], v[i + 1]) / s;
                            i += 2;
                        }
                    }
                    out.push_back(std::move(p));
                }
                return out;
            } else if constexpr (std::is_same_v<T, UnionOf>) {
                std::vector<Point> out;
                int n = -1;
                for (const auto& p : x.parts) {
                    int dn = descriptor_dimension(*p);
                    require(n < 0 || dn == n, "union: parts of different dimension");
                    n = dn;
                    auto pts = generate(*p);
                    out.insert(out.end(), pts.begin(), pts.end());
                }
                return out;
            } else {
                std::vector<Point> out{Point{}};
                for (const auto& p : x.parts) {
                    auto pts = generate(*p);
                    std::vector<Point> next;
                    next.reserve(out.size() * pts.size());
                    for (const auto& a : out)
                        for (const auto& b : pts) {
                            Point c = a;
                            c.insert(c.end(), b.begin(), b.end());
                            next.push_back(std::move(c));
                        }
                    out = std::move(next);
                }
                return out;
            }
        },
        d.v);
}

// ---------------------------------------------------------------- sampled set

SampledSet::SampledSet(int n, std::vector<Point> points) : n_(n), points_(std::move(points)) {
    require(n >= 1, "sampled set dimension must be positive");
    for (const auto& p : points_) require(static_cast<int>(p.size()) == n_, "sample point has wrong dimension");
}

SampledSet SampledSet::from(const Descriptor& d, bool on_sphere) {
    SampledSet s(descriptor_dimension(d), generate(d));
    s.descriptor_ = std::make_shared<const Descriptor>(d);
    if (on_sphere) s.flag_on_sphere();
    return s;
}

SampledSet& SampledSet::set_descriptor(DescriptorPtr d) {
    descriptor_ = std::move(d);
    return *this;
}

SampledSet& SampledSet::flag_on_sphere(double tol) {
    for (const auto& p : points_)
        require(std::abs(norm(p) - 1.0) <= tol, "sample point is off the unit sphere");
    on_sphere_ = true;
    sphere_tol_ = tol;
    return *this;
}

SampledSet& SampledSet::set_mesh(double h) {
    mesh_ = h;
    return *this;
}

SampledSet SampledSet::united(const SampledSet& o) const {
    if (empty() && n_ == 0) return o;
    if (o.empty()) return *this;
    require(n_ == o.n_, "union of sets of different dimension");
    auto pts = points_;
    pts.insert(pts.end(), o.points_.begin(), o.points_.end());
    SampledSet s(n_, std::move(pts));
    if (descriptor_ && o.descriptor_) s.descriptor_ = std::make_shared<const Descriptor>(Descriptor{UnionOf{{descriptor_, o.descriptor_}}});
    s.on_sphere_ = on_sphere_ && o.on_sphere_;
    return s;
}

SampledSet SampledSet::subset(const std::vector<std::size_t>& idx) const {
    std::vector<Point> pts;
    for (auto i : idx) pts.push_back(points_.at(i));
    SampledSet s(n_, std::move(pts));
    s.on_sphere_ = on_sphere_;
    return s;
}

SampledSet SampledSet::within(const Point& center, double r) const {
    std::vector<Point> pts;
    for (const auto& p : points_) {
        double s = 0.0;
        for (int k = 0; k < n_; ++k) s += std::norm(p[k] - center[k]);
        if (std::sqrt(s) <= r) pts.push_back(p);
    }
    return SampledSet(n_, std::move(pts));
}

double SampledSet::max_norm() const {
    double m = 0.0;
    for (const auto& p : points_) m = std::max(m, norm(p));
    return m;
}

// ---------------------------------------------------------------- builtins

SampledSet sphere_grid(int n, int min_points) {
    require(n >= 1 && min_points >= 1, "sphere_grid: bad arguments");
    std::vector<Point> pts;
    int K = 2, L = 2;
    if (n == 1) {
        L = std::max(2, min_points);
        shell_points(1, 2, L, 1.0, pts);
    } else {
        for (K = 2;; ++K) {
            L = 2 * (K - 1);
            pts.clear();
            shell_points(n, K, L, 1.0, pts);
            if (static_cast<int>(pts.size()) >= min_points) break;
        }
    }
    SampledSet s(n, std::move(pts));
    s.flag_on_sphere();
    s.set_mesh(sphere_mesh(n, K, L));
    return s;
}

SampledSet ball_sample(int n, int min_points) {
    require(n >= 1 && min_points >= 1, "ball_sample: bad arguments");
    for (int K = 3;; ++K) {
        const int S = K - 1;
        std::vector<Point> pts{Point(n, 0.0)};
        double ang = 0.0;
        for (int s = 1; s <= S; ++s) {
            double r = static_cast<double>(s) / S;
            int Ks = std::max(2, static_cast<int>(std::ceil((K - 1) * r)) + 1);
            int Ls = n == 1 ? std::max(4, static_cast<int>(std::ceil(4.0 * (K - 1) * r))) : 2 * (Ks - 1);
            shell_points(n, Ks, Ls, r, pts);
            ang = std::max(ang, r * sphere_mesh(n, Ks, Ls));
        }
        if (static_cast<int>(pts.size()) >= min_points) {
            SampledSet b(n, std::move(pts));
            b.set_mesh(0.5 / S + ang);
            return b;
        }
    }
}

SampledSet line_grid(int n, int count) {
    require(n >= 1 && count >= 1, "line_grid: bad arguments");
    std::vector<Point> pts;
    for (int j = 0; j < count; ++j) {
        Point p(n, 0.0);
        p[0] = 2.0 * (j + 1) / count;
        pts.push_back(std::move(p));
    }
    return SampledSet(n, std::move(pts));
}

SampledSet circle_sample(double radius, int count, cplx center) {
    std::vector<Point> pts;
    for (int j = 0; j < count; ++j) pts.push_back({center + std::polar(radius, 2 * kPi * j / count)});
    SampledSet s(1, std::move(pts));
    s.set_mesh(radius * kPi / count);
    return s;
}

SampledSet disc_sample(double radius, int rings, int per_ring, cplx center) {
    std::vector<Point> pts{{center}};
    for (int r = 1; r <= rings; ++r) {
        double rad = radius * r / rings;
        int m = std::max(4, per_ring * r / rings);
        for (int j = 0; j < m; ++j) pts.push_back({center + std::polar(rad, 2 * kPi * j / m)});
    }
    return SampledSet(1, std::move(pts));
}

SampledSet torus_sample(const std::vector<double>& radii, int per_angle) {
    std::vector<DescriptorPtr> parts;
    for (double r : radii)
        parts.push_back(std::make_shared<const Descriptor>(Descriptor{CircleFamily{{r}, {1}, {0.0}, per_angle}}));
    Descriptor d{ProductOf{parts}};
    double s = 0.0;
    for (double r : radii) s += r * r;
    return SampledSet::from(d, std::abs(s - 1.0) < 1e-12);
}

SampledSet random_sphere(int n, int count, std::uint64_t seed) {
    std::vector<int> none;
    return SampledSet::from(Descriptor{RealSlice{n, none, count, seed}}, true);
}

SampledSet builtin_grid(const std::string& spec, int n) {
    auto colon = spec.find(':');
    if (colon == std::string::npos) throw ParseError("builtin grid must look like name:N, got '" + spec + "'");
    std::string name = spec.substr(0, colon);
    int count = 0;
    try {
        count = std::stoi(spec.substr(colon + 1));
    } catch (const std::exception&) {
        throw ParseError("builtin grid count is not an integer: '" + spec + "'");
    }
    if (count <= 0) throw ParseError("builtin grid count must be positive");
    if (name == "sphere") return sphere_grid(n, count);
    if (name == "ball") return ball_sample(n, count);
    if (name == "line") return line_grid(n, count);
    throw ParseError("unknown builtin grid '" + name + "'");
}

// ---------------------------------------------------------------- exact checks

namespace {

using BigRational = boost::multiprecision::cpp_rational;

struct GaussQ {
    BigRational re, im;
    GaussQ operator*(const GaussQ& o) const { return {re * o.re - im * o.im, re * o.im + im * o.re}; }
    GaussQ operator+(const GaussQ& o) const { return {re + o.re, im + o.im}; }
    GaussQ conj() const { return {re, -im}; }
    bool is_zero() const { return re == 0 && im == 0; }
};

std::optional<BigRational> rationalize(double x, double tol, std::int64_t max_den) {
    if (x == 0.0) return BigRational(0);
    double y = std::abs(x);
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 60; ++it) {
        double a = std::floor(y);
        if (a > 1e15) break;
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        if (k2 > max_den) break;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - std::abs(x)) <= tol) {
            BigRational q = BigRational(h1) / BigRational(k1);
            return x < 0 ? BigRational(-q) : q;
        }
        double frac = y - a;
        if (frac < 1e-300) break;
        y = 1.0 / frac;
    }
    return std::nullopt;
}

struct RationalPoly {
    std::vector<std::pair<MonoKey, GaussQ>> terms;
};

std::optional<RationalPoly> rationalize(const MixedPolynomial& q) {
    double big = 0.0;
    for (const auto& [k, c] : q.terms()) big = std::max({big, std::abs(c.real()), std::abs(c.imag())});
    if (big == 0.0) return std::nullopt;
    RationalPoly r;
    for (const auto& [k, c] : q.terms()) {
        auto re = rationalize(c.real() / big, 1e-9, 1000000);
        auto im = rationalize(c.imag() / big, 1e-9, 1000000);
        if (!re || !im) return std::nullopt;
        r.terms.push_back({k, {*re, *im}});
    }
    return r;
}

GaussQ eval(const RationalPoly& p, const std::vector<GaussQ>& z) {
    GaussQ s{0, 0};
    for (const auto& [key, c] : p.terms) {
        GaussQ v = c;
        for (std::size_t i = 0; i < z.size(); ++i) {
            for (int e = 0; e < key.k[i]; ++e) v = v * z[i];
            for (int e = 0; e < key.m[i]; ++e) v = v * z[i].conj();
        }
        s = s + v;
    }
    return s;
}

// deterministic small integers in [-2 den, 2 den]
struct Lcg {
    std::uint64_t s;
    std::int64_t next(std::int64_t span) {
        s = s * 6364136223846793005ULL + 1442695040888963407ULL;
        return static_cast<std::int64_t>((s >> 33) % static_cast<std::uint64_t>(2 * span + 1)) - span;
    }
};

ExactReport verify_points(const RationalPoly& p, const std::vector<std::vector<GaussQ>>& pts) {
    ExactReport r;
    r.status = ExactCheck::Verified;
    for (const auto& z : pts) {
        ++r.points_checked;
        if (!eval(p, z).is_zero()) {
            r.status = ExactCheck::Failed;
            r.note = "nonzero exact value at a rational parameter";
            return r;
        }
    }
    return r;
}

ExactReport verify(const RationalPoly& p, const Descriptor& d, int max_den, int max_points) {
    ExactReport na;
    if (const auto* rs = std::get_if<RealSlice>(&d.v)) {
        std::vector<bool> real(rs->n, false);
        for (int c : rs->real_coords) real[c] = true;
        int D = 0;
        for (int k = 0; k < rs->n; ++k) D += real[k] ? 1 : 2;
        Lcg g{0x9e3779b97f4a7c15ULL ^ rs->seed};
        std::vector<std::vector<GaussQ>> pts;
        for (int j = 0; j < max_points; ++j) {
            // inverse stereographic projection of u in Q^{D-1}
            std::vector<BigRational> u(D - 1);
            BigRational s2 = 0;
            for (auto& ui : u) {
                ui = BigRational(g.next(2 * max_den)) / BigRational(max_den);
                s2 += ui * ui;
            }
            std::vector<BigRational> x(D);
            for (int i = 0; i < D - 1; ++i) x[i] = 2 * u[i] / (s2 + 1);
            x[D - 1] = (s2 - 1) / (s2 + 1);
            std::vector<GaussQ> z(rs->n);
            int i = 0;
            for (int k = 0; k < rs->n; ++k) {
                if (real[k]) z[k] = {x[i++], 0};
                else {
                    z[k] = {x[i], x[i + 1]};
                    i += 2;
                }
            }
            pts.push_back(std::move(z));
        }
        return verify_points(p, pts);
    }
    if (const auto* cf = std::get_if<CircleFamily>(&d.v)) {
        if (cf->theta1 - cf->theta0 < 2 * kPi - 1e-12) {
            na.note = "circle family does not cover a full period";
            return na;
        }
        std::vector<BigRational> mod;
        for (std::size_t k = 0; k < cf->moduli.size(); ++k) {
            auto q = rationalize(cf->moduli[k], 1e-15, 1 << 20);
            if (!q || cf->phases[k] != 0.0) {
                na.note = "circle family with irrational modulus or nonzero phase";
                return na;
            }
            mod.push_back(*q);
        }
        std::vector<std::vector<GaussQ>> pts;
        for (int j = 0; j < max_points; ++j) {
            BigRational s = BigRational(j - max_points / 2) / BigRational(max_den);
            GaussQ w{(1 - s * s) / (1 + s * s), 2 * s / (1 + s * s)};
            std::vector<GaussQ> z;
            for (std::size_t k = 0; k < mod.size(); ++k) {
                GaussQ v{mod[k], 0};
                int f = cf->frequencies[k];
                GaussQ b = f < 0 ? w.conj() : w;
                for (int e = 0; e < std::abs(f); ++e) v = v * b;
                z.push_back(v);
            }
            pts.push_back(std::move(z));
        }
        return verify_points(p, pts);
    }
    if (const auto* un = std::get_if<UnionOf>(&d.v)) {
        ExactReport acc;
        acc.status = ExactCheck::Verified;
        for (const auto& part : un->parts) {
            auto r = verify(p, *part, max_den, max_points);
            acc.points_checked += r.points_checked;
            if (r.status == ExactCheck::Failed) return r;
            if (r.status == ExactCheck::NotApplicable) {
                acc.status = ExactCheck::NotApplicable;
                acc.note = r.note;
            }
        }
        return acc;
    }
    na.note = "descriptor type has no rational parametrization";
    return na;
}

}  // namespace

ExactReport exact_verify(const MixedPolynomial& witness, const Descriptor& d, int max_den, int max_points) {
    auto p = rationalize(witness);
    if (!p) {
        ExactReport r;
        r.note = "witness coefficients are not close to short rationals";
        return r;
    }
    return verify(*p, d, max_den, max_points);
}

const char* to_string(ExactCheck c) {
    switch (c) {
        case ExactCheck::Verified: return "verified";
        case ExactCheck::Failed: return "failed";
        default: return "not_applicable";
    }
}

}  // namespace qhflow
