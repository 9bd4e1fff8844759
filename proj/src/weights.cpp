#include "qhflow/weights.hpp"

#include "qhflow/error.hpp"

#include <boost/multiprecision/cpp_int.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <sstream>

namespace qhflow {

namespace {

using BigRational = boost::multiprecision::cpp_rational;

double to_double(const Rational& q) {
    return static_cast<double>(q.numerator()) / static_cast<double>(q.denominator());
}

}  // namespace

// ---------------------------------------------------------------- degree

WeightedDegree::WeightedDegree(std::vector<Rational> coords, std::shared_ptr<const NumberBasis> basis)
    : c_(std::move(coords)), basis_(std::move(basis)) {
    require(basis_ != nullptr, "weighted degree without basis");
    require(c_.size() == basis_->rank(), "coordinate count does not match basis rank");
    refresh();
}

WeightedDegree WeightedDegree::zero(std::shared_ptr<const NumberBasis> basis) {
    std::vector<Rational> c(basis->rank(), Rational(0));
    return WeightedDegree(std::move(c), std::move(basis));
}

WeightedDegree WeightedDegree::rational(Rational q, std::shared_ptr<const NumberBasis> basis) {
    std::vector<Rational> c(basis->rank(), Rational(0));
    c[0] = q;
    return WeightedDegree(std::move(c), std::move(basis));
}

void WeightedDegree::refresh() {
    // fixed summation order: equal coordinates give bit-equal values
    double v = to_double(c_[0]);
    for (std::size_t i = 1; i < c_.size(); ++i) v += to_double(c_[i]) * basis_->approx[i - 1];
    v_ = v;
}

bool WeightedDegree::is_zero() const {
    return std::all_of(c_.begin(), c_.end(), [](const Rational& q) { return q == 0; });
}

bool WeightedDegree::is_rational() const {
    return std::all_of(c_.begin() + 1, c_.end(), [](const Rational& q) { return q == 0; });
}

int WeightedDegree::sign() const {
    if (is_rational()) return c_[0] > 0 ? 1 : (c_[0] < 0 ? -1 : 0);
    if (is_zero()) return 0;
    return v_ > 0 ? 1 : -1;
}

WeightedDegree WeightedDegree::operator+(const WeightedDegree& o) const {
    require(c_.size() == o.c_.size(), "adding degrees over different bases");
    std::vector<Rational> c(c_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += o.c_[i];
    return WeightedDegree(std::move(c), basis_);
}

WeightedDegree WeightedDegree::operator-(const WeightedDegree& o) const {
    require(c_.size() == o.c_.size(), "subtracting degrees over different bases");
    std::vector<Rational> c(c_);
    for (std::size_t i = 0; i < c.size(); ++i) c[i] -= o.c_[i];
    return WeightedDegree(std::move(c), basis_);
}

WeightedDegree WeightedDegree::operator*(std::int64_t k) const {
    std::vector<Rational> c(c_);
    for (auto& q : c) q *= k;
    return WeightedDegree(std::move(c), basis_);
}

bool WeightedDegree::operator<(const WeightedDegree& o) const {
    if (c_ == o.c_) return false;
    if (v_ != o.v_) return v_ < o.v_;
    return std::lexicographical_compare(c_.begin(), c_.end(), o.c_.begin(), o.c_.end());
}

std::string WeightedDegree::str() const {
    std::ostringstream os;
    bool any = false;
    auto put = [&](const Rational& q, const std::string& name) {
        if (q == 0) return;
        if (any) os << (q > 0 ? "+" : "-");
        else if (q < 0) os << "-";
        Rational a = q < 0 ? -q : q;
        if (name.empty() || a != 1) {
            os << a.numerator();
            if (a.denominator() != 1) os << "/" << a.denominator();
        }
        os << name;
        any = true;
    };
    put(c_[0], "");
    for (std::size_t i = 1; i < c_.size(); ++i) put(c_[i], basis_->names[i - 1]);
    if (!any) os << "0";
    return os.str();
}

// ---------------------------------------------------------------- lambda

Lambda::Lambda(std::vector<std::vector<Rational>> entries, NumberBasis basis) {
    require(!entries.empty(), "lambda must have at least one entry");
    require(basis.names.size() == basis.approx.size(), "basis names/approx size mismatch");
    for (double a : basis.approx) require(std::isfinite(a) && a > 0, "basis approximations must be positive");
    basis_ = std::make_shared<const NumberBasis>(std::move(basis));
    for (auto& e : entries) {
        require(e.size() == basis_->rank(), "lambda entry has wrong coordinate count");
        entries_.emplace_back(std::move(e), basis_);
    }
    const auto& e0 = entries_[0].coords();
    require(e0[0] == 1 && entries_[0].is_rational(), "lambda_1 must equal 1 exactly");
    for (const auto& e : entries_) {
        require(e.value() > 0, "lambda entries must be positive");
        approx_.push_back(e.value());
    }
}

Lambda Lambda::rational(const std::vector<Rational>& w) {
    std::vector<std::vector<Rational>> e;
    for (const auto& q : w) e.push_back({q});
    return Lambda(std::move(e), NumberBasis{});
}

Lambda Lambda::integers(const std::vector<std::int64_t>& w) {
    std::vector<Rational> q(w.begin(), w.end());
    return rational(q);
}

double Lambda::min() const { return *std::min_element(approx_.begin(), approx_.end()); }
double Lambda::max() const { return *std::max_element(approx_.begin(), approx_.end()); }

bool Lambda::is_rational() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const auto& e) { return e.is_rational(); });
}

bool Lambda::all_integer() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const auto& e) { return e.is_rational() && e.coords()[0].denominator() == 1; });
}

WeightedDegree Lambda::constant(double x) const {
    require(std::isfinite(x), "non-finite cap");
    // continued fraction, accept only if reproduces x closely
    double y = x;
    std::int64_t h0 = 0, h1 = 1, k0 = 1, k1 = 0;
    for (int it = 0; it < 40; ++it) {
        double a = std::floor(y);
        auto ai = static_cast<std::int64_t>(a);
        std::int64_t h2 = ai * h1 + h0, k2 = ai * k1 + k0;
        h0 = h1; h1 = h2; k0 = k1; k1 = k2;
        if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x)))
            return WeightedDegree::rational(Rational(h1, k1), basis_);
        double frac = y - a;
        if (frac < 1e-15 || k1 > 1000000) break;
        y = 1.0 / frac;
    }
    throw DomainError("cap is not a short rational number");
}

bool Lambda::operator==(const Lambda& o) const {
    if (!(*basis_ == *o.basis_) || entries_.size() != o.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i] != o.entries_[i]) return false;
    return true;
}

// ---------------------------------------------------------------- degrees

WeightedDegree weighted_degree(const Lambda& lambda, const MultiIndex& k) {
    if (static_cast<int>(k.size()) != lambda.n()) throw DomainError("multi-index length does not match lambda");
    std::vector<Rational> c(lambda.rank(), Rational(0));
    for (int i = 0; i < lambda.n(); ++i) {
        require(k[i] >= 0, "negative multi-index entry");
        if (k[i] == 0) continue;
        const auto& e = lambda.entry(i).coords();
        for (std::size_t j = 0; j < c.size(); ++j) c[j] += e[j] * static_cast<std::int64_t>(k[i]);
    }
    return WeightedDegree(std::move(c), lambda.basis());
}

int RhoSequence::find(const WeightedDegree& d) const {
    auto it = std::lower_bound(entries.begin(), entries.end(), d,
                               [](const RhoEntry& e, const WeightedDegree& x) { return e.rho < x; });
    if (it != entries.end() && it->rho == d) return static_cast<int>(it - entries.begin());
    return -1;
}

namespace {

void enumerate_rec(const Lambda& lambda, double cap_v, int i, MultiIndex& k, double partial,
                   std::vector<MultiIndex>& out) {
    if (i == lambda.n()) {
        out.push_back(k);
        return;
    }
    double li = lambda.approx(i);
    for (int ki = 0;; ++ki) {
        double v = partial + li * ki;
        if (v > cap_v) break;
        k[i] = ki;
        enumerate_rec(lambda, cap_v, i + 1, k, v, out);
    }
    k[i] = 0;
}

}  // namespace

RhoSequence enumerate_rho(const Lambda& lambda, const WeightedDegree& cap) {
    if (cap.sign() < 0) throw DomainError("rho cap must be nonnegative");
    // generous float prune, exact filter afterwards
    double slack = 1e-9 * (1.0 + std::abs(cap.value()));
    std::vector<MultiIndex> raw;
    MultiIndex k(lambda.n(), 0);
    enumerate_rec(lambda, cap.value() + slack, 0, k, 0.0, raw);

    std::vector<std::pair<WeightedDegree, MultiIndex>> all;
    all.reserve(raw.size());
    for (auto& idx : raw) {
        auto d = weighted_degree(lambda, idx);
        if (d <= cap) all.emplace_back(std::move(d), std::move(idx));
    }
    std::sort(all.begin(), all.end(), [](const auto& a, const auto& b) {
        if (a.first != b.first) return a.first < b.first;
        return a.second < b.second;
    });
    RhoSequence seq{lambda, cap, {}};
    for (auto& [d, idx] : all) {
        if (seq.entries.empty() || seq.entries.back().rho != d) seq.entries.push_back({d, {}});
        seq.entries.back().indices.push_back(std::move(idx));
    }
    return seq;
}

CountBelow count_below(const Lambda& lambda, int j) {
    CountBelow out;
    require(j >= 0, "count_below needs j >= 0");
    auto seq = enumerate_rho(lambda, lambda.constant(Rational(j)));
    for (const auto& e : seq.entries) out.count += e.indices.size();

    auto one = lambda.constant(Rational(1));
    out.bound = 1;
    for (int i = 0; i < lambda.n(); ++i) {
        // largest m with lambda_i * m <= 1
        auto m = static_cast<std::int64_t>(std::floor(1.0 / lambda.approx(i)));
        while (m > 0 && lambda.entry(i) * m > one) --m;
        while (lambda.entry(i) * (m + 1) <= one) ++m;
        out.bound *= BigInt(j) * m + j + 1;
    }
    return out;
}

// ---------------------------------------------------------------- Z-dependence

DependenceVerdict is_z_dependent(const Lambda& lambda) {
    const int n = lambda.n();
    const std::size_t rows = lambda.rank();
    // columns = entries, rows = coordinates; integer kernel <=> Z-relation
    std::vector<std::vector<BigRational>> a(rows, std::vector<BigRational>(n));
    for (int j = 0; j < n; ++j)
        for (std::size_t i = 0; i < rows; ++i) {
            const auto& q = lambda.entry(j).coords()[i];
            a[i][j] = BigRational(q.numerator()) / BigRational(q.denominator());
        }

    std::vector<int> pivot_col;
    std::size_t r = 0;
    for (int c = 0; c < n && r < rows; ++c) {
        std::size_t p = r;
        while (p < rows && a[p][c] == 0) ++p;
        if (p == rows) continue;
        std::swap(a[p], a[r]);
        BigRational inv = BigRational(1) / a[r][c];
        for (int cc = 0; cc < n; ++cc) a[r][cc] *= inv;
        for (std::size_t rr = 0; rr < rows; ++rr) {
            if (rr == r || a[rr][c] == 0) continue;
            BigRational f = a[rr][c];
            for (int cc = 0; cc < n; ++cc) a[rr][cc] -= f * a[r][cc];
        }
        pivot_col.push_back(c);
        ++r;
    }

    DependenceVerdict v;
    v.gamma = lambda.zero();
    if (static_cast<int>(pivot_col.size()) == n) return v;

    std::vector<bool> is_pivot(n, false);
    for (int c : pivot_col) is_pivot[c] = true;

    // one kernel vector per free column; keep the one with smallest l1 norm
    std::vector<BigInt> best;
    BigInt best_norm = -1;
    for (int f = 0; f < n; ++f) {
        if (is_pivot[f]) continue;
        std::vector<BigRational> x(n, BigRational(0));
        x[f] = 1;
        for (std::size_t i = 0; i < pivot_col.size(); ++i) x[pivot_col[i]] = -a[i][f];
        BigInt l = 1;
        for (const auto& q : x) l = boost::multiprecision::lcm(l, boost::multiprecision::denominator(q));
        std::vector<BigInt> z(n);
        BigInt g = 0;
        for (int i = 0; i < n; ++i) {
            z[i] = boost::multiprecision::numerator(x[i] * BigRational(l));
            g = boost::multiprecision::gcd(g, z[i]);
        }
        if (g < 0) g = -g;
        for (auto& zi : z) zi /= g;
        for (auto& zi : z)
            if (zi != 0) {
                if (zi < 0)
                    for (auto& w : z) w = -w;
                break;
            }
        BigInt norm = 0;
        for (const auto& zi : z) norm += zi < 0 ? BigInt(-zi) : zi;
        if (best_norm < 0 || norm < best_norm) {
            best = z;
            best_norm = norm;
        }
    }

    v.dependent = true;
    v.alpha.assign(n, 0);
    v.beta.assign(n, 0);
    for (int i = 0; i < n; ++i) {
        if (best[i] > BigInt(std::numeric_limits<std::int64_t>::max()) ||
            best[i] < BigInt(std::numeric_limits<std::int64_t>::min()))
            throw NumericError("integer relation exceeds 64-bit range");
        auto zi = best[i].convert_to<std::int64_t>();
        if (zi > 0) v.alpha[i] = zi;
        if (zi < 0) v.beta[i] = -zi;
    }
    for (int i = 0; i < n; ++i)
        if (v.alpha[i] > 0) v.permutation.push_back(i);
    v.first_group = static_cast<int>(v.permutation.size());
    for (int i = 0; i < n; ++i)
        if (v.beta[i] > 0) v.permutation.push_back(i);
    v.second_group = static_cast<int>(v.permutation.size()) - v.first_group;
    for (int i = 0; i < n; ++i)
        if (v.alpha[i] == 0 && v.beta[i] == 0) v.permutation.push_back(i);

    auto g = lambda.zero();
    for (int i = 0; i < n; ++i)
        if (v.alpha[i] > 0) g = g + lambda.entry(i) * v.alpha[i];
    v.gamma = g;
    return v;
}

// ---------------------------------------------------------------- root test

ConvergenceVerdict root_test(const std::vector<std::pair<double, std::complex<double>>>& terms,
                             const RootTestOptions& opt) {
    if (terms.empty()) throw DomainError("root test on empty input");
    for (std::size_t i = 1; i < terms.size(); ++i)
        require(terms[i].first > terms[i - 1].first, "rho values must be strictly increasing");
    std::vector<double> r;
    for (const auto& [rho, a] : terms)
        if (rho > 0) r.push_back(std::pow(std::abs(a), 1.0 / rho));
    ConvergenceVerdict v;
    if (!r.empty()) {
        std::size_t w = opt.window == 0 ? (r.size() + 1) / 2 : std::min(opt.window, r.size());
        v.window = w;
        v.r_hat = *std::max_element(r.end() - static_cast<std::ptrdiff_t>(w), r.end());
    }
    if (v.r_hat < 1.0 - opt.delta) v.kind = Convergence::Converges;
    else if (v.r_hat > 1.0 + opt.delta) v.kind = Convergence::Diverges;
    else v.kind = Convergence::Inconclusive;
    return v;
}

ConvergenceVerdict root_test(const std::vector<std::pair<WeightedDegree, std::complex<double>>>& terms,
                             const RootTestOptions& opt) {
    for (std::size_t i = 1; i < terms.size(); ++i)
        require(terms[i - 1].first < terms[i].first, "rho values must be strictly increasing");
    std::vector<std::pair<double, std::complex<double>>> t;
    t.reserve(terms.size());
    for (const auto& [rho, a] : terms) t.emplace_back(rho.is_zero() ? 0.0 : rho.value(), a);
    return root_test(t, opt);
}

const char* to_string(Convergence c) {
    switch (c) {
        case Convergence::Converges: return "Converges";
        case Convergence::Diverges: return "Diverges";
        default: return "Inconclusive";
    }
}

}  // namespace qhflow
