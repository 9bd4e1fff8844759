#include "qhflow/series.hpp"

#include "qhflow/error.hpp"
#include "qhflow/parallel.hpp"

#include <boost/integer/common_factor.hpp>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

namespace qhflow {

namespace {
constexpr double kPi = std::numbers::pi;
}

void FormalSeries::validate() const {
    for (std::size_t i = 0; i < blocks.size(); ++i) {
        const auto& b = blocks[i];
        require(b.poly.empty() || b.poly.n() == lambda.n(), "series block dimension does not match lambda");
        require(b.poly.is_holomorphic(), "series blocks must be holomorphic");
        for (const auto& [key, c] : b.poly.terms())
            require(weighted_degree(lambda, key.k) == b.rho, "series block is not quasi-homogeneous of its degree");
        if (i > 0) require(blocks[i - 1].rho < b.rho, "series rho values must be strictly increasing");
    }
}

FormalSeries FormalSeries::from_polynomial(const MixedPolynomial& f, const Lambda& lambda, std::size_t M) {
    FormalSeries S{lambda, series_decompose(f, lambda), M};
    S.validate();
    return S;
}

// ---------------------------------------------------------------- evaluation

DirichletResult dirichlet_eval(const FormalSeries& S, const Point& z, cplx t) {
    if (!(t.real() > 0)) throw DomainError("dirichlet_eval: Re t must be positive");
    require(!S.blocks.empty(), "dirichlet_eval: empty series");
    DirichletResult r;
    std::vector<std::pair<WeightedDegree, cplx>> rt;
    cplx s = 0.0;
    for (std::size_t m = 0; m < S.truncation(); ++m) {
        const auto& b = S.blocks[m];
        cplx term = b(z) * std::exp(-b.rho.value() * t);
        s += term;
        r.terms.push_back(term);
        r.partial_sums.push_back(s);
        rt.emplace_back(b.rho, term);
    }
    r.verdict = root_test(rt);
    if (r.terms.size() == 1) r.verdict.kind = Convergence::Converges;  // a single block is a finite sum
    return r;
}

RegionEstimate convergence_region(const FormalSeries& S, const std::vector<Point>& grid, std::size_t window,
                                  double delta) {
    const std::size_t M = S.truncation();
    std::size_t nonconst = 0;
    for (std::size_t m = 0; m < M; ++m) nonconst += S.blocks[m].rho.is_zero() ? 0 : 1;
    if (nonconst < 4) throw DomainError("convergence_region: need at least 4 blocks");
    RegionEstimate R;
    R.kind = "convergence";
    R.grid = grid;
    R.delta = delta;
    R.M = M;
    R.window = window == 0 ? (nonconst + 1) / 2 : std::min(window, nonconst);
    R.values.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        std::vector<double> r;
        for (std::size_t m = 0; m < M; ++m) {
            const auto& b = S.blocks[m];
            if (b.rho.is_zero()) continue;
            r.push_back(std::pow(std::abs(b(grid[i])), 1.0 / b.rho.value()));
        }
        R.values[i] = *std::max_element(r.end() - static_cast<std::ptrdiff_t>(R.window), r.end());
    });
    for (double v : R.values) R.inside.push_back(v < 1 - delta);
    return R;
}

// ---------------------------------------------------------------- regions

CapacityBall omega_from_capacity(const SampledSet& F, const Lambda& lambda, const std::vector<WeightedDegree>& caps,
                                 const SampledSet& sphere_grid, const TGrid& tgrid, const ExtremalOptions& opt) {
    require(!F.empty(), "omega_from_capacity: empty F");
    require(!caps.empty(), "omega_from_capacity: no caps");
    SampledSet E = Suspension{lambda, F, tgrid}.leaf_samples();
    CapacityBall out;
    for (const auto& cap : caps) {
        auto c = capacity(E, lambda, sphere_grid, cap, opt);
        out.caps.push_back(cap);
        out.rho_hat.push_back(c.rho_lambda);
        out.radius.push_back(std::min(1.0, std::pow(c.rho_lambda, lambda.max())));
        out.saturated.push_back(c.saturated);
    }
    return out;
}

Point z_lambda(const Point& z, const Lambda& lambda) {
    require(static_cast<int>(z.size()) == lambda.n(), "z_lambda: dimension mismatch");
    double r = norm(z);
    if (!(r > 0)) throw DomainError("z_lambda undefined at the origin");
    Point w(z.size());
    for (int k = 0; k < lambda.n(); ++k) w[k] = z[k] * std::pow(r, -lambda.approx(k) / lambda.max());
    return w;
}

RegionEstimate omega_prime(const SampledSet& F, const Lambda& lambda, const std::vector<Point>& grid, int degree_cap,
                           const TGrid& tgrid, const ExtremalOptions& opt, double delta) {
    for (const auto& z : grid)
        if (!(norm(z) > 0)) throw DomainError("omega_prime: grid contains the origin");
    SampledSet E = Suspension{lambda, F, tgrid}.leaf_samples();
    GreenEstimator ge(E, degree_cap, opt);
    RegionEstimate R;
    R.kind = "omega_prime";
    R.grid = grid;
    R.delta = delta;
    R.values.resize(grid.size());
    const double ex = lambda.min() / lambda.max();
    parallel_for(grid.size(), [&](std::size_t i) {
        R.values[i] = std::pow(norm(grid[i]), ex) * ge.at(z_lambda(grid[i], lambda)).value;
    });
    for (double v : R.values) R.inside.push_back(v < 1 - delta);
    return R;
}

RegionEstimate omega_hat(const SampledSet& base, const SampledSet& extra, const Lambda& lambda,
                         const std::vector<Point>& grid, const WeightedDegree& rho_cap, const ExtremalOptions& opt,
                         double delta) {
    SampledSet E = extra.empty() ? base : base.united(extra);
    PsiEstimator pe(E, lambda, rho_cap, opt);
    RegionEstimate R;
    R.kind = "omega_hat";
    R.grid = grid;
    R.delta = delta;
    R.values.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) { R.values[i] = pe.at(grid[i]).value; });
    // constrained points sit at psi = 1 up to noise: the margin is taken upward here
    for (double v : R.values) R.inside.push_back(v < 1 + delta);
    return R;
}

// ---------------------------------------------------------------- divergent construction

DivergentFamily builtin_divergent_family(int count, int k_samples) {
    require(count >= 1 && k_samples >= 1, "builtin family: bad sizes");
    DivergentFamily fam{Lambda::integers({1, 1}), {}, {1.0, 0.0}, {}};
    MixedPolynomial lin = MixedPolynomial::holomorphic({1, 0}) - MixedPolynomial::holomorphic({0, 1});
    MixedPolynomial p = MixedPolynomial::constant(2, 1.0);
    for (int m = 1; m <= count; ++m) {
        p = p * lin;
        fam.p_seq.push_back({p, fam.lambda.constant(Rational(m))});
    }
    CircleFamily cf{{1 / std::sqrt(2.0), 1 / std::sqrt(2.0)}, {1, 1}, {0.0, 0.0}, k_samples};
    auto d = std::make_shared<Descriptor>(Descriptor{cf});
    SampledSet K = SampledSet::from(*d, true);
    for (int m = 1; m <= count; ++m) fam.K.push_back(K);
    return fam;
}

DivergentSeries build_divergent_series(const std::vector<HoloQHPolynomial>& p_seq, const Lambda& lambda, const Point& a,
                                       const std::vector<SampledSet>& K_family, int k_max, int check) {
    require(static_cast<int>(a.size()) == lambda.n(), "divergent series: point dimension mismatch");
    DivergentSeries out{FormalSeries{lambda, {}, p_seq.size()}, {}, {}, 0.0, false};
    std::size_t next = 0;
    std::ostringstream fail;
    for (std::size_t m = 1; m <= K_family.size() && next < p_seq.size(); ++m) {
        const double bound = 1.0 / (static_cast<double>(m) * m);
        bool found = false;
        for (; next < p_seq.size(); ++next) {
            const auto& p = p_seq[next];
            require(!p.rho.is_zero(), "divergent series: p with rho = 0");
            cplx pa = p(a);
            if (std::abs(pa) == 0.0) continue;
            double sup = 0.0;
            for (const auto& x : K_family[m - 1].points()) sup = std::max(sup, std::abs(p(x)));
            double s = std::pow(sup, 1.0 / p.rho.value());
            if (s > bound) {
                fail.str("");
                fail << "index " << next << ": sup^(1/rho) = " << s << " exceeds 1/m^2 = " << bound;
                continue;
            }
            if (!out.series.blocks.empty()) require(out.series.blocks.back().rho < p.rho, "p_seq must have increasing rho");
            double scale = std::pow(static_cast<double>(m), p.rho.value());
            out.series.blocks.push_back({p.poly * cplx(scale / pa), p.rho});
            out.selected.push_back(static_cast<int>(next));
            ++next;
            found = true;
            break;
        }
        if (!found) break;
    }
    if (out.series.blocks.empty())
        throw DomainError("divergent series: no valid subsequence" + (fail.str().empty() ? "" : " (" + fail.str() + ")"));
    out.series.M = out.series.blocks.size();

    for (int k = 1; k <= k_max; ++k) {
        Point b(a.size());
        for (int i = 0; i < lambda.n(); ++i) b[i] = a[i] / std::pow(static_cast<double>(k), lambda.approx(i));
        out.b.push_back(std::move(b));
    }
    for (int k = 1; k <= std::min(check, k_max); ++k)
        for (std::size_t m = 1; m <= std::min<std::size_t>(check, out.series.blocks.size()); ++m) {
            const auto& q = out.series.blocks[m - 1];
            double want = std::pow(static_cast<double>(m) / k, q.rho.value());
            double got = std::abs(q(out.b[k - 1]) - want);
            out.max_rel_error = std::max(out.max_rel_error, got / want);
        }
    out.verified = out.max_rel_error <= 1e-9;
    return out;
}

// ---------------------------------------------------------------- coefficient bound

TGrid exact_leaf_grid(const FormalSeries& S) {
    require(S.lambda.is_rational(), "exact leaf grid needs rational lambda");
    require(!S.blocks.empty(), "exact leaf grid: empty series");
    std::int64_t D = 1;
    for (const auto& b : S.blocks) D = boost::integer::lcm(D, b.rho.coords()[0].denominator());
    double span = (S.blocks.back().rho.value() - S.blocks.front().rho.value()) * static_cast<double>(D);
    TGrid g;
    g.re = {0.0};
    g.im_period = 2 * kPi * static_cast<double>(D);
    g.im_count = static_cast<int>(std::ceil(span)) + 2;
    return g;
}

CoefficientBound coefficient_bound(const FormalSeries& S, const Point& z, const TGrid& grid) {
    CoefficientBound cb;
    std::vector<cplx> qz;
    for (std::size_t m = 0; m < S.truncation(); ++m) {
        qz.push_back(S.blocks[m](z));
        cb.block_abs.push_back(std::abs(qz.back()));
    }
    for (double a : grid.re)
        for (int j = 0; j < grid.im_count; ++j) {
            cplx t(a, grid.im_period * j / grid.im_count);
            cplx s = 0.0;
            for (std::size_t m = 0; m < qz.size(); ++m) s += qz[m] * std::exp(-S.blocks[m].rho.value() * t);
            cb.leaf_sup = std::max(cb.leaf_sup, std::abs(s));
        }
    for (double v : cb.block_abs) cb.worst_ratio = std::max(cb.worst_ratio, cb.leaf_sup > 0 ? v / cb.leaf_sup : (v > 0 ? INFINITY : 0.0));
    return cb;
}

}  // namespace qhflow
