#include "qhflow/extremal.hpp"

#include "qhflow/error.hpp"
#include "qhflow/parallel.hpp"
#include "qhflow/simplex.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <set>

namespace qhflow {

namespace {

constexpr double kPi = std::numbers::pi;

void all_indices(int n, int d, MultiIndex& cur, int pos, std::vector<MultiIndex>& out) {
    if (pos == n - 1) {
        cur[pos] = d;
        out.push_back(cur);
        return;
    }
    for (int e = d; e >= 0; --e) {
        cur[pos] = e;
        all_indices(n, d - e, cur, pos + 1, out);
    }
}

// every exponent of total degree <= d, by degree then lex descending
std::vector<MultiIndex> full_basis(int n, int d) {
    std::vector<MultiIndex> out;
    MultiIndex cur(n, 0);
    for (int k = 0; k <= d; ++k) all_indices(n, k, cur, 0, out);
    return out;
}

double mesh_of(const SampledSet& E, const ExtremalOptions& opt) {
    double h = opt.mesh > 0 ? opt.mesh : E.mesh();
    if (opt.mode == EstimateMode::CertifiedLower && !(h > 0))
        throw DomainError("certified mode needs a mesh size for the sample set");
    return h;
}

// certified rescale of (ratio, witness), then the level root
ExtremalEstimate finish(const ChebyshevResult& r, double level, const ExtremalOptions& opt, double h, double R) {
    ExtremalEstimate e;
    e.ratio = r.value;
    e.witness = r.witness;
    e.diag = r.diag;
    e.mode = opt.mode;
    if (opt.mode == EstimateMode::CertifiedLower) {
        e.mesh = h;
        e.gradient_bound = gradient_bound(e.witness, R);
        double f = 1.0 + e.gradient_bound * h;
        e.ratio /= f;
        e.witness = e.witness * cplx(1.0 / f);
    }
    e.value = e.ratio > 0 ? std::pow(e.ratio, 1.0 / level) : 0.0;
    return e;
}

}  // namespace

// ---------------------------------------------------------------- solver

void ChebyshevProblem::validate() const {
    require(!basis.empty(), "chebyshev problem: empty basis");
    require(!constraints.empty(), "chebyshev problem: empty constraint set");
    require(options.polygon_order >= 8, "chebyshev problem: polygon order must be >= 8");
    require(options.phase_count >= 1, "chebyshev problem: phase count must be positive");
    for (const auto& x : constraints) require(x.size() == target.size(), "chebyshev problem: dimension mismatch");
    for (const auto& k : basis) require(k.size() == target.size(), "chebyshev problem: basis dimension mismatch");
}

ChebyshevSolver::ChebyshevSolver(const std::vector<Point>& constraints, std::vector<MultiIndex> basis, SolverOptions opt)
    : basis_(std::move(basis)), opt_(opt) {
    require(!basis_.empty(), "chebyshev solver: empty basis");
    require(!constraints.empty(), "chebyshev solver: empty constraint set");
    require(opt_.polygon_order >= 8, "chebyshev solver: polygon order must be >= 8");
    n_ = static_cast<int>(basis_.front().size());
    const auto N = static_cast<Eigen::Index>(constraints.size());
    const auto M = static_cast<Eigen::Index>(basis_.size());
    A_.resize(N, M);
    scale_.resize(M);
    for (Eigen::Index b = 0; b < M; ++b) {
        double s = 0.0;
        for (Eigen::Index i = 0; i < N; ++i) {
            A_(i, b) = holomorphic_monomial(basis_[b], constraints[i]);
            s = std::max(s, std::abs(A_(i, b)));
        }
        scale_(b) = s > 0 ? s : 1.0;
        A_.col(b) /= scale_(b);
    }
}

ChebyshevResult ChebyshevSolver::solve(const Point& z0) const {
    require(static_cast<int>(z0.size()) == n_, "chebyshev solver: target dimension mismatch");
    const Eigen::Index N = A_.rows(), M = A_.cols();
    const int p = opt_.polygon_order;
    Eigen::VectorXcd w(M);
    for (Eigen::Index b = 0; b < M; ++b) w(b) = holomorphic_monomial(basis_[b], z0) / scale_(b);

    ChebyshevResult best;
    best.witness = MixedPolynomial(n_);
    if (w.cwiseAbs().maxCoeff() == 0.0) {
        best.diag.status = "trivial";
        return best;
    }

    // objective phases equivalent under the polygon's rotation symmetry are solved once
    std::vector<int> ks;
    std::set<long> seen;
    for (int k = 0; k < opt_.phase_count; ++k)
        if (seen.insert((static_cast<long>(k) * p) % opt_.phase_count).second) ks.push_back(k);

    bool first = true;
    for (int k : ks) {
        cplx rot = std::polar(1.0, 2 * kPi * k / opt_.phase_count);
        Eigen::VectorXd g(2 * M);
        for (Eigen::Index b = 0; b < M; ++b) {
            cplx v = rot * w(b);
            g(b) = v.real();
            g(M + b) = -v.imag();
        }

        int tangent_used = 0;
        const int tangent_limit = opt_.refine ? 20 + 8 * static_cast<int>(M) : 0;
        auto column_for = [&](Eigen::Index i, cplx e, double reduced, long key) {
            LPColumn c;
            c.a.resize(2 * M);
            for (Eigen::Index b = 0; b < M; ++b) {
                cplx v = e * A_(i, b);
                c.a(b) = v.real();
                c.a(M + b) = -v.imag();
            }
            c.cost = 1.0;
            c.reduced = reduced;
            c.key = key;
            return c;
        };
        Pricer price = [&](const Eigen::VectorXd& x, bool bland) -> std::optional<LPColumn> {
            Eigen::VectorXcd c(M);
            for (Eigen::Index b = 0; b < M; ++b) c(b) = cplx(x(b), x(M + b));
            Eigen::VectorXcd q = A_ * c;
            const double tol = 1e-10;
            if (bland) {
                for (Eigen::Index i = 0; i < N; ++i)
                    for (int j = 0; j < p; ++j) {
                        cplx e = std::polar(1.0, 2 * kPi * j / p);
                        double r = 1.0 - (e * q(i)).real();
                        if (r < -tol * std::max(1.0, std::abs(q(i)))) return column_for(i, e, r, static_cast<long>(i) * p + j);
                    }
            } else {
                double best_r = 0.0;
                Eigen::Index bi = -1;
                int bj = 0;
                for (Eigen::Index i = 0; i < N; ++i) {
                    double mag = std::abs(q(i));
                    if (1.0 - mag >= std::min(best_r, -tol * std::max(1.0, mag))) continue;
                    double a = std::arg(q(i));
                    long j = std::lround(-a * p / (2 * kPi));
                    j = ((j % p) + p) % p;
                    double r = 1.0 - mag * std::cos(a + 2 * kPi * j / p);
                    if (r < std::min(best_r, -tol * std::max(1.0, mag))) {
                        best_r = r;
                        bi = i;
                        bj = static_cast<int>(j);
                    }
                }
                if (bi >= 0)
                    return column_for(bi, std::polar(1.0, 2 * kPi * bj / p), best_r, static_cast<long>(bi) * p + bj);
            }
            if (tangent_used >= tangent_limit) return std::nullopt;
            Eigen::Index im = 0;
            double mag = q.cwiseAbs().maxCoeff(&im);
            if (mag <= 1.0 + 1e-9) return std::nullopt;
            ++tangent_used;
            return column_for(im, std::conj(q(im)) / mag, 1.0 - mag, static_cast<long>(N) * p + tangent_used);
        };

        LPOptions lpo;
        lpo.box = opt_.box;
        lpo.max_iter = opt_.max_iter;
        LPResult lp = solve_boxed_dual(g, price, lpo);

        Eigen::VectorXcd c(M);
        for (Eigen::Index b = 0; b < M; ++b) c(b) = cplx(lp.x(b), lp.x(M + b));
        double sup = (A_ * c).cwiseAbs().maxCoeff();
        double qz = std::abs(w.cwiseProduct(c).sum());
        // exactly vanishing on the samples: floor at rounding level of the coefficients
        double denom = std::max(sup, 1e-13 * c.cwiseAbs().sum());
        double value = qz / denom;

        best.diag.iterations += lp.iterations;
        best.diag.lp_solves += 1;
        best.diag.saturated = best.diag.saturated || (lp.box_active && lp.status == LPStatus::Optimal);
        if (lp.status == LPStatus::IterationLimit) best.diag.status = "iteration-limit";
        if (first || value > best.value) {
            first = false;
            best.value = value;
            best.diag.sampled_sup = sup;
            MixedPolynomial q(n_);
            for (Eigen::Index b = 0; b < M; ++b) q.add_holomorphic(basis_[b], c(b) / (scale_(b) * denom));
            best.witness = std::move(q);
        }
    }
    return best;
}

ChebyshevResult cheby_maximize(const ChebyshevProblem& problem) {
    problem.validate();
    // a monomial vanishing on every constraint but not at the target: unbounded
    for (const auto& k : problem.basis) {
        if (holomorphic_monomial(k, problem.target) == cplx(0.0)) continue;
        bool zero = true;
        for (const auto& x : problem.constraints) zero = zero && holomorphic_monomial(k, x) == cplx(0.0);
        if (zero) throw NumericError("LP unbounded: basis monomial vanishes on every constraint sample");
    }
    return ChebyshevSolver(problem.constraints, problem.basis, problem.options).solve(problem.target);
}

double gradient_bound(const MixedPolynomial& q, double R) {
    double G = 0.0;
    for (const auto& [key, c] : q.terms()) {
        int d = 0;
        for (std::size_t i = 0; i < key.k.size(); ++i) d += key.k[i] + key.m[i];
        if (d > 0) G += std::abs(c) * d * std::pow(R, d - 1);
    }
    return G;
}

// ---------------------------------------------------------------- psi / green

PsiEstimator::PsiEstimator(const SampledSet& E, const Lambda& lambda, const WeightedDegree& rho_cap, ExtremalOptions opt)
    : opt_(opt), n_(lambda.n()) {
    require(!E.empty(), "psi estimate: empty sample set");
    require(E.n() == lambda.n(), "psi estimate: set and lambda dimensions differ");
    h_ = mesh_of(E, opt_);
    R_ = E.max_norm() + h_;
    auto seq = enumerate_rho(lambda, rho_cap);
    for (const auto& entry : seq.entries) {
        if (entry.rho.is_zero()) continue;
        levels_.push_back({entry.rho, ChebyshevSolver(E.points(), entry.indices, opt_.solver)});
    }
}

std::vector<ExtremalEstimate> PsiEstimator::levels(const Point& z0) const {
    require(static_cast<int>(z0.size()) == n_, "psi estimate: point dimension mismatch");
    std::vector<ExtremalEstimate> out;
    for (const auto& L : levels_) {
        auto e = finish(L.solver.solve(z0), L.rho.value(), opt_, h_, R_);
        e.rho = L.rho;
        out.push_back(std::move(e));
    }
    return out;
}

ExtremalEstimate PsiEstimator::at(const Point& z0) const {
    auto all = levels(z0);
    ExtremalEstimate best;
    best.mode = opt_.mode;
    best.witness = MixedPolynomial(n_);
    SolverDiagnostics agg;
    bool any = false;
    for (auto& e : all) {
        agg.iterations += e.diag.iterations;
        agg.lp_solves += e.diag.lp_solves;
        if (e.diag.status != "optimal" && e.diag.status != "trivial") agg.status = e.diag.status;
        if (!any || e.value > best.value) {
            best = e;
            any = true;
        }
    }
    best.diag.iterations = agg.iterations;
    best.diag.lp_solves = agg.lp_solves;
    if (agg.status != "optimal") best.diag.status = agg.status;
    return best;
}

GreenEstimator::GreenEstimator(const SampledSet& E, int degree_cap, ExtremalOptions opt) : opt_(opt), n_(E.n()) {
    require(!E.empty(), "green estimate: empty sample set");
    require(degree_cap >= 1, "green estimate: degree cap must be >= 1");
    h_ = mesh_of(E, opt_);
    R_ = E.max_norm() + h_;
    center_.assign(n_, 0.0);
    for (const auto& x : E.points())
        for (int i = 0; i < n_; ++i) center_[i] += x[i];
    for (auto& c : center_) c /= static_cast<double>(E.size());
    scale_ = 0.0;
    std::vector<Point> ys;
    for (const auto& x : E.points()) {
        Point y(n_);
        for (int i = 0; i < n_; ++i) y[i] = x[i] - center_[i];
        scale_ = std::max(scale_, norm(y));
        ys.push_back(std::move(y));
    }
    if (!(scale_ > 0)) scale_ = 1.0;
    for (auto& y : ys)
        for (auto& c : y) c /= scale_;
    for (int d = 1; d <= degree_cap; ++d) solvers_.emplace_back(ys, full_basis(n_, d), opt_.solver);
}

std::vector<ExtremalEstimate> GreenEstimator::levels(const Point& z0) const {
    require(static_cast<int>(z0.size()) == n_, "green estimate: point dimension mismatch");
    Point y(n_);
    for (int i = 0; i < n_; ++i) y[i] = (z0[i] - center_[i]) / scale_;
    std::vector<ExtremalEstimate> out;
    for (std::size_t d = 0; d < solvers_.size(); ++d) {
        auto r = solvers_[d].solve(y);
        r.witness = affine_substitute(r.witness, center_, scale_);
        auto e = finish(r, static_cast<double>(d + 1), opt_, h_, R_);
        e.degree = static_cast<int>(d + 1);
        out.push_back(std::move(e));
    }
    return out;
}

ExtremalEstimate GreenEstimator::at(const Point& z0) const {
    auto all = levels(z0);
    ExtremalEstimate best;
    best.mode = opt_.mode;
    best.value = 1.0;
    best.ratio = 1.0;
    best.degree = 0;
    best.witness = MixedPolynomial::constant(n_, 1.0);
    int iters = 0, solves = 0;
    std::string status = "optimal";
    for (auto& e : all) {
        iters += e.diag.iterations;
        solves += e.diag.lp_solves;
        if (e.diag.status != "optimal" && e.diag.status != "trivial") status = e.diag.status;
        if (e.value > best.value) best = e;
    }
    best.diag.iterations = iters;
    best.diag.lp_solves = solves;
    best.diag.status = status;
    return best;
}

ExtremalEstimate psi_estimate(const SampledSet& E, const Lambda& lambda, const Point& z0, const WeightedDegree& rho_cap,
                              const ExtremalOptions& opt) {
    return PsiEstimator(E, lambda, rho_cap, opt).at(z0);
}

ExtremalEstimate green_estimate(const SampledSet& E, const Point& z0, int degree_cap, const ExtremalOptions& opt) {
    return GreenEstimator(E, degree_cap, opt).at(z0);
}

// ---------------------------------------------------------------- capacity, hull

CapacityEstimate capacity(const SampledSet& E, const Lambda& lambda, const SampledSet& sphere_grid,
                          const WeightedDegree& rho_cap, const ExtremalOptions& opt) {
    if (!sphere_grid.on_sphere()) throw DomainError("capacity: grid is not flagged on-sphere");
    require(!sphere_grid.empty(), "capacity: empty sphere grid");
    PsiEstimator est(E, lambda, rho_cap, opt);
    const auto& pts = sphere_grid.points();
    std::vector<ExtremalEstimate> res(pts.size());
    parallel_for(pts.size(), [&](std::size_t i) { res[i] = est.at(pts[i]); });

    CapacityEstimate c;
    c.grid_size = pts.size();
    c.cap = rho_cap;
    std::size_t arg = 0;
    for (std::size_t i = 0; i < res.size(); ++i) {
        c.values.push_back(res[i].value);
        c.saturated = c.saturated || res[i].diag.saturated;
        if (res[i].value > res[arg].value) arg = i;
    }
    c.psi_sup = res[arg].value;
    c.argmax = pts[arg];
    if (!(c.psi_sup > 0)) throw NumericError("capacity: extremal estimate vanishes on the whole grid");
    c.rho_lambda = 1.0 / c.psi_sup;
    return c;
}

bool is_lambda_circular(const SampledSet& K, const Lambda& lambda, double tol) {
    require(K.n() == lambda.n(), "circularity check: dimension mismatch");
    const auto& pts = K.points();
    if (pts.empty()) return true;
    std::size_t stride = std::max<std::size_t>(1, pts.size() / 64);
    double scale = std::max(1.0, K.max_norm());
    for (std::size_t i = 0; i < pts.size(); i += stride) {
        for (int j = 1; j < 8; ++j) {
            Point y = flow_map(lambda, pts[i], cplx(0.0, 2 * kPi * j / 8));
            double best = std::numeric_limits<double>::infinity();
            for (const auto& x : pts) {
                double s = 0.0;
                for (std::size_t k = 0; k < x.size(); ++k) s += std::norm(x[k] - y[k]);
                best = std::min(best, s);
                if (best <= tol * tol * scale * scale) break;
            }
            if (std::sqrt(best) > tol * scale) return false;
        }
    }
    return true;
}

HullVerdict hull_membership(const SampledSet& K, const Lambda& lambda, const Point& z0, const WeightedDegree& rho_cap,
                            const ExtremalOptions& opt, bool check_circular) {
    if (check_circular && !is_lambda_circular(K, lambda)) throw DomainError("hull: K is not lambda-circular on samples");
    PsiEstimator est(K, lambda, rho_cap, opt);
    HullVerdict v;
    const ExtremalEstimate* strongest = nullptr;
    auto all = est.levels(z0);
    for (const auto& e : all) {
        v.psi = std::max(v.psi, e.value);
        if (e.value > 1 + 1e-6 && (!strongest || e.ratio > strongest->ratio)) strongest = &e;
    }
    v.inside = !(v.psi > 1 + 1e-6);
    if (strongest) {
        v.witness = strongest->witness;
        v.ratio = strongest->ratio;
    }
    return v;
}

// ---------------------------------------------------------------- sandwich

SandwichReport sandwich_check(const SampledSet& E, const Lambda& lambda, const std::vector<Point>& grid,
                              const WeightedDegree& rho_cap, int degree_cap, double slack, const ExtremalOptions& opt,
                              bool check_circular) {
    if (check_circular && !is_lambda_circular(E, lambda)) throw DomainError("sandwich: E is not lambda-circular on samples");
    PsiEstimator pe(E, lambda, rho_cap, opt);
    GreenEstimator ge(E, degree_cap, opt);
    SandwichReport rep;
    rep.slack = slack;
    rep.rows.resize(grid.size());
    parallel_for(grid.size(), [&](std::size_t i) {
        auto& r = rep.rows[i];
        r.z = grid[i];
        r.psi = pe.at(grid[i]).value;
        r.phi = ge.at(grid[i]).value;
        double m = std::max(1.0, r.psi);
        r.lower_gap = std::pow(m, lambda.min()) - r.phi;
        r.upper_gap = std::pow(r.phi, 1.0 / lambda.max()) - m;
        r.violation = r.lower_gap > slack || r.upper_gap > slack;
    });
    for (const auto& r : rep.rows) {
        rep.violations += r.violation ? 1 : 0;
        if (r.psi >= 1) rep.max_abs_diff = std::max(rep.max_abs_diff, std::abs(r.psi - r.phi));
    }
    return rep;
}

// ---------------------------------------------------------------- diagnostics

LRegReport l_regularity_estimate(const SampledSet& E, const Point& a, const std::vector<double>& radii, int degree_cap,
                                 int probes, const ExtremalOptions& opt) {
    require(static_cast<int>(a.size()) == E.n(), "l-regularity: point dimension mismatch");
    require(degree_cap >= 1 && probes >= 1, "l-regularity: bad cap or probe count");
    LRegReport rep;
    const int half = std::max(1, degree_cap / 2);
    bool growth = false, saturated = false, all_small = true;
    for (double r : radii) {
        LRegRow row;
        row.radius = r;
        SampledSet Er = E.within(a, r);
        row.samples = Er.size();
        if (Er.empty()) {
            row.skipped = true;
            rep.warnings.push_back("radius " + std::to_string(r) + ": no samples in the ball, skipped");
            rep.rows.push_back(row);
            continue;
        }
        ExtremalOptions o = opt;
        if (o.mode == EstimateMode::CertifiedLower && !(o.mesh > 0) && !(Er.mesh() > 0)) o.mesh = E.mesh();
        GreenEstimator ge(Er, degree_cap, o);
        double v = 0.0, vh = 0.0;
        for (int j = 0; j < probes; ++j) {
            Point z = a;
            z[0] += std::polar(r / 10, 2 * kPi * j / probes);
            auto lv = ge.levels(z);
            double full = 1.0, part = 1.0;
            for (std::size_t d = 0; d < lv.size(); ++d) {
                full = std::max(full, lv[d].value);
                if (static_cast<int>(d) + 1 <= half) part = std::max(part, lv[d].value);
                row.saturated = row.saturated || lv[d].diag.saturated;
            }
            v += std::log(full);
            vh += std::log(part);
        }
        row.v = v / probes;
        row.v_half = vh / probes;
        saturated = saturated || row.saturated;
        growth = growth || row.v > row.v_half + 0.05;
        all_small = all_small && row.v < 0.1;
        rep.rows.push_back(row);
    }
    if (saturated || growth)
        rep.verdict = "pluripolar signature";
    else if (all_small)
        rep.verdict = "consistent with local L-regularity at a";
    else
        rep.verdict = "inconclusive";
    return rep;
}

PluripolarReport pluripolar_diagnostic(const SampledSet& E, const Lambda& lambda, const std::vector<WeightedDegree>& caps,
                                       const SampledSet& sphere_grid, const ExtremalOptions& opt) {
    if (E.empty()) throw DomainError("pluripolar diagnostic: empty set");
    require(!caps.empty(), "pluripolar diagnostic: no caps");
    PluripolarReport rep;
    for (const auto& cap : caps) {
        auto c = capacity(E, lambda, sphere_grid, cap, opt);
        rep.caps.push_back(cap);
        rep.capacities.push_back(c.rho_lambda);
        rep.psi_sups.push_back(c.psi_sup);
        rep.saturated.push_back(c.saturated);
    }
    bool sat = std::any_of(rep.saturated.begin(), rep.saturated.end(), [](bool b) { return b; });
    const auto& cs = rep.capacities;
    bool decaying = cs.size() >= 2 && cs.back() < 0.5 * cs.front();
    for (std::size_t i = 1; i < cs.size(); ++i) decaying = decaying && cs[i] <= cs[i - 1] * (1 + 1e-9);
    bool stable = cs.size() >= 2 ? std::abs(cs.back() - cs[cs.size() - 2]) <= 0.05 * cs.back() : cs.back() > 0.05;
    if (sat || decaying || cs.back() < 1e-3)
        rep.verdict = "lambda-pluripolar signature";
    else if (stable && cs.back() > 0.05)
        rep.verdict = "nonpluripolar signature";
    else
        rep.verdict = "inconclusive";
    return rep;
}

const char* to_string(EstimateMode m) {
    return m == EstimateMode::CertifiedLower ? "CertifiedLower" : "SampleEstimate";
}

}  // namespace qhflow
