#pragma once

#include "qhflow/weights.hpp"

#include <complex>
#include <map>
#include <utility>
#include <vector>

namespace qhflow {

using cplx = std::complex<double>;
using Point = std::vector<cplx>;

struct MonoKey {
    MultiIndex k;  // holomorphic exponents
    MultiIndex m;  // antiholomorphic exponents
    auto operator<=>(const MonoKey&) const = default;
};

/*
 * Finitely supported sum of c * z^k * conj(z)^m.  Terms kept in
 * lexicographic (k, m) order; zero coefficients are never stored.
 */
class MixedPolynomial {
public:
    MixedPolynomial() = default;
    explicit MixedPolynomial(int n) : n_(n) {}

    static MixedPolynomial monomial(const MultiIndex& k, const MultiIndex& m, cplx c = 1.0);
    static MixedPolynomial holomorphic(const MultiIndex& k, cplx c = 1.0);
    static MixedPolynomial constant(int n, cplx c);

    int n() const { return n_; }
    const std::map<MonoKey, cplx>& terms() const { return terms_; }
    std::size_t size() const { return terms_.size(); }
    bool empty() const { return terms_.empty(); }

    void add(const MultiIndex& k, const MultiIndex& m, cplx c);
    void add_holomorphic(const MultiIndex& k, cplx c);
    cplx coeff(const MultiIndex& k, const MultiIndex& m) const;

    cplx operator()(const Point& z) const;

    MixedPolynomial operator+(const MixedPolynomial& o) const;
    MixedPolynomial operator-(const MixedPolynomial& o) const;
    MixedPolynomial operator*(const MixedPolynomial& o) const;
    MixedPolynomial operator*(cplx s) const;
    MixedPolynomial pow(int e) const;

    bool operator==(const MixedPolynomial& o) const { return n_ == o.n_ && terms_ == o.terms_; }

    bool is_holomorphic() const;
    int degree() const;                // max |k|+|m|
    double coefficient_norm() const;   // l2 over coefficients
    double coefficient_l1() const;

    // drop |c| <= tol
    MixedPolynomial pruned(double tol) const;

private:
    int n_ = 0;
    std::map<MonoKey, cplx> terms_;
};

// z^k conj(z)^m, fixed multiplication order
cplx monomial_value(const MultiIndex& k, const MultiIndex& m, const Point& z);
cplx holomorphic_monomial(const MultiIndex& k, const Point& z);

struct QHComponent {
    MixedPolynomial poly;
    WeightedDegree d1;
    WeightedDegree d2;
    Lambda lambda;
};

// holomorphic block of bidegree (rho, 0)
struct HoloQHPolynomial {
    MixedPolynomial poly;
    WeightedDegree rho;

    cplx operator()(const Point& z) const { return poly(z); }
};

using TaylorJet = MixedPolynomial;

Point flow_map(const Lambda& lambda, const Point& z, cplx t);

std::vector<QHComponent> bidegree_decompose(const MixedPolynomial& p, const Lambda& lambda);

// the component's bidegree is taken as given (no re-check): used to catch mis-tags
double flow_equivariance_residual(const QHComponent& q, const Point& z, cplx t);
double equivariance_tolerance(const QHComponent& q, const Point& z, cplx t);

struct AsymptoticRow {
    WeightedDegree mu;
    WeightedDegree nu;
    cplx coeff;
};

struct AsymptoticTerm {
    WeightedDegree rho;
    std::vector<AsymptoticRow> rows;
};

std::vector<AsymptoticTerm> taylor_to_asymptotic(const TaylorJet& jet, const Lambda& lambda, const Point& z);

std::vector<HoloQHPolynomial> series_decompose(const MixedPolynomial& f, const Lambda& lambda);

double bernstein_walsh_residual(const MixedPolynomial& q, double r, double normK, const Point& z);

double norm(const Point& z);

// q((z - center) / scale) expanded in z; q holomorphic
MixedPolynomial affine_substitute(const MixedPolynomial& q, const Point& center, double scale);

}  // namespace qhflow
