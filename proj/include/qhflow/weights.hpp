#pragma once

#include <boost/multiprecision/cpp_int.hpp>
#include <boost/rational.hpp>

#include <complex>
#include <cstdint>
#include <memory>
#include <string>
#include <utility>
#include <vector>

// boost 1.74 rational vs int comparisons recurse under C++20 rewritten operators
namespace boost {
inline bool operator==(const rational<std::int64_t>& a, int b) { return a == rational<std::int64_t>(b); }
inline bool operator<(const rational<std::int64_t>& a, int b) { return a < rational<std::int64_t>(b); }
inline bool operator>(const rational<std::int64_t>& a, int b) { return a > rational<std::int64_t>(b); }
inline bool operator<(int b, const rational<std::int64_t>& a) { return rational<std::int64_t>(b) < a; }
inline bool operator>(int b, const rational<std::int64_t>& a) { return rational<std::int64_t>(b) > a; }
}  // namespace boost

namespace qhflow {

using Rational = boost::rational<std::int64_t>;
using BigInt = boost::multiprecision::cpp_int;
using MultiIndex = std::vector<int>;

/*
 * Basis (1, tau_1, ..., tau_r) of a Q-vector space; the tau are declared
 * irrational by the caller and only their approximations are stored.
 */
struct NumberBasis {
    std::vector<std::string> names;   // r names
    std::vector<double> approx;       // r approximations

    std::size_t rank() const { return names.size() + 1; }
    bool operator==(const NumberBasis&) const = default;
};

/*
 * Exact element sum c_i * basis_i.  c[0] is the rational part.
 * Equality is coordinate-wise; ordering is (approx value, coords lex).
 */
class WeightedDegree {
public:
    WeightedDegree() = default;
    WeightedDegree(std::vector<Rational> coords, std::shared_ptr<const NumberBasis> basis);

    static WeightedDegree zero(std::shared_ptr<const NumberBasis> basis);
    static WeightedDegree rational(Rational q, std::shared_ptr<const NumberBasis> basis);

    const std::vector<Rational>& coords() const { return c_; }
    double value() const { return v_; }
    const std::shared_ptr<const NumberBasis>& basis() const { return basis_; }

    bool is_zero() const;
    bool is_rational() const;
    int sign() const;  // exact when rational, approx otherwise

    WeightedDegree operator+(const WeightedDegree& o) const;
    WeightedDegree operator-(const WeightedDegree& o) const;
    WeightedDegree operator*(std::int64_t k) const;

    bool operator==(const WeightedDegree& o) const { return c_ == o.c_; }
    bool operator!=(const WeightedDegree& o) const { return !(*this == o); }
    bool operator<(const WeightedDegree& o) const;
    bool operator<=(const WeightedDegree& o) const { return *this == o || *this < o; }
    bool operator>(const WeightedDegree& o) const { return o < *this; }
    bool operator>=(const WeightedDegree& o) const { return o <= *this; }

    std::string str() const;

private:
    void refresh();
    std::vector<Rational> c_;
    std::shared_ptr<const NumberBasis> basis_;
    double v_ = 0.0;
};

class Lambda {
public:
    // entries[i] are coordinates over (1, tau_1..tau_r)
    Lambda(std::vector<std::vector<Rational>> entries, NumberBasis basis);

    static Lambda rational(const std::vector<Rational>& w);
    static Lambda integers(const std::vector<std::int64_t>& w);

    int n() const { return static_cast<int>(entries_.size()); }
    std::size_t rank() const { return basis_->rank(); }
    const WeightedDegree& entry(int i) const { return entries_.at(i); }
    const std::vector<WeightedDegree>& entries() const { return entries_; }
    double approx(int i) const { return entries_.at(i).value(); }
    const std::vector<double>& approx() const { return approx_; }
    double min() const;
    double max() const;
    bool is_rational() const;
    bool all_integer() const;

    const std::shared_ptr<const NumberBasis>& basis() const { return basis_; }
    WeightedDegree zero() const { return WeightedDegree::zero(basis_); }
    WeightedDegree constant(Rational q) const { return WeightedDegree::rational(q, basis_); }
    WeightedDegree constant(double x) const;  // x must be a short decimal/rational

    bool operator==(const Lambda& o) const;

private:
    std::vector<WeightedDegree> entries_;
    std::vector<double> approx_;
    std::shared_ptr<const NumberBasis> basis_;
};

WeightedDegree weighted_degree(const Lambda& lambda, const MultiIndex& k);

struct RhoEntry {
    WeightedDegree rho;
    std::vector<MultiIndex> indices;  // lex sorted
};

struct RhoSequence {
    Lambda lambda;
    WeightedDegree cap;
    std::vector<RhoEntry> entries;

    // index of the entry equal to d, or -1
    int find(const WeightedDegree& d) const;
};

RhoSequence enumerate_rho(const Lambda& lambda, const WeightedDegree& cap);

struct CountBelow {
    std::uint64_t count = 0;
    BigInt bound;  // p_n(j) = prod (j*m_k + j + 1), m_k = floor(1/lambda_k)
};

CountBelow count_below(const Lambda& lambda, int j);

struct DependenceVerdict {
    bool dependent = false;
    std::vector<std::int64_t> alpha;  // supported on the first group
    std::vector<std::int64_t> beta;   // supported on the second group
    WeightedDegree gamma;             // sum alpha_i lambda_i = sum beta_j lambda_j
    std::vector<int> permutation;     // first group, second group, remaining
    int first_group = 0;
    int second_group = 0;
};

DependenceVerdict is_z_dependent(const Lambda& lambda);

enum class Convergence { Converges, Diverges, Inconclusive };

struct ConvergenceVerdict {
    Convergence kind = Convergence::Inconclusive;
    double r_hat = 0.0;
    std::size_t window = 0;
};

struct RootTestOptions {
    std::size_t window = 0;  // 0: half the list
    double delta = 1e-6;
};

ConvergenceVerdict root_test(const std::vector<std::pair<double, std::complex<double>>>& terms,
                             const RootTestOptions& opt = {});
ConvergenceVerdict root_test(const std::vector<std::pair<WeightedDegree, std::complex<double>>>& terms,
                             const RootTestOptions& opt = {});

const char* to_string(Convergence c);

}  // namespace qhflow
