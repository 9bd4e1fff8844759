#pragma once

#include "qhflow/extremal.hpp"
#include "qhflow/qhpoly.hpp"
#include "qhflow/sampling.hpp"
#include "qhflow/suspension.hpp"
#include "qhflow/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qhflow {

struct FormalSeries {
    Lambda lambda;
    std::vector<HoloQHPolynomial> blocks;  // strictly increasing rho
    std::size_t M = 64;                    // truncation order

    void validate() const;
    std::size_t truncation() const { return std::min(M, blocks.size()); }

    static FormalSeries from_polynomial(const MixedPolynomial& f, const Lambda& lambda, std::size_t M = 64);
};

struct DirichletResult {
    std::vector<cplx> terms;         // q_m(z) e^{-rho_m t}
    std::vector<cplx> partial_sums;
    ConvergenceVerdict verdict;
};

DirichletResult dirichlet_eval(const FormalSeries& S, const Point& z, cplx t);

struct RegionEstimate {
    std::vector<Point> grid;
    std::vector<double> values;
    std::vector<bool> inside;
    double ball_radius = 0.0;   // 0 when not computed
    double delta = 1e-3;
    std::size_t M = 0;          // blocks used
    std::size_t window = 0;
    std::string kind;
};

constexpr double kRegionDelta = 1e-3;

RegionEstimate convergence_region(const FormalSeries& S, const std::vector<Point>& grid, std::size_t window = 0,
                                  double delta = kRegionDelta);

struct CapacityBall {
    std::vector<WeightedDegree> caps;
    std::vector<double> rho_hat;
    std::vector<double> radius;   // rho_hat^{max lambda}, clamped to (0, 1]
    std::vector<bool> saturated;
};

CapacityBall omega_from_capacity(const SampledSet& F, const Lambda& lambda, const std::vector<WeightedDegree>& caps,
                                 const SampledSet& sphere_grid, const TGrid& tgrid = {}, const ExtremalOptions& opt = {});

// z_lambda = (z_k |z|^{-lambda_k / max lambda})
Point z_lambda(const Point& z, const Lambda& lambda);

RegionEstimate omega_prime(const SampledSet& F, const Lambda& lambda, const std::vector<Point>& grid, int degree_cap,
                           const TGrid& tgrid = {}, const ExtremalOptions& opt = {}, double delta = kRegionDelta);

RegionEstimate omega_hat(const SampledSet& base, const SampledSet& extra, const Lambda& lambda,
                         const std::vector<Point>& grid, const WeightedDegree& rho_cap, const ExtremalOptions& opt = {},
                         double delta = kRegionDelta);

struct DivergentSeries {
    FormalSeries series;
    std::vector<int> selected;   // n_m, indices into p_seq
    std::vector<Point> b;        // b_k, k = 1..
    double max_rel_error = 0.0;  // |q_m(b_k) - (m/k)^rho| / (m/k)^rho over m, k <= check
    bool verified = false;
};

struct DivergentFamily {
    Lambda lambda;
    std::vector<HoloQHPolynomial> p_seq;
    Point a;
    std::vector<SampledSet> K;
};

// (z1 - z2)^m, a = (1, 0), K_m = samples of {(e^{i th}, e^{i th}) / sqrt 2}
DivergentFamily builtin_divergent_family(int count = 25, int k_samples = 64);

DivergentSeries build_divergent_series(const std::vector<HoloQHPolynomial>& p_seq, const Lambda& lambda, const Point& a,
                                       const std::vector<SampledSet>& K_family, int k_max = 10, int check = 10);

// leaf grid on which sampled leaf sups bound every block exactly (rational lambda)
TGrid exact_leaf_grid(const FormalSeries& S);

struct CoefficientBound {
    double leaf_sup = 0.0;
    std::vector<double> block_abs;  // |q_m(z)|
    double worst_ratio = 0.0;       // max |q_m(z)| / leaf_sup
};

CoefficientBound coefficient_bound(const FormalSeries& S, const Point& z, const TGrid& grid);

}  // namespace qhflow
