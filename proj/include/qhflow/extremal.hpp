#pragma once

#include "qhflow/qhpoly.hpp"
#include "qhflow/sampling.hpp"
#include "qhflow/weights.hpp"

#include <Eigen/Dense>

#include <optional>
#include <string>
#include <vector>

namespace qhflow {

struct SolverOptions {
    int polygon_order = 256;
    int phase_count = 32;
    bool refine = false;     // tangent cuts after the polygon LP
    double box = 1e6;        // bound on equilibrated coefficients
    int max_iter = 5000;
};

struct ChebyshevProblem {
    Point target;
    std::vector<Point> constraints;
    std::vector<MultiIndex> basis;  // holomorphic exponents
    SolverOptions options;

    void validate() const;
};

struct SolverDiagnostics {
    int iterations = 0;
    int lp_solves = 0;
    std::string status = "optimal";
    bool saturated = false;   // coefficient box active: constraint set nearly unbounding
    double sampled_sup = 0.0; // of the raw LP solution, before normalization
};

// |q(z0)| for the best q with sampled sup exactly 1
struct ChebyshevResult {
    double value = 0.0;
    MixedPolynomial witness;
    SolverDiagnostics diag;
};

class ChebyshevSolver {
public:
    ChebyshevSolver(const std::vector<Point>& constraints, std::vector<MultiIndex> basis, SolverOptions opt = {});

    ChebyshevResult solve(const Point& z0) const;
    std::size_t dim() const { return basis_.size(); }

private:
    int n_ = 0;
    std::vector<MultiIndex> basis_;
    SolverOptions opt_;
    Eigen::MatrixXcd A_;       // samples x basis, columns equilibrated
    Eigen::VectorXd scale_;
};

ChebyshevResult cheby_maximize(const ChebyshevProblem& problem);

enum class EstimateMode { SampleEstimate, CertifiedLower };

struct ExtremalOptions {
    SolverOptions solver;
    EstimateMode mode = EstimateMode::SampleEstimate;
    double mesh = 0.0;  // 0: take the sample set's own mesh
};

struct ExtremalEstimate {
    double value = 0.0;                  // value^{1/level} maximized over levels
    double ratio = 0.0;                  // |q(z0)| / sup_E |q| for the witness
    MixedPolynomial witness;
    std::optional<WeightedDegree> rho;   // psi levels
    int degree = 0;                      // green degrees
    EstimateMode mode = EstimateMode::SampleEstimate;
    double mesh = 0.0;
    double gradient_bound = 0.0;
    SolverDiagnostics diag;
};

class PsiEstimator {
public:
    PsiEstimator(const SampledSet& E, const Lambda& lambda, const WeightedDegree& rho_cap, ExtremalOptions opt = {});

    ExtremalEstimate at(const Point& z0) const;
    // one estimate per nonzero level of the rho-sequence
    std::vector<ExtremalEstimate> levels(const Point& z0) const;

private:
    struct Level {
        WeightedDegree rho;
        ChebyshevSolver solver;
    };
    std::vector<Level> levels_;
    ExtremalOptions opt_;
    double h_ = 0.0, R_ = 0.0;
    int n_ = 0;
};

class GreenEstimator {
public:
    GreenEstimator(const SampledSet& E, int degree_cap, ExtremalOptions opt = {});

    ExtremalEstimate at(const Point& z0) const;
    std::vector<ExtremalEstimate> levels(const Point& z0) const;

private:
    std::vector<ChebyshevSolver> solvers_;  // degree 1..cap
    ExtremalOptions opt_;
    Point center_;
    double scale_ = 1.0;
    double h_ = 0.0, R_ = 0.0;
    int n_ = 0;
};

ExtremalEstimate psi_estimate(const SampledSet& E, const Lambda& lambda, const Point& z0, const WeightedDegree& rho_cap,
                              const ExtremalOptions& opt = {});
ExtremalEstimate green_estimate(const SampledSet& E, const Point& z0, int degree_cap, const ExtremalOptions& opt = {});

// sum |c| deg R^{deg-1}: Lipschitz bound of a holomorphic polynomial on the R-ball
double gradient_bound(const MixedPolynomial& q, double R);

struct CapacityEstimate {
    double rho_lambda = 0.0;
    std::size_t grid_size = 0;
    double psi_sup = 0.0;
    Point argmax;
    WeightedDegree cap;
    bool saturated = false;
    std::vector<double> values;  // psi estimate per grid point
};

CapacityEstimate capacity(const SampledSet& E, const Lambda& lambda, const SampledSet& sphere_grid,
                          const WeightedDegree& rho_cap, const ExtremalOptions& opt = {});

// closure of samples under t = i*theta flow, theta = 2 pi j / 8
bool is_lambda_circular(const SampledSet& K, const Lambda& lambda, double tol = 1e-6);

struct HullVerdict {
    bool inside = true;
    double psi = 0.0;
    std::optional<MixedPolynomial> witness;  // strongest separating polynomial when outside
    double ratio = 0.0;                      // |q(z0)| / sampled sup |q|
};

HullVerdict hull_membership(const SampledSet& K, const Lambda& lambda, const Point& z0, const WeightedDegree& rho_cap,
                            const ExtremalOptions& opt = {}, bool check_circular = true);

struct SandwichRow {
    Point z;
    double psi = 0.0, phi = 0.0;
    double lower_gap = 0.0;  // max(1,psi)^{min} - phi
    double upper_gap = 0.0;  // phi^{1/max} - max(1,psi)
    bool violation = false;
};

struct SandwichReport {
    std::vector<SandwichRow> rows;
    double slack = 0.05;
    int violations = 0;
    double max_abs_diff = 0.0;  // max |psi - phi| over rows with psi >= 1
};

SandwichReport sandwich_check(const SampledSet& E, const Lambda& lambda, const std::vector<Point>& grid,
                              const WeightedDegree& rho_cap, int degree_cap, double slack = 0.05,
                              const ExtremalOptions& opt = {}, bool check_circular = true);

struct LRegRow {
    double radius = 0.0;
    std::size_t samples = 0;
    bool skipped = false;
    double v = 0.0;       // at degree_cap
    double v_half = 0.0;  // at degree_cap / 2
    bool saturated = false;
};

struct LRegReport {
    std::vector<LRegRow> rows;
    std::string verdict;
    std::vector<std::string> warnings;
};

LRegReport l_regularity_estimate(const SampledSet& E, const Point& a, const std::vector<double>& radii, int degree_cap,
                                 int probes = 8, const ExtremalOptions& opt = {});

struct PluripolarReport {
    std::vector<WeightedDegree> caps;
    std::vector<double> capacities;
    std::vector<double> psi_sups;
    std::vector<bool> saturated;
    std::string verdict;  // "lambda-pluripolar signature" | "nonpluripolar signature" | "inconclusive"
};

PluripolarReport pluripolar_diagnostic(const SampledSet& E, const Lambda& lambda, const std::vector<WeightedDegree>& caps,
                                       const SampledSet& sphere_grid, const ExtremalOptions& opt = {});

const char* to_string(EstimateMode m);

}  // namespace qhflow
