#pragma once

#include "qhflow/qhpoly.hpp"
#include "qhflow/sampling.hpp"
#include "qhflow/weights.hpp"

#include <optional>
#include <string>
#include <vector>

namespace qhflow {

// Re t = 0 rows are limit points of the leaves (closure); sup over a set equals sup over its closure
struct TGrid {
    std::vector<double> re{0.0, 0.0625, 0.125, 0.25, 0.5, 1.0, 2.0, 4.0, 8.0};
    int im_count = 16;
    double im_period = 6.283185307179586;
};

struct Suspension {
    Lambda lambda;
    SampledSet F;
    TGrid grid;

    // Phi(z, t) for every z in F and t in the grid; z-major order
    SampledSet leaf_samples() const;
};

// leaf of one point over the grid
std::vector<Point> leaf_points(const Lambda& lambda, const Point& z, const TGrid& grid);

enum class CutConvention {
    HalfPlane,  // C1 = {Re <= 0}, C2 = {Re >= 0}
    Ray         // C1 = (-inf, 0], C2 = [0, inf)
};

struct DirectionSet {
    std::vector<Point> branch1, branch2;          // points of C^{n-1}
    std::vector<std::size_t> source1, source2;    // indices into F
};

DirectionSet direction_set(const SampledSet& F, const Lambda& lambda, CutConvention cut = CutConvention::HalfPlane);

// z_1^{lambda_k} via exp(lambda_k Log_i z_1)
cplx branch_power(cplx z1, double lambda_k, int branch);

struct VanishingSystem {
    WeightedDegree d1, d2;
    std::vector<MonoKey> basis;
    std::vector<double> singular_values;        // descending, padded with zeros to basis size
    std::vector<std::vector<cplx>> nullspace;   // orthonormal, in basis order
    bool empty_basis = false;

    MixedPolynomial poly(const std::vector<cplx>& coeffs, int n) const;
};

VanishingSystem vanishing_system(const SampledSet& F, const Lambda& lambda, const WeightedDegree& d1,
                                 const WeightedDegree& d2, double null_threshold = 1e-8);

struct BidegreeRecord {
    WeightedDegree d1, d2;
    std::size_t basis_size = 0;
    std::size_t null_dim = 0;
    std::vector<double> singular_values;
    std::optional<MixedPolynomial> witness;
    double residual = 0.0;
};

enum class ScanVerdict { SparseCandidate, NoObstructionUpToCap };

struct ScanReport {
    WeightedDegree cap;
    std::vector<BidegreeRecord> records;
    ScanVerdict verdict = ScanVerdict::NoObstructionUpToCap;
    int witness_record = -1;   // first record with residual < 1e-8
    ExactReport exact;         // recheck of that witness against the descriptor
    std::size_t samples_used = 0;
};

struct ScanOptions {
    double null_threshold = 1e-8;
    double witness_tol = 1e-8;
    // restrict F to F ∩ B(center, radius)
    std::optional<Point> localize_center;
    double localize_radius = 0.0;
};

ScanReport sparseness_scan(const SampledSet& F, const Lambda& lambda, const WeightedDegree& cap,
                           const ScanOptions& opt = {});

MixedPolynomial sparse_witness_from_relation(const DependenceVerdict& relation);

enum class NonsparseVerdict { CertifiedNonsparse, NotCertified };
NonsparseVerdict nonsparse_certificate_independent(const Lambda& lambda, const Point& w);

struct ObstructionBlock {
    WeightedDegree mu, nu;
    double max_abs = 0.0;      // over F
    double coeff_norm = 0.0;
    bool vanishes_on_F = false;  // flagged: vanishes on F but not identically
};

struct ObstructionReport {
    std::vector<ObstructionBlock> blocks;  // nu != 0 only
    bool formal_holomorphic_type = true;
};

ObstructionReport forelli_obstruction(const TaylorJet& jet, const SampledSet& F, const Lambda& lambda,
                                      double tol = 1e-8);

const char* to_string(ScanVerdict v);
const char* to_string(NonsparseVerdict v);

}  // namespace qhflow
