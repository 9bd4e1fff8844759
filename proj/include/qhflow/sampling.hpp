#pragma once

#include "qhflow/qhpoly.hpp"

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace qhflow {

struct Descriptor;
using DescriptorPtr = std::shared_ptr<const Descriptor>;

struct ExplicitList {
    std::vector<Point> points;
};

// theta -> (r_k exp(i (f_k theta + p_k))), theta on a uniform grid of [t0, t1)
struct CircleFamily {
    std::vector<double> moduli;
    std::vector<int> frequencies;
    std::vector<double> phases;
    int count = 64;
    double theta0 = 0.0;
    double theta1 = 6.283185307179586;
};

// points of the unit sphere of C^n whose listed coordinates are real
struct RealSlice {
    int n = 2;
    std::vector<int> real_coords;
    int count = 200;
    std::uint64_t seed = 1;
};

struct UnionOf {
    std::vector<DescriptorPtr> parts;
};

// coordinates concatenated, all combinations
struct ProductOf {
    std::vector<DescriptorPtr> parts;
};

struct Descriptor {
    std::variant<ExplicitList, CircleFamily, RealSlice, UnionOf, ProductOf> v;
};

int descriptor_dimension(const Descriptor& d);
std::vector<Point> generate(const Descriptor& d);

class SampledSet {
public:
    SampledSet() = default;
    SampledSet(int n, std::vector<Point> points);
    static SampledSet from(const Descriptor& d, bool on_sphere = false);

    int n() const { return n_; }
    const std::vector<Point>& points() const { return points_; }
    std::size_t size() const { return points_.size(); }
    bool empty() const { return points_.empty(); }

    const DescriptorPtr& descriptor() const { return descriptor_; }
    bool on_sphere() const { return on_sphere_; }
    double sphere_tol() const { return sphere_tol_; }
    // covering radius of the sampled continuum if known (0 = unknown)
    double mesh() const { return mesh_; }

    SampledSet& set_descriptor(DescriptorPtr d);
    SampledSet& flag_on_sphere(double tol = 1e-10);  // validates
    SampledSet& set_mesh(double h);

    SampledSet united(const SampledSet& o) const;
    SampledSet subset(const std::vector<std::size_t>& idx) const;
    // samples within closed ball B(center, r)
    SampledSet within(const Point& center, double r) const;
    double max_norm() const;

private:
    int n_ = 0;
    std::vector<Point> points_;
    DescriptorPtr descriptor_;
    bool on_sphere_ = false;
    double sphere_tol_ = 1e-10;
    double mesh_ = 0.0;
};

// builtin grids
SampledSet sphere_grid(int n, int min_points);
SampledSet ball_sample(int n, int min_points);
SampledSet line_grid(int n, int count);            // (2(j+1)/count, 0, ..., 0)
SampledSet circle_sample(double radius, int count, cplx center = 0.0);
SampledSet disc_sample(double radius, int rings, int per_ring, cplx center = 0.0);
SampledSet torus_sample(const std::vector<double>& radii, int per_angle);
SampledSet random_sphere(int n, int count, std::uint64_t seed);

// "sphere:N", "ball:N", "line:N"
SampledSet builtin_grid(const std::string& spec, int n);

/*
 * Exact recheck of a vanishing witness against a descriptor at rational
 * parameters: rational sphere points for real slices, rational points of the
 * unit circle for circle families with rational moduli and zero phases.
 */
enum class ExactCheck { Verified, Failed, NotApplicable };
struct ExactReport {
    ExactCheck status = ExactCheck::NotApplicable;
    int points_checked = 0;
    std::string note;
};

ExactReport exact_verify(const MixedPolynomial& witness, const Descriptor& d, int max_den = 64, int max_points = 64);

const char* to_string(ExactCheck c);

}  // namespace qhflow
