#pragma once

#include "qhflow/extremal.hpp"
#include "qhflow/qhpoly.hpp"
#include "qhflow/sampling.hpp"
#include "qhflow/series.hpp"
#include "qhflow/suspension.hpp"
#include "qhflow/weights.hpp"

#include <json.hpp>

#include <string>
#include <vector>

namespace qhflow {

using json = nlohmann::ordered_json;

// "3/2", "-2", "0.125"
Rational parse_rational(const std::string& s);
std::string to_string(const Rational& q);

json to_json(const Rational& q);
json to_json(const WeightedDegree& d);
json to_json(const Lambda& l);
json to_json(const cplx& c);
json to_json(const Point& p);
json to_json(const MixedPolynomial& p);
json to_json(const RhoSequence& s);
json to_json(const DependenceVerdict& v);
json to_json(const Descriptor& d);
json to_json(const FormalSeries& s);
json to_json(const ExtremalEstimate& e);
json to_json(const ScanReport& r);
json to_json(const ObstructionReport& r);
json to_json(const CapacityEstimate& c);
json to_json(const RegionEstimate& r);

/*
 * lambda: {"weights": ["1", "3/2"]}                          rational
 *         {"basis": [{"name": "tau", "approx": 1.4142135623730951}],
 *          "entries": [["1", "0"], ["0", "1"]]}              over (1, tau)
 */
Lambda lambda_from_json(const json& j);
// weighted degree: number / "p/q" string / {"coords": [...]} in lambda's basis
WeightedDegree degree_from_json(const json& j, const Lambda& lambda);
cplx complex_from_json(const json& j);
Point point_from_json(const json& j);
MixedPolynomial polynomial_from_json(const json& j);
DescriptorPtr descriptor_from_json(const json& j);
// descriptor object, {"descriptor": ..., "on_sphere": b, "mesh": h}, or a bare list of points
SampledSet set_from_json(const json& j);
FormalSeries series_from_json(const json& j);

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

// 17 significant digits
std::string fmt17(double x);

// header + rows; complex coordinates become (re, im) column pairs
std::string region_csv(const RegionEstimate& r);
std::string points_csv(const std::vector<Point>& pts, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& cols);

}  // namespace qhflow
