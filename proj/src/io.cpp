#include "qhflow/io.hpp"

#include "qhflow/error.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace qhflow {

// ---------------------------------------------------------------- scalars

Rational parse_rational(const std::string& s_in) {
    std::string s;
    for (char c : s_in)
        if (!std::isspace(static_cast<unsigned char>(c))) s += c;
    if (s.empty()) throw ParseError("empty rational");
    try {
        auto slash = s.find('/');
        if (slash != std::string::npos) {
            std::size_t a = 0, b = 0;
            long long p = std::stoll(s.substr(0, slash), &a);
            long long q = std::stoll(s.substr(slash + 1), &b);
            if (a != slash || b != s.size() - slash - 1 || q == 0) throw ParseError("bad rational '" + s_in + "'");
            return Rational(p, q);
        }
        auto dot = s.find('.');
        if (dot == std::string::npos) {
            std::size_t a = 0;
            long long p = std::stoll(s, &a);
            if (a != s.size()) throw ParseError("bad rational '" + s_in + "'");
            return Rational(p);
        }
        std::string digits = s.substr(0, dot) + s.substr(dot + 1);
        std::size_t frac = s.size() - dot - 1;
        if (frac > 15) throw ParseError("too many decimals in '" + s_in + "'");
        std::size_t a = 0;
        long long p = std::stoll(digits, &a);
        if (a != digits.size()) throw ParseError("bad rational '" + s_in + "'");
        long long q = 1;
        for (std::size_t i = 0; i < frac; ++i) q *= 10;
        return Rational(p, q);
    } catch (const std::logic_error&) {
        throw ParseError("bad rational '" + s_in + "'");
    }
}

std::string to_string(const Rational& q) {
    if (q.denominator() == 1) return std::to_string(q.numerator());
    return std::to_string(q.numerator()) + "/" + std::to_string(q.denominator());
}

std::string fmt17(double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

// ---------------------------------------------------------------- to json

json to_json(const Rational& q) { return to_string(q); }

json to_json(const WeightedDegree& d) {
    json c = json::array();
    for (const auto& q : d.coords()) c.push_back(to_json(q));
    return {{"coords", c}, {"value", d.value()}, {"text", d.str()}};
}

json to_json(const Lambda& l) {
    json j;
    if (l.rank() == 1) {
        json w = json::array();
        for (const auto& e : l.entries()) w.push_back(to_json(e.coords()[0]));
        j["weights"] = w;
        return j;
    }
    json basis = json::array();
    for (std::size_t i = 0; i < l.basis()->names.size(); ++i)
        basis.push_back({{"name", l.basis()->names[i]}, {"approx", l.basis()->approx[i]}});
    json entries = json::array();
    for (const auto& e : l.entries()) {
        json c = json::array();
        for (const auto& q : e.coords()) c.push_back(to_json(q));
        entries.push_back(c);
    }
    j["basis"] = basis;
    j["entries"] = entries;
    return j;
}

json to_json(const cplx& c) { return json::array({c.real(), c.imag()}); }

json to_json(const Point& p) {
    json a = json::array();
    for (const auto& c : p) a.push_back(to_json(c));
    return a;
}

json to_json(const MixedPolynomial& p) {
    json terms = json::array();
    for (const auto& [key, c] : p.terms()) terms.push_back({{"k", key.k}, {"m", key.m}, {"re", c.real()}, {"im", c.imag()}});
    return {{"n", p.n()}, {"terms", terms}};
}

json to_json(const RhoSequence& s) {
    json e = json::array();
    for (const auto& r : s.entries) e.push_back({{"rho", to_json(r.rho)}, {"multiplicity", r.indices.size()}, {"indices", r.indices}});
    return {{"lambda", to_json(s.lambda)}, {"cap", to_json(s.cap)}, {"entries", e}};
}

json to_json(const DependenceVerdict& v) {
    json j{{"dependent", v.dependent}};
    if (v.dependent) {
        j["alpha"] = v.alpha;
        j["beta"] = v.beta;
        j["gamma"] = to_json(v.gamma);
        j["permutation"] = v.permutation;
        j["first_group"] = v.first_group;
        j["second_group"] = v.second_group;
    }
    return j;
}

json to_json(const Descriptor& d) {
    return std::visit(
        [](const auto& x) -> json {
            using T = std::decay_t<decltype(x)>;
            if constexpr (std::is_same_v<T, ExplicitList>) {
                json pts = json::array();
                for (const auto& p : x.points) pts.push_back(to_json(p));
                return {{"type", "explicit"}, {"points", pts}};
            } else if constexpr (std::is_same_v<T, CircleFamily>) {
                return {{"type", "circle"},      {"moduli", x.moduli}, {"frequencies", x.frequencies},
                        {"phases", x.phases},    {"count", x.count},   {"theta0", x.theta0},
                        {"theta1", x.theta1}};
            } else if constexpr (std::is_same_v<T, RealSlice>) {
                return {{"type", "real_slice"}, {"n", x.n}, {"real_coords", x.real_coords}, {"count", x.count}, {"seed", x.seed}};
            } else {
                json parts = json::array();
                for (const auto& p : x.parts) parts.push_back(to_json(*p));
                return {{"type", std::is_same_v<T, UnionOf> ? "union" : "product"}, {"parts", parts}};
            }
        },
        d.v);
}

json to_json(const FormalSeries& s) {
    json blocks = json::array();
    for (const auto& b : s.blocks) {
        json c = json::array();
        for (const auto& q : b.rho.coords()) c.push_back(to_json(q));
        blocks.push_back({{"rho_coords", c}, {"poly", to_json(b.poly)}});
    }
    return {{"lambda", to_json(s.lambda)}, {"M", s.M}, {"blocks", blocks}};
}

json to_json(const ExtremalEstimate& e) {
    json j{{"value", e.value}, {"ratio", e.ratio}};
    if (e.rho) j["level"] = to_json(*e.rho);
    else j["level"] = {{"degree", e.degree}};
    j["mode"] = to_string(e.mode);
    if (e.mode == EstimateMode::CertifiedLower) {
        j["mesh"] = e.mesh;
        j["gradient_bound"] = e.gradient_bound;
    }
    j["witness"] = to_json(e.witness);
    j["diagnostics"] = {{"iterations", e.diag.iterations},
                        {"lp_solves", e.diag.lp_solves},
                        {"status", e.diag.status},
                        {"saturated", e.diag.saturated}};
    return j;
}

json to_json(const ScanReport& r) {
    json recs = json::array();
    for (const auto& b : r.records) {
        json j{{"d1", to_json(b.d1)}, {"d2", to_json(b.d2)}, {"basis_size", b.basis_size}, {"null_dim", b.null_dim}};
        json sv = json::array();
        for (double s : b.singular_values) sv.push_back(s);
        j["singular_values"] = sv;
        if (b.witness) {
            j["witness"] = to_json(*b.witness);
            j["residual"] = b.residual;
        }
        recs.push_back(j);
    }
    json j{{"cap", to_json(r.cap)}, {"verdict", to_string(r.verdict)}, {"samples_used", r.samples_used}, {"records", recs}};
    if (r.witness_record >= 0) {
        j["witness_record"] = r.witness_record;
        j["exact_check"] = {{"status", to_string(r.exact.status)},
                            {"points_checked", r.exact.points_checked},
                            {"note", r.exact.note}};
    }
    return j;
}

json to_json(const ObstructionReport& r) {
    json blocks = json::array();
    for (const auto& b : r.blocks)
        blocks.push_back({{"mu", to_json(b.mu)},
                          {"nu", to_json(b.nu)},
                          {"max_abs_on_F", b.max_abs},
                          {"coeff_norm", b.coeff_norm},
                          {"vanishes_on_F", b.vanishes_on_F}});
    return {{"formal_holomorphic_type", r.formal_holomorphic_type}, {"blocks", blocks}};
}

json to_json(const CapacityEstimate& c) {
    return {{"rho_lambda", c.rho_lambda}, {"psi_sup", c.psi_sup}, {"grid_size", c.grid_size},
            {"argmax", to_json(c.argmax)}, {"cap", to_json(c.cap)},   {"saturated", c.saturated}};
}

json to_json(const RegionEstimate& r) {
    json rows = json::array();
    for (std::size_t i = 0; i < r.grid.size(); ++i)
        rows.push_back({{"z", to_json(r.grid[i])}, {"value", r.values[i]}, {"inside", static_cast<bool>(r.inside[i])}});
    json j{{"kind", r.kind}, {"delta", r.delta}, {"rows", rows}};
    if (r.M) j["M"] = r.M;
    if (r.window) j["window"] = r.window;
    if (r.ball_radius > 0) j["ball_radius"] = r.ball_radius;
    return j;
}

// ---------------------------------------------------------------- from json

namespace {

Rational rational_from_json(const json& j) {
    if (j.is_string()) return parse_rational(j.get<std::string>());
    if (j.is_number_integer()) return Rational(j.get<long long>());
    if (j.is_number()) {
        // continued fraction; only short rationals are accepted
        double x = j.get<double>(), y = x;
        long long h0 = 0, h1 = 1, k0 = 1, k1 = 0;
        for (int it = 0; it < 40 && std::isfinite(y); ++it) {
            double a = std::floor(y);
            if (std::abs(a) > 1e12) break;
            long long ai = static_cast<long long>(a);
            long long h2 = ai * h1 + h0, k2 = ai * k1 + k0;
            h0 = h1; h1 = h2; k0 = k1; k1 = k2;
            if (k1 > 1000000000LL) break;
            if (std::abs(static_cast<double>(h1) / static_cast<double>(k1) - x) <= 1e-12 * std::max(1.0, std::abs(x)))
                return Rational(h1, k1);
            if (y - a == 0) break;
            y = 1.0 / (y - a);
        }
        throw ParseError("number " + j.dump() + " is not a short rational; pass it as a string");
    }
    throw ParseError("expected a rational, got " + j.dump());
}

const json& need(const json& j, const char* key) {
    if (!j.is_object() || !j.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    return j.at(key);
}

}  // namespace

Lambda lambda_from_json(const json& j) {
    try {
        if (j.is_array()) return lambda_from_json(json{{"weights", j}});
        if (j.contains("weights")) {
            std::vector<Rational> w;
            for (const auto& x : need(j, "weights")) w.push_back(rational_from_json(x));
            return Lambda::rational(w);
        }
        NumberBasis nb;
        for (const auto& b : need(j, "basis")) {
            nb.names.push_back(need(b, "name").get<std::string>());
            nb.approx.push_back(need(b, "approx").get<double>());
        }
        std::vector<std::vector<Rational>> entries;
        for (const auto& e : need(j, "entries")) {
            std::vector<Rational> c;
            for (const auto& x : e) c.push_back(rational_from_json(x));
            entries.push_back(std::move(c));
        }
        return Lambda(std::move(entries), std::move(nb));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("lambda: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(std::string("lambda: ") + e.what());
    }
}

WeightedDegree degree_from_json(const json& j, const Lambda& lambda) {
    if (j.is_object()) {
        std::vector<Rational> c;
        for (const auto& x : need(j, "coords")) c.push_back(rational_from_json(x));
        if (c.size() != lambda.rank()) throw ParseError("degree has wrong coordinate count");
        return WeightedDegree(std::move(c), lambda.basis());
    }
    return lambda.constant(rational_from_json(j));
}

cplx complex_from_json(const json& j) {
    if (j.is_number()) return {j.get<double>(), 0.0};
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number()) return {j[0].get<double>(), j[1].get<double>()};
    if (j.is_object()) return {j.value("re", 0.0), j.value("im", 0.0)};
    throw ParseError("expected a complex number, got " + j.dump());
}

Point point_from_json(const json& j) {
    if (!j.is_array() || j.empty()) throw ParseError("expected a point (array of complex numbers)");
    Point p;
    for (const auto& c : j) p.push_back(complex_from_json(c));
    return p;
}

MixedPolynomial polynomial_from_json(const json& j) {
    try {
        int n = need(j, "n").get<int>();
        if (n < 1) throw ParseError("polynomial dimension must be positive");
        MixedPolynomial p(n);
        for (const auto& t : need(j, "terms")) {
            auto k = need(t, "k").get<MultiIndex>();
            auto m = t.contains("m") ? t.at("m").get<MultiIndex>() : MultiIndex(n, 0);
            p.add(k, m, cplx(t.value("re", 0.0), t.value("im", 0.0)));
        }
        return p;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("polynomial: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(std::string("polynomial: ") + e.what());
    }
}

DescriptorPtr descriptor_from_json(const json& j) {
    try {
        std::string type = need(j, "type").get<std::string>();
        Descriptor d;
        if (type == "explicit") {
            ExplicitList e;
            for (const auto& p : need(j, "points")) e.points.push_back(point_from_json(p));
            d.v = e;
        } else if (type == "circle") {
            CircleFamily c;
            c.moduli = need(j, "moduli").get<std::vector<double>>();
            c.frequencies = need(j, "frequencies").get<std::vector<int>>();
            c.phases = j.value("phases", std::vector<double>(c.moduli.size(), 0.0));
            c.count = j.value("count", 64);
            c.theta0 = j.value("theta0", 0.0);
            c.theta1 = j.value("theta1", c.theta1);
            d.v = c;
        } else if (type == "real_slice") {
            RealSlice r;
            r.n = need(j, "n").get<int>();
            r.real_coords = need(j, "real_coords").get<std::vector<int>>();
            r.count = j.value("count", 200);
            r.seed = j.value("seed", std::uint64_t{1});
            d.v = r;
        } else if (type == "union" || type == "product") {
            std::vector<DescriptorPtr> parts;
            for (const auto& p : need(j, "parts")) parts.push_back(descriptor_from_json(p));
            if (type == "union") d.v = UnionOf{parts};
            else d.v = ProductOf{parts};
        } else {
            throw ParseError("unknown descriptor type '" + type + "'");
        }
        return std::make_shared<const Descriptor>(std::move(d));
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("descriptor: ") + e.what());
    }
}

SampledSet set_from_json(const json& j) {
    try {
        if (j.is_array()) {
            std::vector<Point> pts;
            for (const auto& p : j) pts.push_back(point_from_json(p));
            if (pts.empty()) throw ParseError("empty point list");
            const int n = static_cast<int>(pts.front().size());
            return SampledSet(n, std::move(pts));
        }
        if (j.contains("descriptor")) {
            auto d = descriptor_from_json(j.at("descriptor"));
            SampledSet s = SampledSet::from(*d, false);
            if (j.value("on_sphere", false)) s.flag_on_sphere();
            if (j.contains("mesh")) s.set_mesh(j.at("mesh").get<double>());
            return s;
        }
        auto d = descriptor_from_json(j);
        return SampledSet::from(*d, false);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("set: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(std::string("set: ") + e.what());
    }
}

FormalSeries series_from_json(const json& j) {
    try {
        Lambda l = lambda_from_json(need(j, "lambda"));
        FormalSeries s{l, {}, j.value("M", std::size_t{64})};
        for (const auto& b : need(j, "blocks")) {
            std::vector<Rational> c;
            for (const auto& x : need(b, "rho_coords")) c.push_back(rational_from_json(x));
            if (c.size() != l.rank()) throw ParseError("series block degree has wrong coordinate count");
            s.blocks.push_back({polynomial_from_json(need(b, "poly")), WeightedDegree(std::move(c), l.basis())});
        }
        s.validate();
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("series: ") + e.what());
    } catch (const DomainError& e) {
        throw ParseError(std::string("series: ") + e.what());
    }
}

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ParseError("cannot open '" + path + "'");
    try {
        return json::parse(in);
    } catch (const nlohmann::json::exception& e) {
        throw ParseError("'" + path + "': " + e.what());
    }
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw ParseError("cannot write '" + path + "'");
    out << text;
}

// ---------------------------------------------------------------- csv

std::string points_csv(const std::vector<Point>& pts, const std::vector<std::string>& names,
                       const std::vector<std::vector<double>>& cols) {
    std::ostringstream os;
    const std::size_t n = pts.empty() ? 0 : pts.front().size();
    for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << "re_z" << k + 1 << ",im_z" << k + 1;
    for (const auto& nm : names) os << "," << nm;
    os << "\n";
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (std::size_t k = 0; k < n; ++k) os << (k ? "," : "") << fmt17(pts[i][k].real()) << "," << fmt17(pts[i][k].imag());
        for (const auto& c : cols) os << "," << fmt17(c[i]);
        os << "\n";
    }
    return os.str();
}

std::string region_csv(const RegionEstimate& r) {
    std::vector<double> inside;
    for (bool b : r.inside) inside.push_back(b ? 1.0 : 0.0);
    return points_csv(r.grid, {"value", "inside"}, {r.values, inside});
}

}  // namespace qhflow
