#include "qhflow/cli.hpp"

#include "qhflow/error.hpp"
#include "qhflow/extremal.hpp"
#include "qhflow/series.hpp"
#include "qhflow/suspension.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <iostream>
#include <sstream>

namespace qhflow {

namespace {

namespace fs = std::filesystem;

struct Job {
    std::string lambda, set, extra, grid, point, t = "1", poly, series, out, mode = "sample", cut = "halfplane";
    std::string cap = "4", caps, radii = "0.1,0.5,1", kind = "convergence", center, example_id;
    std::uint64_t seed = 1;
    int degree_cap = 6, count = 25, dim = 0, probes = 8, m = 2, n = 2;
    double mesh = 0.0, radius = 0.0, slack = 0.05;
};

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    std::istringstream is(s);
    while (std::getline(is, cur, sep))
        if (!cur.empty()) out.push_back(cur);
    return out;
}

double to_double(const std::string& s) {
    try {
        std::size_t k = 0;
        double v = std::stod(s, &k);
        if (k != s.size()) throw ParseError("bad number '" + s + "'");
        return v;
    } catch (const std::logic_error&) {
        throw ParseError("bad number '" + s + "'");
    }
}

// "1:0.5" is 1 + 0.5i
cplx parse_complex(const std::string& s) {
    auto c = s.find(':');
    if (c == std::string::npos) return {to_double(s), 0.0};
    return {to_double(s.substr(0, c)), to_double(s.substr(c + 1))};
}

Lambda load_lambda(const Job& j) {
    if (j.lambda.empty()) throw ParseError("--lambda is required");
    if (fs::exists(j.lambda)) return lambda_from_json(read_json_file(j.lambda));
    std::vector<Rational> w;
    for (const auto& s : split(j.lambda, ',')) w.push_back(parse_rational(s));
    try {
        return Lambda::rational(w);
    } catch (const DomainError& e) {
        throw ParseError(std::string("lambda: ") + e.what());
    }
}

SampledSet load_set(const std::string& spec, int n, std::uint64_t seed, const char* what) {
    if (spec.empty()) throw ParseError(std::string("--") + what + " is required");
    if (spec.rfind("builtin:", 0) == 0) {
        std::string b = spec.substr(8);
        if (n < 1) throw ParseError("builtin sets need a dimension (--lambda or --dim)");
        if (b.rfind("random:", 0) == 0) {
            int c = static_cast<int>(to_double(b.substr(7)));
            if (c <= 0) throw ParseError("random set count must be positive");
            return random_sphere(n, c, seed);
        }
        return builtin_grid(b, n);
    }
    return set_from_json(read_json_file(spec));
}

std::vector<Point> load_points(const Job& j, int n) {
    if (!j.point.empty()) {
        if (fs::exists(j.point)) {
            auto js = read_json_file(j.point);
            if (js.is_array() && !js.empty() && js[0].is_array() && !js[0].empty() && js[0][0].is_array()) {
                std::vector<Point> out;
                for (const auto& p : js) out.push_back(point_from_json(p));
                return out;
            }
            return {point_from_json(js)};
        }
        Point p;
        for (const auto& s : split(j.point, ',')) p.push_back(parse_complex(s));
        return {p};
    }
    if (!j.grid.empty()) return load_set(j.grid, n, j.seed, "grid").points();
    throw ParseError("--point or --grid is required");
}

ExtremalOptions extremal_options(const Job& j) {
    ExtremalOptions o;
    if (j.mode == "certified") o.mode = EstimateMode::CertifiedLower;
    else if (j.mode != "sample") throw ParseError("--mode must be sample or certified");
    o.mesh = j.mesh;
    return o;
}

std::vector<WeightedDegree> load_caps(const Job& j, const Lambda& l) {
    std::vector<WeightedDegree> caps;
    for (const auto& s : split(j.caps.empty() ? j.cap : j.caps, ',')) caps.push_back(l.constant(parse_rational(s)));
    if (caps.empty()) throw ParseError("no caps given");
    return caps;
}

MixedPolynomial load_poly(const Job& j) {
    if (j.poly.empty()) throw ParseError("--poly is required");
    return polynomial_from_json(read_json_file(j.poly));
}

struct Output {
    json result;
    std::string csv;
};

Output dispatch(const std::string& cmd, const Job& j) {
    Output o;
    auto& r = o.result;
    if (cmd == "examples") {
        ExampleParams p;
        p.m = j.m;
        p.n = j.n;
        p.seed = j.seed;
        r = run_example(j.example_id, p);
        return o;
    }
    if (cmd == "divergent") {
        auto fam = builtin_divergent_family(j.count);
        auto d = build_divergent_series(fam.p_seq, fam.lambda, fam.a, fam.K);
        json b = json::array();
        for (const auto& x : d.b) b.push_back(to_json(x));
        json sums = json::array();
        cplx s = 0.0;
        for (const auto& q : d.series.blocks) {
            s += q(d.b.front());
            sums.push_back(std::abs(s));
        }
        r = {{"series", to_json(d.series)}, {"selected", d.selected}, {"b", b},
             {"max_rel_error", d.max_rel_error}, {"verified", d.verified}, {"partial_sums_abs_at_b1", sums}};
        return o;
    }
    if (cmd == "green" || (cmd == "lreg")) {
        const int dim = j.dim > 0 || j.lambda.empty() ? j.dim : load_lambda(j).n();
        SampledSet E = load_set(j.set, dim, j.seed, "set");
        if (cmd == "lreg") {
            auto a = load_points(j, E.n()).front();
            std::vector<double> radii;
            for (const auto& s : split(j.radii, ',')) radii.push_back(to_double(s));
            auto rep = l_regularity_estimate(E, a, radii, j.degree_cap, j.probes, extremal_options(j));
            json rows = json::array();
            for (const auto& x : rep.rows)
                rows.push_back({{"radius", x.radius}, {"samples", x.samples}, {"skipped", x.skipped},
                                {"v", x.v}, {"v_half_cap", x.v_half}, {"saturated", x.saturated}});
            r = {{"verdict", rep.verdict}, {"rows", rows}, {"warnings", rep.warnings}};
            for (const auto& w : rep.warnings) std::cerr << "warning: " << w << "\n";
            return o;
        }
        auto pts = load_points(j, E.n());
        GreenEstimator ge(E, j.degree_cap, extremal_options(j));
        json rows = json::array();
        std::vector<double> vals;
        for (const auto& z : pts) {
            auto e = ge.at(z);
            vals.push_back(e.value);
            rows.push_back({{"z", to_json(z)}, {"estimate", to_json(e)}});
        }
        r = {{"degree_cap", j.degree_cap}, {"rows", rows}};
        o.csv = points_csv(pts, {"phi_hat"}, {vals});
        return o;
    }

    // the series file carries its own lambda
    if (cmd == "region" && j.kind == "convergence") {
        if (j.series.empty()) throw ParseError("--series is required for --kind convergence");
        auto S = series_from_json(read_json_file(j.series));
        auto R = convergence_region(S, load_points(j, S.lambda.n()));
        r = to_json(R);
        o.csv = region_csv(R);
        return o;
    }

    Lambda l = load_lambda(j);
    const int n = l.n();
    if (cmd == "rho") {
        r = to_json(enumerate_rho(l, load_caps(j, l).back()));
    } else if (cmd == "deps") {
        r = to_json(is_z_dependent(l));
    } else if (cmd == "decompose") {
        auto p = load_poly(j);
        json comps = json::array();
        for (const auto& c : bidegree_decompose(p, l))
            comps.push_back({{"d1", to_json(c.d1)}, {"d2", to_json(c.d2)}, {"poly", to_json(c.poly)}});
        r = {{"components", comps}};
        if (p.is_holomorphic()) r["series"] = to_json(FormalSeries::from_polynomial(p, l));
    } else if (cmd == "flow") {
        cplx t = parse_complex(j.t);
        json rows = json::array();
        for (const auto& z : load_points(j, n)) rows.push_back({{"z", to_json(z)}, {"phi", to_json(flow_map(l, z, t))}});
        r = {{"t", to_json(t)}, {"rows", rows}};
    } else if (cmd == "direction-set") {
        SampledSet F = load_set(j.set, n, j.seed, "set");
        CutConvention cut = j.cut == "ray" ? CutConvention::Ray : CutConvention::HalfPlane;
        if (j.cut != "ray" && j.cut != "halfplane") throw ParseError("--cut must be halfplane or ray");
        auto ds = direction_set(F, l, cut);
        json b1 = json::array(), b2 = json::array();
        for (const auto& w : ds.branch1) b1.push_back(to_json(w));
        for (const auto& w : ds.branch2) b2.push_back(to_json(w));
        r = {{"cut", j.cut}, {"branch1", b1}, {"branch2", b2}, {"source1", ds.source1}, {"source2", ds.source2}};
    } else if (cmd == "sparseness") {
        SampledSet F = load_set(j.set, n, j.seed, "set");
        ScanOptions so;
        if (!j.center.empty()) {
            Point c;
            for (const auto& s : split(j.center, ',')) c.push_back(parse_complex(s));
            so.localize_center = c;
            so.localize_radius = j.radius;
        }
        r = to_json(sparseness_scan(F, l, load_caps(j, l).back(), so));
    } else if (cmd == "obstruction") {
        SampledSet F = load_set(j.set, n, j.seed, "set");
        r = to_json(forelli_obstruction(load_poly(j), F, l));
    } else if (cmd == "psi") {
        SampledSet E = load_set(j.set, n, j.seed, "set");
        auto pts = load_points(j, n);
        PsiEstimator pe(E, l, load_caps(j, l).back(), extremal_options(j));
        json rows = json::array();
        std::vector<double> vals;
        for (const auto& z : pts) {
            auto e = pe.at(z);
            vals.push_back(e.value);
            rows.push_back({{"z", to_json(z)}, {"estimate", to_json(e)}});
        }
        r = {{"rows", rows}};
        o.csv = points_csv(pts, {"psi_hat"}, {vals});
    } else if (cmd == "capacity") {
        SampledSet E = load_set(j.set, n, j.seed, "set");
        SampledSet G = load_set(j.grid.empty() ? "builtin:sphere:200" : j.grid, n, j.seed, "grid");
        if (!G.on_sphere()) G.flag_on_sphere();
        auto c = capacity(E, l, G, load_caps(j, l).back(), extremal_options(j));
        r = to_json(c);
        o.csv = points_csv(G.points(), {"psi_hat"}, {c.values});
    } else if (cmd == "hull") {
        SampledSet K = load_set(j.set, n, j.seed, "set");
        json rows = json::array();
        for (const auto& z : load_points(j, n)) {
            auto v = hull_membership(K, l, z, load_caps(j, l).back(), extremal_options(j));
            json row{{"z", to_json(z)}, {"verdict", v.inside ? "Inside" : "Outside"}, {"psi", v.psi}};
            if (v.witness) {
                row["witness"] = to_json(*v.witness);
                row["ratio"] = v.ratio;
            }
            rows.push_back(row);
        }
        r = {{"rows", rows}};
    } else if (cmd == "sandwich") {
        SampledSet E = load_set(j.set, n, j.seed, "set");
        auto pts = load_points(j, n);
        auto rep = sandwich_check(E, l, pts, load_caps(j, l).back(), j.degree_cap, j.slack, extremal_options(j));
        std::vector<double> ps, ph;
        json rows = json::array();
        for (const auto& x : rep.rows) {
            ps.push_back(x.psi);
            ph.push_back(x.phi);
            rows.push_back({{"z", to_json(x.z)}, {"psi_hat", x.psi}, {"phi_hat", x.phi}, {"lower_gap", x.lower_gap},
                            {"upper_gap", x.upper_gap}, {"violation", x.violation}});
        }
        r = {{"slack", rep.slack}, {"violations", rep.violations}, {"max_abs_diff", rep.max_abs_diff}, {"rows", rows}};
        o.csv = points_csv(pts, {"psi_hat", "phi_hat"}, {ps, ph});
    } else if (cmd == "region") {
        auto opt = extremal_options(j);
        if (j.kind == "omega-prime") {
            auto R = omega_prime(load_set(j.set, n, j.seed, "set"), l, load_points(j, n), j.degree_cap, {}, opt);
            r = to_json(R);
            o.csv = region_csv(R);
        } else if (j.kind == "omega-hat") {
            SampledSet base = load_set(j.set, n, j.seed, "set");
            SampledSet extra = j.extra.empty() ? SampledSet() : load_set(j.extra, n, j.seed, "extra");
            auto R = omega_hat(base, extra, l, load_points(j, n), load_caps(j, l).back(), opt);
            r = to_json(R);
            o.csv = region_csv(R);
        } else if (j.kind == "capacity-ball") {
            SampledSet G = load_set(j.grid.empty() ? "builtin:sphere:200" : j.grid, n, j.seed, "grid");
            if (!G.on_sphere()) G.flag_on_sphere();
            auto B = omega_from_capacity(load_set(j.set, n, j.seed, "set"), l, load_caps(j, l), G, {}, opt);
            json rows = json::array();
            for (std::size_t i = 0; i < B.caps.size(); ++i)
                rows.push_back({{"cap", to_json(B.caps[i])}, {"rho_hat", B.rho_hat[i]}, {"radius", B.radius[i]},
                                {"saturated", static_cast<bool>(B.saturated[i])}});
            r = {{"kind", "capacity_ball"}, {"rows", rows}};
        } else {
            throw ParseError("--kind must be convergence, omega-prime, omega-hat or capacity-ball");
        }
    } else {
        throw ParseError("unknown command '" + cmd + "'");
    }
    return o;
}

}  // namespace

int run_cli(int argc, char** argv) {
    CLI::App app{"quasi-homogeneous flows: weights, suspensions, extremal functions, series"};
    app.require_subcommand(1);
    Job j;

    auto common = [&](CLI::App* s) {
        s->add_option("--lambda", j.lambda, "lambda JSON file or inline list like 1,3/2");
        s->add_option("--set", j.set, "set JSON file or builtin:sphere:N|ball:N|line:N|random:N");
        s->add_option("--cap", j.cap, "weighted-degree cap");
        s->add_option("--caps", j.caps, "comma separated caps");
        s->add_option("--grid", j.grid, "points JSON file or builtin:...");
        s->add_option("--point", j.point, "point like 1,0:0.5 (re:im) or JSON file");
        s->add_option("--out", j.out, "output directory");
        s->add_option("--seed", j.seed, "seed for randomized sampling");
        s->add_option("--mode", j.mode, "sample|certified");
        s->add_option("--mesh", j.mesh, "covering radius of the sample set");
        s->add_option("--dim", j.dim, "dimension for builtin sets without lambda");
        s->add_option("--degree-cap", j.degree_cap, "degree cap for green estimates");
    };

    std::vector<std::pair<std::string, std::string>> cmds = {
        {"rho", "enumerate the rho-sequence"},
        {"deps", "Z-dependence of lambda"},
        {"decompose", "bidegree / series decomposition"},
        {"flow", "flow map"},
        {"direction-set", "lambda-direction set"},
        {"sparseness", "sparseness scan"},
        {"obstruction", "jet obstruction blocks"},
        {"psi", "extremal function estimates"},
        {"green", "green function estimates"},
        {"capacity", "projective capacity"},
        {"hull", "hull membership"},
        {"sandwich", "one-sided sandwich checks"},
        {"lreg", "L-regularity diagnostic"},
        {"region", "convergence regions"},
        {"divergent", "built-in divergent series"},
        {"examples", "reproduce worked examples"},
    };
    std::map<std::string, CLI::App*> subs;
    for (const auto& [name, help] : cmds) {
        auto* s = app.add_subcommand(name, help);
        common(s);
        subs[name] = s;
    }
    subs["flow"]->add_option("--t", j.t, "complex time re:im");
    subs["direction-set"]->add_option("--cut", j.cut, "halfplane|ray");
    subs["sparseness"]->add_option("--center", j.center, "localization center");
    subs["sparseness"]->add_option("--radius", j.radius, "localization radius");
    subs["decompose"]->add_option("--poly", j.poly, "polynomial JSON file");
    subs["obstruction"]->add_option("--poly", j.poly, "jet JSON file");
    subs["sandwich"]->add_option("--slack", j.slack, "allowed slack");
    subs["lreg"]->add_option("--radii", j.radii, "comma separated radii");
    subs["lreg"]->add_option("--probes", j.probes, "probe count");
    subs["region"]->add_option("--kind", j.kind, "convergence|omega-prime|omega-hat|capacity-ball");
    subs["region"]->add_option("--series", j.series, "series JSON file");
    subs["region"]->add_option("--extra", j.extra, "extra set for omega-hat");
    subs["divergent"]->add_option("--count", j.count, "number of blocks");
    subs["examples"]->add_option("id", j.example_id, "ex3.5|ex5.6|ex7.1|ex7.2|ex7.3")->required();
    subs["examples"]->add_option("--m", j.m, "ex5.6: lambda = (1, m)");
    subs["examples"]->add_option("--n", j.n, "ex5.6: F_n");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string cmd;
    for (const auto& [name, s] : subs)
        if (s->parsed()) cmd = name;

    try {
        Output o = dispatch(cmd, j);
        json env{{"command", cmd}, {"result", o.result}};
        std::string text = env.dump(2) + "\n";
        if (j.out.empty()) {
            std::cout << text;
        } else {
            fs::create_directories(j.out);
            std::string base = (fs::path(j.out) / cmd).string();
            write_text_file(base + ".json", text);
            if (!o.csv.empty()) write_text_file(base + ".csv", o.csv);
        }
        if (cmd == "examples" && !o.result.value("pass", false)) {
            std::cerr << "example " << j.example_id << " did not reproduce its golden verdict\n";
            return 3;
        }
        return 0;
    } catch (const ParseError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const NumericError& e) {
        std::cerr << "numeric failure: " << e.what() << "\n";
        return 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

}  // namespace qhflow
