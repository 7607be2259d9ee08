#include <algorithm>
#include <cmath>
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "toricale/ansatz.hpp"
#include "toricale/asymptotics.hpp"
#include "toricale/surface.hpp"
#include "toricale/typej.hpp"
#include "toricale/verify.hpp"

using namespace toricale;
using nlohmann::ordered_json;

namespace {

enum ExitCode { kPass = 0, kFail = 1, kBadInput = 2, kUnknown = 3, kNumeric = 4 };

struct Output {
    bool json = false, dot = false, csv = false;

    void add(CLI::App* sub) {
        auto* j = sub->add_flag("--json", json, "JSON output");
        auto* d = sub->add_flag("--dot", dot, "DOT output (trees only)");
        auto* c = sub->add_flag("--csv", csv, "CSV output");
        j->excludes(d)->excludes(c);
        d->excludes(c);
    }
    // Default when no selector was given.
    std::string pick(const std::string& fallback, std::initializer_list<const char*> allowed) const {
        std::string f = json ? "json" : dot ? "dot" : csv ? "csv" : fallback;
        for (const char* a : allowed)
            if (f == a) return f;
        throw InvalidInput("output format " + f + " is not available for this command");
    }
};

// CLI11 reads config files on the root app only; unsectioned keys are
// routed to the subcommand being run. Underscores in keys read as dashes.
class SubcommandConfig : public CLI::ConfigINI {
  public:
    std::string target;

    std::vector<CLI::ConfigItem> from_config(std::istream& input) const override {
        auto items = CLI::ConfigINI::from_config(input);
        for (auto& it : items) {
            if (it.name == "++" || it.name == "--") continue;
            std::replace(it.name.begin(), it.name.end(), '_', '-');
            if (it.parents.empty() && !target.empty()) it.parents = {target};
        }
        return items;
    }
};

std::string csv_num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

struct WeightArgs {
    std::int64_t a0 = 0;
    std::vector<std::int64_t> w;
    bool flat = false;

    void add(CLI::App* sub) {
        sub->add_option("--a0", a0, "leading weight")->required()->envname("TORICALE_A0");
        sub->add_option("--w", w, "remaining weights; repeats encode multiplicities")->required()->expected(1, -1);
        sub->add_flag("--flat", flat, "flat ansatz (no correction term)");
    }
    AnsatzData build() const { return build_ansatz(a0, w, flat); }
};

ordered_json weights_json(const AnsatzData& d) {
    ordered_json j;
    j["weights"] = d.weights.str();
    j["a0"] = d.weights.a0;
    j["a"] = d.weights.a;
    j["mult"] = d.weights.mult;
    j["m"] = d.m();
    j["flat"] = d.flat;
    j["ricci_flat"] = d.ricci_flat;
    return j;
}

// classify -----------------------------------------------------------------

struct ClassifyArgs {
    std::vector<std::int64_t> weights;
    ClassifierConfig cfg;
    Output out;
};

int run_classify(const ClassifyArgs& a) {
    const std::string fmt = a.out.pick("json", {"json", "dot"});
    if (a.weights.size() < 2) throw InvalidInput("classify: need b0 and at least one more weight");
    const auto b = WeightVector::from_list(a.weights);
    const auto v = classify(b, a.cfg);
    if (fmt == "dot") {
        if (v.tree) std::cout << export_tree(*v.tree, TreeFormat::Dot);
    } else {
        ordered_json j;
        j["command"] = "classify";
        j["weights"] = b.str();
        j["verdict"] = v.yes ? "Yes" : "Unknown";
        j["lift_bound"] = a.cfg.lift_bound;
        j["max_depth"] = a.cfg.max_depth;
        j["unit_canonicalization"] = a.cfg.unit_canonicalization;
        j["stats"] = {{"nodes", v.stats.nodes},
                      {"lifts_tried", v.stats.lifts_tried},
                      {"memo_hits", v.stats.memo_hits},
                      {"depth_cutoffs", v.stats.depth_cutoffs},
                      {"cycle_cutoffs", v.stats.cycle_cutoffs},
                      {"budget_exhausted", v.stats.budget_exhausted}};
        if (v.tree) {
            std::string why;
            j["tree_valid"] = validate_tree(*v.tree, &why, a.cfg.unit_canonicalization);
            j["tree_depth"] = v.tree->depth();
            j["tree"] = ordered_json::parse(export_tree(*v.tree, TreeFormat::Json));
        } else {
            j["tree"] = nullptr;
        }
        std::cout << j.dump(2) << '\n';
    }
    return v.yes ? kPass : kUnknown;
}

// verify -------------------------------------------------------------------

struct VerifyArgs {
    WeightArgs w;
    std::vector<std::string> checks;
    VerifyConfig cfg;
    AsymptoticsConfig acfg;
    bool timing = false;
    Output out;
};

const std::vector<std::string> kAllChecks = {"abreu", "boundary", "positivity", "det",        "vandermonde",
                                             "hessian", "lattice", "asymptotics", "calabi"};

CheckReport calabi_check(const AnsatzData& d) {
    CheckReport rep;
    rep.check = "calabi_scalar";
    rep.grid = "exact";
    rep.points = 1;
    if (d.ell() != 1) throw InvalidInput("calabi check needs a single distinct weight");
    const Rational r = Rational(d.weights.a0, d.weights.a[0]);
    const int n = d.m();
    const auto res = calabi_scalar_residual(r, n);
    rep.pass = res.empty();
    rep.max_residual = rep.pass ? 0 : 1;
    rep.details["r"] = to_string(r);
    rep.details["n"] = n;
    rep.details["nonzero_terms"] = res.size();
    return rep;
}

int run_verify(const VerifyArgs& a) {
    const std::string fmt = a.out.pick("json", {"json", "csv"});
    const auto d = a.w.build();
    std::vector<std::string> checks = a.checks;
    if (checks.empty()) {
        for (const auto& c : kAllChecks)
            if (c != "calabi" && !(d.flat && c == "asymptotics")) checks.push_back(c);
        if (d.ell() == 1) checks.push_back("calabi");
    }
    std::vector<CheckReport> reports;
    for (const auto& c : checks) {
        if (c == "abreu")
            reports.push_back(abreu_check(d, a.cfg));
        else if (c == "boundary")
            reports.push_back(boundary_check(d, a.cfg));
        else if (c == "positivity")
            reports.push_back(positivity_check(d, a.cfg));
        else if (c == "det")
            reports.push_back(det_factorization(d, a.cfg));
        else if (c == "vandermonde")
            reports.push_back(vandermonde_check(d));
        else if (c == "hessian")
            reports.push_back(hessian_consistency(d, a.cfg));
        else if (c == "lattice")
            reports.push_back(lattice_check(d.weights));
        else if (c == "asymptotics")
            reports.push_back(asymptotics_check(d, a.acfg));
        else if (c == "calabi")
            reports.push_back(calabi_check(d));
        else
            throw InvalidInput("unknown check: " + c);
    }
    bool all = true;
    for (const auto& r : reports) all = all && r.pass;

    if (fmt == "csv") {
        std::cout << "check,pass,max_residual,tolerance,points,seconds\n";
        for (const auto& r : reports)
            std::cout << r.check << ',' << (r.pass ? "true" : "false") << ',' << csv_num(r.max_residual) << ','
                      << csv_num(r.tolerance) << ',' << r.points << ',' << csv_num(a.timing ? r.seconds : 0) << '\n';
    } else {
        ordered_json j;
        j["command"] = "verify";
        j["input"] = weights_json(d);
        j["seed"] = a.cfg.seed;
        j["checks"] = ordered_json::array();
        for (const auto& r : reports) j["checks"].push_back(to_json(r, a.timing));
        j["pass"] = all;
        std::cout << j.dump(2) << '\n';
    }
    return all ? kPass : kFail;
}

// surface ------------------------------------------------------------------

struct SurfaceArgs {
    std::vector<std::int64_t> weights;
    int degree = 3;
    std::size_t samples = 20, held_out = 10;
    int points = 100;
    double tol = 1e-12;
    Output out;
};

int run_surface(const SurfaceArgs& a) {
    const std::string fmt = a.out.pick("json", {"json", "csv"});
    if (a.weights.size() != 3) throw InvalidInput("surface: need exactly a0 a1 a2");
    const auto s = surface_data(a.weights[0], a.weights[1], a.weights[2]);
    const auto dp = dual_polytope(s);
    const auto pr = polynomiality_check(s, a.degree, a.samples, a.held_out);
    const auto cr = conformal_factor_check(s, a.points, a.tol);
    const bool ok = dp.boundary_ok && dp.weight_pattern && pr.pass && cr.pass;
    if (fmt == "csv") {
        static const char* names[] = {"11", "12", "22"};
        std::cout << "entry,deg_s1,deg_s2,coefficient\n";
        for (std::size_t e = 0; e < pr.entries.size(); ++e)
            for (const auto& [k, v] : pr.entries[e])
                std::cout << names[e] << ',' << k.first << ',' << k.second << ',' << to_string(v) << '\n';
    } else {
        auto j = to_json(s, dp, pr, cr);
        j["pass"] = ok;
        std::cout << j.dump(2) << '\n';
    }
    return ok ? kPass : kFail;
}

// points -------------------------------------------------------------------

struct PointsArgs {
    WeightArgs w;
    int grid = 5;
    int random = 0;
    std::uint64_t seed = 1;
    bool scalar = false;
    Output out;
};

int sign_of(double v) { return (v > 0) - (v < 0); }

int run_points(const PointsArgs& a) {
    const std::string fmt = a.out.pick("csv", {"csv", "json"});
    const auto d = a.w.build();
    auto pts = a.random > 0 ? halton_points(d, a.random, a.seed) : xi_grid(d, a.grid, a.seed);
    const std::size_t l = d.ell();
    const auto& C = d.num;
    ordered_json rows = ordered_json::array();
    std::ostringstream csv;
    csv << "index";
    for (std::size_t j = 1; j <= l; ++j) csv << ",xi_" << j;
    for (std::size_t j = 1; j <= l; ++j) csv << ",x_" << j;
    for (std::size_t j = 1; j <= l; ++j) csv << ",w_" << j;
    for (std::size_t j = 1; j <= l; ++j) csv << ",sign_F_" << j;
    csv << ",boundary_distance";
    if (a.scalar) csv << ",scalar";
    csv << '\n';
    for (std::size_t i = 0; i < pts.size(); ++i) {
        const auto& pt = pts[i];
        const auto x = xi_to_x(pt.xi, d);
        const auto w = vertical_weights(pt.xi, d);
        std::vector<int> signs;
        for (std::size_t j = 0; j < l; ++j) {
            const double F = (j + 1 < l || d.flat) ? C.p(pt.xi[j]) : C.f_ell(pt.xi[j]);
            signs.push_back(sign_of(F));
        }
        const double dist = boundary_distance(pt, d);
        const double scal = a.scalar ? abreu_scalar(pt, d) : 0;
        if (fmt == "json") {
            ordered_json r;
            r["xi"] = pt.xi;
            r["x"] = x;
            r["vertical_weights"] = w;
            r["sign_F"] = signs;
            r["boundary_distance"] = dist;
            if (a.scalar) r["scalar"] = scal;
            rows.push_back(r);
        } else {
            csv << i;
            for (double v : pt.xi) csv << ',' << csv_num(v);
            for (double v : x) csv << ',' << csv_num(v);
            for (double v : w) csv << ',' << csv_num(v);
            for (int s : signs) csv << ',' << s;
            csv << ',' << csv_num(dist);
            if (a.scalar) csv << ',' << csv_num(scal);
            csv << '\n';
        }
    }
    if (fmt == "json") {
        ordered_json j;
        j["command"] = "points";
        j["input"] = weights_json(d);
        j["seed"] = a.seed;
        j["points"] = rows;
        std::cout << j.dump(2) << '\n';
    } else {
        std::cout << csv.str();
    }
    return kPass;
}

// ray ----------------------------------------------------------------------

struct RayArgs {
    WeightArgs w;
    AsymptoticsConfig cfg;
    Output out;
};

int run_ray(const RayArgs& a) {
    const std::string fmt = a.out.pick("csv", {"csv", "json"});
    const auto d = a.w.build();
    const auto ray = ale_ray(d, a.cfg.ray_points, a.cfg.ray_lo, a.cfg.ray_hi);
    if (fmt == "csv") {
        std::cout << ray_csv(ray);
        return kPass;
    }
    ordered_json j;
    j["command"] = "ray";
    j["input"] = weights_json(d);
    j["ray"] = ordered_json::array();
    for (const auto& p : ray)
        j["ray"].push_back({{"xi_l", p.xi_top},
                            {"norm_sq", p.norm_sq},
                            {"H", p.potential},
                            {"H_minus_quarter_norm_sq", p.deviation}});
    std::cout << j.dump(2) << '\n';
    return kPass;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Toric ALE scalar-flat metrics: classification and verification"};
    app.require_subcommand(1);
    app.fallthrough();
    auto config = std::make_shared<SubcommandConfig>();
    app.config_formatter(config);
    app.set_config("--config", "", "key = value file; flags on the command line take precedence");

    ClassifyArgs ca;
    auto* classify_cmd = app.add_subcommand("classify", "type test for a cyclic quotient singularity");
    classify_cmd->add_option("weights", ca.weights, "b0 b1 ... bm")->required();
    classify_cmd->add_option("--lift-bound", ca.cfg.lift_bound, "lift search bound")
        ->envname("TORICALE_LIFT_BOUND")
        ->capture_default_str();
    classify_cmd->add_option("--max-depth", ca.cfg.max_depth, "maximum tree depth")
        ->envname("TORICALE_MAX_DEPTH")
        ->capture_default_str();
    classify_cmd->add_option("--node-budget", ca.cfg.node_budget, "search node budget")->capture_default_str();
    classify_cmd->add_flag("--units", ca.cfg.unit_canonicalization, "canonicalize residues up to units");
    ca.out.add(classify_cmd);

    VerifyArgs va;
    auto* verify_cmd = app.add_subcommand("verify", "run numeric and exact checks on the ansatz");
    va.w.add(verify_cmd);
    verify_cmd->add_option("--checks", va.checks, "comma separated subset of " + [] {
        std::string s;
        for (const auto& c : kAllChecks) s += (s.empty() ? "" : ",") + c;
        return s;
    }())->delimiter(',');
    verify_cmd->add_option("--seed", va.cfg.seed, "sampling seed")->envname("TORICALE_SEED")->capture_default_str();
    verify_cmd->add_option("--grid", va.cfg.grid_per_interval, "grid points per interval")
        ->envname("TORICALE_GRID")
        ->capture_default_str();
    verify_cmd->add_option("--random-points", va.cfg.random_points, "quasi-random points for positivity")
        ->capture_default_str();
    verify_cmd->add_option("--hessian-points", va.cfg.hessian_points)->capture_default_str();
    verify_cmd->add_option("--abreu-tol", va.cfg.abreu_tol)->envname("TORICALE_ABREU_TOL")->capture_default_str();
    verify_cmd->add_option("--flat-noise-tol", va.cfg.flat_noise_tol)->capture_default_str();
    verify_cmd->add_option("--hessian-tol", va.cfg.hessian_tol)->capture_default_str();
    verify_cmd->add_option("--slope-tol", va.cfg.slope_tol)->capture_default_str();
    verify_cmd->add_option("--derivative-tol", va.cfg.derivative_tol)->capture_default_str();
    verify_cmd->add_option("--det-variation-tol", va.cfg.det_variation_tol)->capture_default_str();
    verify_cmd->add_option("--coefficient-tol", va.acfg.coefficient_tol)->capture_default_str();
    verify_cmd->add_option("--exponent-tol", va.acfg.exponent_tol)->capture_default_str();
    verify_cmd->add_option("--vanishing-tol", va.acfg.vanishing_tol)->capture_default_str();
    verify_cmd->add_option("--ray-points", va.acfg.ray_points)->capture_default_str();
    verify_cmd->add_flag("--timing", va.timing, "report wall-clock seconds per check");
    va.out.add(verify_cmd);

    SurfaceArgs sa;
    auto* surface_cmd = app.add_subcommand("surface", "complex surface dual data");
    surface_cmd->add_option("weights", sa.weights, "a0 a1 a2")->required();
    surface_cmd->add_option("--degree", sa.degree, "interpolation degree")->capture_default_str();
    surface_cmd->add_option("--samples", sa.samples, "interpolation samples")->capture_default_str();
    surface_cmd->add_option("--held-out", sa.held_out, "held-out samples")->capture_default_str();
    surface_cmd->add_option("--points", sa.points, "conformal check points")->capture_default_str();
    surface_cmd->add_option("--tol", sa.tol, "conformal tolerance")->capture_default_str();
    sa.out.add(surface_cmd);

    PointsArgs pa;
    auto* points_cmd = app.add_subcommand("points", "dump sample points");
    pa.w.add(points_cmd);
    points_cmd->add_option("--grid", pa.grid, "grid points per interval")->capture_default_str();
    points_cmd->add_option("--random", pa.random, "quasi-random points instead of a grid")->capture_default_str();
    points_cmd->add_option("--seed", pa.seed)->envname("TORICALE_SEED")->capture_default_str();
    points_cmd->add_flag("--scalar", pa.scalar, "include the scalar curvature");
    pa.out.add(points_cmd);

    RayArgs ra;
    auto* ray_cmd = app.add_subcommand("ray", "potential along a ray to infinity");
    ra.w.add(ray_cmd);
    ray_cmd->add_option("--points", ra.cfg.ray_points)->capture_default_str();
    ray_cmd->add_option("--lo", ra.cfg.ray_lo)->capture_default_str();
    ray_cmd->add_option("--hi", ra.cfg.ray_hi)->capture_default_str();
    ra.out.add(ray_cmd);

    for (int i = 1; i < argc && config->target.empty(); ++i)
        for (const auto* sub : app.get_subcommands({}))
            if (sub->get_name() == argv[i]) config->target = argv[i];

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? kPass : kBadInput;
    }

    try {
        if (classify_cmd->parsed()) return run_classify(ca);
        if (verify_cmd->parsed()) return run_verify(va);
        if (surface_cmd->parsed()) return run_surface(sa);
        if (points_cmd->parsed()) return run_points(pa);
        if (ray_cmd->parsed()) return run_ray(ra);
    } catch (const InvalidInput& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const DomainError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return kBadInput;
    } catch (const NumericFailure& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    } catch (const std::exception& e) {
        std::cerr << "numeric failure: " << e.what() << '\n';
        return kNumeric;
    }
    return kBadInput;
}
