// Command-line front end: one subcommand per invocation, report JSON on
// stdout (or --out), optional CSV/SVG artifacts.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "hqc/errors.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/mapspec.hpp"
#include "hqc/operations.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

enum Exit { kOk = 0, kAssertion = 2, kInput = 3, kAccuracy = 4 };

hqc::MapSpec resolve_map(const std::string& arg) {
    if (fs::exists(arg)) return hqc::load_mapspec(arg);
    if (const hqc::Fixture* f = hqc::find_fixture(arg)) return f->spec;
    throw hqc::ParseError(arg, "neither a readable map file nor a fixture name");
}

hqc::DomainRecord resolve_domain(const std::string& arg) {
    if (auto d = hqc::named_domain(arg)) return *d;
    std::string text = arg;
    if (fs::exists(arg)) {
        std::ifstream in(arg, std::ios::binary);
        std::stringstream ss;
        ss << in.rdbuf();
        text = ss.str();
    } else if (arg.empty() || arg.front() != '{') {
        throw hqc::ParseError(arg, "unknown domain (expected ball2, ball3, halfspace2, halfspace3, a file or JSON)");
    }
    json j;
    try {
        j = json::parse(text);
    } catch (const json::parse_error& e) {
        throw hqc::ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return hqc::parse_domain(j, 0);
}

hqc::Vec parse_point(const std::string& text) {
    std::vector<double> v;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        std::size_t used = 0;
        double x = 0.0;
        try {
            x = std::stod(item, &used);
        } catch (const std::exception&) {
            throw hqc::ParseError(text, "bad coordinate '" + item + "'");
        }
        if (used != item.size()) throw hqc::ParseError(text, "bad coordinate '" + item + "'");
        v.push_back(x);
    }
    if (v.empty() || v.size() > 3) throw hqc::ParseError(text, "expected 1 to 3 comma-separated coordinates");
    return hqc::Vec(std::span<const double>(v));
}

struct Artifacts {
    std::string out;
    std::string csv;
    std::string svg;
};

int emit(hqc::Output& o, const Artifacts& a) {
    if (!a.csv.empty() && o.csv) {
        o.csv->write(a.csv);
        o.report.csv_path = a.csv;
    }
    if (!a.svg.empty() && o.svg) hqc::write_text(a.svg, *o.svg);
    const std::string text = hqc::write_json(o.report.to_json()) + "\n";
    if (a.out.empty())
        std::cout << text;
    else
        hqc::write_text(a.out, text);
    return o.report.passed() ? kOk : kAssertion;
}

void add_artifacts(CLI::App* cmd, Artifacts& a, bool csv, bool svg) {
    cmd->add_option("--out", a.out, "write the report JSON here instead of stdout");
    if (csv) cmd->add_option("--csv", a.csv, "write the per-point table here");
    if (svg) cmd->add_option("--svg", a.svg, "write the heatmap here (n = 2)");
}

int run_fixtures_all(const std::string& dir, const hqc::SuiteOptions& opts) {
    fs::create_directories(dir);
    json summary;
    summary["format_version"] = 1;
    summary["tool_version"] = hqc::kToolVersion;
    summary["operation"] = "fixtures-run-all";
    json list = json::array();
    bool all = true;
    for (const auto& fx : hqc::fixture_registry()) {
        hqc::Report r;
        try {
            r = hqc::fixture_suite(fx, opts);
        } catch (const hqc::Error& e) {
            r.operation = "fixture-suite";
            r.input_digest = hqc::fnv1a64(hqc::serialize(fx.spec));
            r.parameters["map"] = fx.spec.name;
            r.verdicts.push_back({"suite-error", e.what(), -1.0, 0.0, false});
        }
        const std::string path = (fs::path(dir) / (fx.spec.name + ".json")).string();
        hqc::write_text(path, hqc::write_json(r.to_json()) + "\n");
        json failed = json::array();
        for (const auto& v : r.verdicts)
            if (!v.pass) failed.push_back(v.id);
        list.push_back({{"fixture", fx.spec.name},
                        {"input_digest", r.input_digest},
                        {"verdicts", r.verdicts.size()},
                        {"failed", failed},
                        {"passed", r.passed()}});
        all = all && r.passed();
    }
    summary["fixtures"] = list;
    summary["passed"] = all;
    const std::string text = hqc::write_json(summary) + "\n";
    hqc::write_text((fs::path(dir) / "summary.json").string(), text);
    std::cout << text;
    return all ? kOk : kAssertion;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Numerical checks for harmonic quasiconformal maps of the unit ball"};
    // "-h" stays free for the grid-step option.
    app.set_help_flag("--help", "print help");
    app.set_version_flag("--version", hqc::kToolVersion);
    app.require_subcommand(1);

    // analyze
    std::string map_arg;
    Artifacts art;
    hqc::AnalyzeOptions an;
    std::string strategy = "uniform-ball";
    auto* analyze = app.add_subcommand("analyze", "distortion, delta, Bloch and Lipschitz scans");
    analyze->add_option("map", map_arg, "map file or fixture name")->required();
    analyze->add_option("--points", an.plan.count, "sample count")->capture_default_str();
    analyze->add_option("--seed", an.plan.seed, "sampling seed")->capture_default_str();
    analyze->add_option("--strategy", strategy, "uniform-ball | radial-stratified | near-boundary")
        ->capture_default_str();
    analyze->add_option("--pairs", an.pairs, "Lipschitz pairs")->capture_default_str();
    add_artifacts(analyze, art, true, false);

    // alpha-field
    hqc::AlphaFieldOptions af;
    std::size_t alpha_nodes = 4096;
    auto* alpha = app.add_subcommand("alpha-field", "averaged derivative over a grid");
    alpha->add_option("map", map_arg, "map file or fixture name")->required();
    alpha->add_option("--grid", af.grid, "cells per side")->capture_default_str();
    alpha->add_option("--max-radius", af.max_radius, "grid radius")->capture_default_str();
    alpha->add_option("--nodes", alpha_nodes, "Monte Carlo nodes per ball")->capture_default_str();
    add_artifacts(alpha, art, true, true);

    // superharmonic
    hqc::SuperharmonicOptions sh;
    std::string quantity = "logJ";
    auto* super = app.add_subcommand("superharmonic", "spherical-mean slack table");
    super->add_option("map", map_arg, "map file or fixture name")->required();
    super->add_option("--quantity", quantity, "logJ | logdetH")
        ->check(CLI::IsMember({"logJ", "logdetH"}))
        ->capture_default_str();
    super->add_option("--points", sh.centers.count, "sphere centres")->capture_default_str();
    super->add_option("--seed", sh.centers.seed, "sampling seed")->capture_default_str();
    super->add_option("--order", sh.sphere_order, "sphere rule order")->capture_default_str();
    add_artifacts(super, art, true, false);

    // qh-dist
    std::string domain_arg, x_arg, y_arg;
    hqc::QhDistOptions qd;
    auto* qhd = app.add_subcommand("qh-dist", "quasihyperbolic distance with a convergence table");
    qhd->add_option("domain", domain_arg, "ball2 | ball3 | halfspace2 | halfspace3 | JSON domain")->required();
    qhd->add_option("x", x_arg, "first point, e.g. 0,0")->required();
    qhd->add_option("y", y_arg, "second point")->required();
    qhd->add_option("--h", qd.h, "grid step")->capture_default_str();
    add_artifacts(qhd, art, true, false);

    // qh-bilip
    hqc::QhBilipOptions qb;
    auto* qhb = app.add_subcommand("qh-bilip", "quasihyperbolic bi-Lipschitz ratios");
    qhb->add_option("map", map_arg, "map file or fixture name")->required();
    qhb->add_option("--pairs", qb.pairs, "pair count")->capture_default_str();
    qhb->add_option("--seed", qb.seed, "sampling seed")->capture_default_str();
    qhb->add_option("--h", qb.h, "grid step (default 0.02 in 2D, 0.08 in 3D)");
    add_artifacts(qhb, art, true, false);

    // bootstrap
    int boot_n = 3;
    std::string boot_p0;
    auto* boot = app.add_subcommand("bootstrap", "integrability exponent recurrence");
    boot->add_option("--n", boot_n, "dimension")->required();
    boot->add_option("--p0", boot_p0, "starting exponent in (n, 2n), exact decimal")->required();
    add_artifacts(boot, art, false, false);

    // green-verify
    hqc::GreenVerifyOptions gv;
    auto* green = app.add_subcommand("green-verify", "Green kernel and potential calibration");
    green->add_option("--reflection-pairs", gv.reflection_pairs, "pairs for the reflection inequality")
        ->capture_default_str();
    green->add_option("--seed", gv.seed, "sampling seed")->capture_default_str();
    add_artifacts(green, art, false, false);

    // fixtures
    std::string fixtures_dir = "fixture-reports";
    hqc::SuiteOptions suite;
    auto* fixtures = app.add_subcommand("fixtures", "built-in fixture registry");
    fixtures->require_subcommand(1);
    auto* flist = fixtures->add_subcommand("list", "list fixtures");
    auto* frun = fixtures->add_subcommand("run-all", "run every fixture's property suite");
    frun->add_option("--out", fixtures_dir, "report directory")->capture_default_str();
    frun->add_option("--points", suite.points, "samples per check")->capture_default_str();
    frun->add_option("--seed", suite.seed, "sampling seed")->capture_default_str();
    auto* fexport = fixtures->add_subcommand("export", "write every fixture as a map file");
    fexport->add_option("--out", fixtures_dir, "output directory")->capture_default_str();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kInput;
    }

    try {
        if (*analyze) {
            an.plan.strategy = hqc::parse_strategy(strategy);
            auto o = hqc::analyze(resolve_map(map_arg), an);
            return emit(o, art);
        }
        if (*alpha) {
            af.quad = hqc::BallQuadrature::monte_carlo(alpha_nodes);
            auto o = hqc::alpha_field(resolve_map(map_arg), af);
            return emit(o, art);
        }
        if (*super) {
            sh.quantity = quantity == "logJ" ? hqc::Quantity::LogJacobian : hqc::Quantity::LogDetHessian;
            auto o = hqc::superharmonic(resolve_map(map_arg), sh);
            return emit(o, art);
        }
        if (*qhd) {
            auto o = hqc::qh_dist(resolve_domain(domain_arg), parse_point(x_arg), parse_point(y_arg), qd);
            return emit(o, art);
        }
        if (*qhb) {
            auto o = hqc::qh_bilip(resolve_map(map_arg), qb);
            return emit(o, art);
        }
        if (*boot) {
            auto o = hqc::bootstrap(boot_n, boot_p0);
            return emit(o, art);
        }
        if (*green) {
            auto o = hqc::green_verify(gv);
            return emit(o, art);
        }
        if (*flist) {
            json list = json::array();
            for (const auto& f : hqc::fixture_registry())
                list.push_back({{"name", f.spec.name}, {"dimension", f.spec.dim},
                                {"representation", hqc::to_string(f.spec.representation)},
                                {"description", f.description}});
            std::cout << hqc::write_json(list) << "\n";
            return kOk;
        }
        if (*frun) return run_fixtures_all(fixtures_dir, suite);
        if (*fexport) {
            fs::create_directories(fixtures_dir);
            for (const auto& f : hqc::fixture_registry()) {
                const std::string path = (fs::path(fixtures_dir) / (f.spec.name + ".json")).string();
                hqc::write_text(path, hqc::serialize(f.spec));
                std::cout << path << "\n";
            }
            return kOk;
        }
    } catch (const hqc::DegeneracyError& e) {
        std::cerr << "degeneracy: " << e.what() << "\n";
        return kAssertion;
    } catch (const hqc::RangeError& e) {
        std::cerr << "range: " << e.what() << "\n";
        return kAssertion;
    } catch (const hqc::AccuracyError& e) {
        std::cerr << "accuracy: " << e.what() << "\n";
        return kAccuracy;
    } catch (const hqc::ResolutionError& e) {
        std::cerr << "resolution: " << e.what() << "\n";
        return kAccuracy;
    } catch (const hqc::ConnectivityError& e) {
        std::cerr << "connectivity: " << e.what() << "\n";
        return kAccuracy;
    } catch (const hqc::Error& e) {
        std::cerr << "input error: " << e.what() << "\n";
        return kInput;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kInput;
    }
    return kOk;
}
