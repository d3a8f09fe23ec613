#include "hqc/operations.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hqc/errors.hpp"
#include "hqc/lipschitz.hpp"
#include "hqc/potential.hpp"
#include "hqc/qc_analysis.hpp"
#include "hqc/quasihyperbolic.hpp"

namespace hqc {

using nlohmann::json;

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

json vec_json(const Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

json plan_json(const SamplingPlan& p) {
    return {{"strategy", to_string(p.strategy)}, {"count", p.count}, {"seed", p.seed}, {"max_radius", p.max_radius}};
}

json quad_json(const BallQuadrature& q) {
    return {{"mode", q.mode == BallQuadrature::Mode::MonteCarlo ? "monte-carlo" : "product-rule"},
            {"nodes", q.nodes},
            {"seed", q.seed}};
}

std::string digest(const MapSpec& spec) { return fnv1a64(serialize(spec)); }

std::vector<std::string> coord_columns(std::size_t n, const std::string& prefix) {
    std::vector<std::string> c;
    for (std::size_t i = 0; i < n; ++i) c.push_back(prefix + std::to_string(i));
    return c;
}

void append(std::vector<double>& row, const Vec& v) { row.insert(row.end(), v.begin(), v.end()); }

std::vector<std::string> operator+(std::vector<std::string> a, const std::vector<std::string>& b) {
    a.insert(a.end(), b.begin(), b.end());
    return a;
}

Report start_report(const std::string& op, const MapSpec& spec) {
    Report r;
    r.operation = op;
    r.input_digest = digest(spec);
    r.parameters["map"] = spec.name;
    r.parameters["dimension"] = spec.dim;
    return r;
}

bool maps_into_unit_ball(const MapSpec& spec) {
    return spec.target && spec.target->kind == Domain::Kind::UnitBall;
}

// Graph of the image metric: the target's own lattice when the target is the
// exact image, otherwise the lattice of the ball pulled back through f.
QHGraph image_graph(const HarmonicMap& f, const MapSpec& spec, double h) {
    if (spec.target && spec.exact_image) {
        const Domain t = spec.target->build();
        return QHGraph::build(t, h, Neighborhood::Radius2, spec.target->window);
    }
    return QHGraph::pulled_back(f, h, Neighborhood::Radius2);
}

json graph_json(const QHGraph& g) {
    const auto& s = g.stats();
    return {{"nodes", s.nodes}, {"edges", s.edges}, {"h", s.h}, {"directions", s.directions},
            {"pullback", g.is_pullback()}};
}

double default_step(std::size_t n) { return n == 2 ? 0.02 : 0.08; }

}  // namespace

// ---------------------------------------------------------------------------

Output analyze(const MapSpec& spec, const AnalyzeOptions& opts) {
    const LoadedMap lm = build_map(spec);
    const HarmonicMap& f = lm.map;
    const std::size_t n = f.dim();
    Output out;
    Report& r = out.report;
    r = start_report("analyze", spec);
    r.parameters["plan"] = plan_json(opts.plan);
    r.parameters["pairs"] = opts.pairs;

    const DistortionScan scan = distortion_scan(f, opts.plan);
    CsvTable csv(coord_columns(n, "x") + std::vector<std::string>{"k_outer", "k_inner", "linear_dilatation", "jacobian"});
    for (const auto& rec : scan.records) {
        std::vector<double> row;
        append(row, rec.point);
        row.insert(row.end(), {rec.k_outer, rec.k_inner, rec.linear_dilatation, rec.jacobian});
        csv.add_row(row);
    }
    out.csv = std::move(csv);
    r.aggregates["distortion"] = {{"sup_k_outer", scan.sup_k_outer},
                                  {"sup_k_inner", scan.sup_k_inner},
                                  {"sup_linear_dilatation", scan.sup_linear_dilatation},
                                  {"sup_jacobian", scan.sup_jacobian},
                                  {"inf_jacobian", scan.inf_jacobian}};
    r.verdicts.push_back(make_verdict("jacobian-positive", "J_f(x) > 0", scan.inf_jacobian - kDegenerateJacobian));
    if (spec.declared_k) {
        const double k = *spec.declared_k;
        r.verdicts.push_back(make_verdict("declared-distortion", "max(K_O(f), K_I(f)) <= K",
                                          k - std::max(scan.sup_k_outer, scan.sup_k_inner), 1e-9 * k));
    }

    const BlochResult bloch = bloch_ratio(f, opts.plan);
    r.aggregates["bloch"] = {{"ratio", bloch.ratio}, {"sup_norm", bloch.sup_norm}, {"point", vec_json(bloch.point)}};

    const Estimate lp = lp_norm_Df(f, static_cast<double>(n),
                                   opts.plan.strategy == Strategy::NearBoundary
                                       ? SamplingPlan{Strategy::UniformBall, opts.plan.count, opts.plan.seed,
                                                      opts.plan.max_radius}
                                       : opts.plan);
    r.aggregates["lp_norm_Df"] = {{"p", n}, {"value", lp.value}, {"std_error", lp.std_error}};

    if (maps_into_unit_ball(spec)) {
        const PointValue d = delta_bound(f, opts.plan);
        r.aggregates["delta"] = {{"value", d.value}, {"point", vec_json(d.point)}};
        r.verdicts.push_back(make_strict_verdict("delta-positive", "1 - |x| + |f(x)| >= delta > 0", d.value));
    }

    const PairScanResult lip =
        lipschitz_scan(f, SamplingPlan{Strategy::UniformBall, opts.pairs, opts.plan.seed, opts.plan.max_radius});
    r.aggregates["lipschitz"] = {{"pairs", lip.pair_count},
                                 {"l_hat", lip.l_hat},
                                 {"inv_hat", lip.inv_hat},
                                 {"l_infinitesimal", lip.l_pair.infinitesimal},
                                 {"inv_infinitesimal", lip.inv_pair.infinitesimal},
                                 {"histogram",
                                  {{"lo", lip.histogram.lo}, {"hi", lip.histogram.hi}, {"counts", lip.histogram.counts}}}};
    r.verdicts.push_back(make_verdict("co-lipschitz-order", "0 <= inv_hat <= L_hat", lip.l_hat - lip.inv_hat));
    return out;
}

// ---------------------------------------------------------------------------

Output alpha_field(const MapSpec& spec, const AlphaFieldOptions& opts) {
    const LoadedMap lm = build_map(spec);
    const HarmonicMap& f = lm.map;
    const std::size_t n = f.dim();
    const Domain ball = Domain::unit_ball(n);
    const std::optional<Domain> target = spec.target ? std::optional<Domain>(spec.target->build()) : std::nullopt;
    if (opts.grid < 2) throw PreconditionError("alpha-field grid needs at least 2 cells per side");

    Output out;
    Report& r = out.report;
    r = start_report("alpha-field", spec);
    r.parameters["grid"] = opts.grid;
    r.parameters["max_radius"] = opts.max_radius;
    r.parameters["quadrature"] = quad_json(opts.quad);

    auto columns = coord_columns(n, "x") + std::vector<std::string>{"alpha", "alpha_error", "jacobian"};
    if (target) columns.push_back("koebe_ratio");
    CsvTable csv(columns);

    HeatmapData heat;
    heat.nx = heat.ny = opts.grid;
    heat.x_lo = heat.y_lo = -opts.max_radius;
    heat.x_hi = heat.y_hi = opts.max_radius;
    heat.values.assign(opts.grid * opts.grid, std::numeric_limits<double>::quiet_NaN());
    heat.title = "alpha_f for " + spec.name;
    heat.quantity = "alpha";

    // alpha^n <= J(z) holds where log J is superharmonic (planar maps, gradient maps).
    const bool chain = n == 2 || lm.gradient.has_value();
    double min_chain = kInf, lo = kInf, hi = 0.0, sum = 0.0;
    std::size_t cells = 0;
    const double step = 2.0 * opts.max_radius / static_cast<double>(opts.grid);
    for (std::size_t row = 0; row < opts.grid; ++row) {
        for (std::size_t col = 0; col < opts.grid; ++col) {
            Vec z(n);
            z[0] = -opts.max_radius + (col + 0.5) * step;
            z[1] = -opts.max_radius + (row + 0.5) * step;
            if (!(z.norm() < opts.max_radius)) continue;
            std::vector<double> rec;
            append(rec, z);
            double a = 0.0, err = 0.0, jac = f.jacobian(z), koebe = 0.0;
            if (target) {
                const KoebeResult k = koebe_ratio(f, z, ball, *target, opts.quad);
                a = k.alpha.alpha;
                err = k.alpha.error;
                koebe = k.ratio;
            } else {
                const AlphaResult ar = alpha(f, z, ball, opts.quad);
                a = ar.alpha;
                err = ar.error;
            }
            rec.insert(rec.end(), {a, err, jac});
            if (target) rec.push_back(koebe);
            csv.add_row(rec);
            heat.values[row * opts.grid + col] = a;
            lo = std::min(lo, a);
            hi = std::max(hi, a);
            sum += a;
            ++cells;
            if (chain) min_chain = std::min(min_chain, (jac * (1.0 + 3.0 * err) - std::pow(a, n)) / jac);
        }
    }
    out.csv = std::move(csv);
    r.aggregates["cells"] = cells;
    r.aggregates["alpha_min"] = lo;
    r.aggregates["alpha_max"] = hi;
    r.aggregates["alpha_mean"] = sum / static_cast<double>(std::max<std::size_t>(cells, 1));
    if (chain)
        r.verdicts.push_back(make_verdict("alpha-below-jacobian", "alpha_f(z)^n <= J_f(z) (1 + 3 err)", min_chain));
    if (n == 2) out.svg = heatmap_svg(heat, sum / static_cast<double>(std::max<std::size_t>(cells, 1)));
    return out;
}

// ---------------------------------------------------------------------------

Output superharmonic(const MapSpec& spec, const SuperharmonicOptions& opts) {
    const LoadedMap lm = build_map(spec);
    const HarmonicMap& f = lm.map;
    const std::size_t n = f.dim();
    const Domain ball = Domain::unit_ball(n);
    ScalarField q;
    std::string anchor;
    if (opts.quantity == Quantity::LogJacobian) {
        q = log_jacobian(f);
        anchor = "log J_f(z) >= mean of log J_f over S(z, r)";
    } else {
        if (!lm.gradient) throw PreconditionError("logdetH needs a gradient-potential map");
        q = log_det_hessian(*lm.gradient);
        anchor = "log det H_u(z) >= mean of log det H_u over S(z, r)";
    }

    Output out;
    Report& r = out.report;
    r = start_report("superharmonic", spec);
    r.parameters["quantity"] = opts.quantity == Quantity::LogJacobian ? "logJ" : "logdetH";
    r.parameters["centers"] = plan_json(opts.centers);
    r.parameters["radius_fractions"] = opts.radius_fractions;
    r.parameters["sphere_order"] = opts.sphere_order;

    CsvTable csv(coord_columns(n, "z") + std::vector<std::string>{"radius", "slack", "error"});
    double margin = kInf, min_slack = kInf, max_err = 0.0;
    for (const Vec& z : plan_points(opts.centers, n)) {
        const double d = 1.0 - z.norm();
        std::vector<double> radii;
        for (double t : opts.radius_fractions) radii.push_back(t * d);
        const SuperharmonicReport s = superharmonicity_check(q, z, radii, ball, opts.sphere_order);
        for (const auto& sp : s.spheres) {
            std::vector<double> row;
            append(row, z);
            row.insert(row.end(), {sp.radius, sp.slack, sp.error});
            csv.add_row(row);
        }
        margin = std::min(margin, s.margin);
        min_slack = std::min(min_slack, s.min_slack);
        max_err = std::max(max_err, s.error);
    }
    out.csv = std::move(csv);
    r.aggregates["spheres"] = opts.centers.count * opts.radius_fractions.size();
    r.aggregates["min_slack"] = min_slack;
    r.aggregates["max_error"] = max_err;
    r.verdicts.push_back(make_verdict("superharmonic", anchor + " (slack >= -3 err)", margin));
    return out;
}

// ---------------------------------------------------------------------------

std::optional<DomainRecord> named_domain(const std::string& name) {
    DomainRecord d;
    if (name == "ball2" || name == "ball3") {
        d.kind = Domain::Kind::UnitBall;
        d.dim = name == "ball2" ? 2 : 3;
        return d;
    }
    if (name == "halfspace2" || name == "halfspace3") {
        const std::size_t n = name == "halfspace2" ? 2 : 3;
        d.kind = Domain::Kind::HalfSpace;
        d.dim = n;
        d.faces.push_back({Vec::unit(n, n - 1), 0.0});
        Vec lo(n), hi(n);
        for (std::size_t i = 0; i + 1 < n; ++i) {
            lo[i] = -3.0;
            hi[i] = 3.0;
        }
        hi[n - 1] = 4.0;
        d.window = Box{lo, hi};
        return d;
    }
    return std::nullopt;
}

Output qh_dist(const DomainRecord& rec, const Vec& x, const Vec& y, const QhDistOptions& opts) {
    const Domain dom = rec.build();
    if (x.dim() != dom.dim()) throw_dimension_mismatch(dom.dim(), x.dim());
    if (y.dim() != dom.dim()) throw_dimension_mismatch(dom.dim(), y.dim());
    if (!dom.bounded() && !rec.window) throw PreconditionError("an unbounded domain needs a window box");
    if (!(opts.h > 0.0)) throw PreconditionError("grid step must be positive");

    Output out;
    Report& r = out.report;
    r.operation = "qh-dist";
    r.input_digest = fnv1a64(write_json(domain_to_json(rec), 0));
    r.parameters["domain"] = domain_to_json(rec);
    r.parameters["x"] = vec_json(x);
    r.parameters["y"] = vec_json(y);
    r.parameters["h"] = opts.h;

    CsvTable csv({"h", "distance", "nodes", "edges"});
    json table = json::array();
    std::vector<double> k;
    for (double h : {opts.h, opts.h / 2.0}) {
        const QHGraph g = QHGraph::build(dom, h, Neighborhood::Radius2, rec.window);
        k.push_back(g.distance(x, y));
        csv.add_row({h, k.back(), static_cast<double>(g.stats().nodes), static_cast<double>(g.stats().edges)});
        table.push_back({{"h", h}, {"distance", k.back()}, {"graph", graph_json(g)}});
    }
    out.csv = std::move(csv);
    r.aggregates["table"] = table;
    r.aggregates["distance"] = k[1];
    r.aggregates["difference"] = k[0] - k[1];
    // Lower bound valid in every proper subdomain: k >= j = log(1 + |x - y| / min d).
    const double j = std::log1p(distance(x, y) / std::min(dom.boundary_distance(x), dom.boundary_distance(y)));
    r.aggregates["j_lower_bound"] = j;
    r.verdicts.push_back(make_verdict("j-lower-bound", "k_D(x, y) >= log(1 + |x - y| / min(d(x), d(y)))",
                                      j > 0.0 ? (k[1] - j) / j : 0.0, 0.02));
    return out;
}

// ---------------------------------------------------------------------------

Output qh_bilip(const MapSpec& spec, const QhBilipOptions& opts) {
    const LoadedMap lm = build_map(spec);
    const HarmonicMap& f = lm.map;
    const std::size_t n = f.dim();
    const double h = opts.h > 0.0 ? opts.h : default_step(n);

    const QHGraph source = QHGraph::build(Domain::unit_ball(n), h);
    const QHGraph target = image_graph(f, spec, h);
    const SamplingPlan plan{Strategy::UniformBall, opts.pairs, opts.seed, 0.9};
    const BilipschitzStats s = qh_bilipschitz_scan(f, source, target, plan);

    Output out;
    Report& r = out.report;
    r = start_report("qh-bilip", spec);
    r.parameters["pairs"] = opts.pairs;
    r.parameters["seed"] = opts.seed;
    r.parameters["h"] = h;
    r.aggregates["source_graph"] = graph_json(source);
    r.aggregates["target_graph"] = graph_json(target);
    r.aggregates["min_ratio"] = s.min_ratio;
    r.aggregates["max_ratio"] = s.max_ratio;
    r.aggregates["m_hat"] = s.m_hat;
    r.aggregates["rejected"] = s.rejected;

    CsvTable csv(coord_columns(n, "x") + coord_columns(n, "y") +
                 std::vector<std::string>{"k_source", "k_target", "ratio"});
    for (const auto& p : s.pairs) {
        std::vector<double> row;
        append(row, p.x);
        append(row, p.y);
        row.insert(row.end(), {p.k_source, p.k_target, p.ratio});
        csv.add_row(row);
    }
    out.csv = std::move(csv);
    r.verdicts.push_back(make_strict_verdict("qh-bilipschitz", "k_D(x, y) / M <= k_D'(f x, f y) <= M k_D(x, y), M finite",
                                             std::isfinite(s.m_hat) ? 1.0 / s.m_hat : -1.0));

    if (spec.declared_k) {
        const GehringOsgoodResult go = gehring_osgood_check(f, source, target, plan, *spec.declared_k);
        r.aggregates["gehring_osgood"] = {{"c_hat", go.c_hat}, {"exponent", go.exponent}, {"pairs", go.pairs}};
    }
    return out;
}

// ---------------------------------------------------------------------------

Rational parse_decimal(const std::string& text) {
    std::size_t i = 0;
    bool neg = false;
    if (i < text.size() && (text[i] == '+' || text[i] == '-')) neg = text[i++] == '-';
    boost::multiprecision::cpp_int mant = 0;
    int scale = 0, digits = 0;
    bool dot = false;
    for (; i < text.size(); ++i) {
        const char c = text[i];
        if (c >= '0' && c <= '9') {
            mant = mant * 10 + (c - '0');
            ++digits;
            if (dot) --scale;
        } else if (c == '.' && !dot) {
            dot = true;
        } else {
            break;
        }
    }
    if (digits == 0) throw ParseError("p0", "not a decimal number: '" + text + "'");
    if (i < text.size() && (text[i] == 'e' || text[i] == 'E')) {
        const std::string ex = text.substr(i + 1);
        std::size_t used = 0;
        int e = 0;
        try {
            e = std::stoi(ex, &used);
        } catch (const std::exception&) {
            throw ParseError("p0", "bad exponent in '" + text + "'");
        }
        if (used != ex.size() || std::abs(e) > 400) throw ParseError("p0", "bad exponent in '" + text + "'");
        scale += e;
        i = text.size();
    }
    if (i != text.size()) throw ParseError("p0", "trailing characters in '" + text + "'");
    Rational q(mant);
    const Rational ten(10);
    for (int k = 0; k < std::abs(scale); ++k) {
        if (scale > 0)
            q *= ten;
        else
            q /= ten;
    }
    return neg ? Rational(-q) : q;
}

Output bootstrap(int n, const std::string& p0_text) {
    const Rational p0 = parse_decimal(p0_text);
    const double p0d = static_cast<double>(p0);
    const BootstrapTrace t = sobolev_bootstrap(n, p0d);
    const ExactBootstrapTrace e = sobolev_bootstrap_exact(n, p0);

    Output out;
    Report& r = out.report;
    r.operation = "bootstrap";
    r.input_digest = fnv1a64(std::to_string(n) + "/" + to_string(p0));
    r.parameters["n"] = n;
    r.parameters["p0"] = to_string(p0);
    r.aggregates["sequence"] = t.sequence;
    json exact = json::array();
    for (const auto& q : e.sequence) exact.push_back(to_string(q));
    r.aggregates["exact_sequence"] = exact;
    r.aggregates["epsilon"] = t.epsilon;
    r.aggregates["terminated"] = e.terminated;
    r.aggregates["restarted"] = e.restarted;

    // p_l > n (1 + 2^l eps) for l >= 1, checked in exact arithmetic.
    const Rational nn(n);
    const Rational eps = e.start / nn - 1;
    std::optional<Rational> growth;
    Rational pow2(1);
    for (std::size_t l = 1; l < e.sequence.size(); ++l) {
        pow2 *= 2;
        const Rational slack = e.sequence[l] - nn * (1 + pow2 * eps);
        if (!growth || slack < *growth) growth = slack;
    }
    if (growth) {
        Verdict v = make_strict_verdict("exponent-growth", "p_l > n (1 + 2^l eps)", static_cast<double>(*growth));
        v.pass = *growth > 0;
        r.verdicts.push_back(v);
    }
    const Rational last_gap = e.sequence.back() - 2 * nn;
    Verdict v = make_strict_verdict("terminates", "p_L > 2n", static_cast<double>(last_gap));
    v.pass = e.terminated && last_gap > 0;
    r.verdicts.push_back(v);
    return out;
}

// ---------------------------------------------------------------------------

Output green_verify(const GreenVerifyOptions& opts) {
    Output out;
    Report& r = out.report;
    r.operation = "green-verify";
    r.input_digest = fnv1a64("green-verify");
    r.parameters = {{"fd_pairs", opts.fd_pairs},
                    {"bound_pairs", opts.bound_pairs},
                    {"reflection_pairs", opts.reflection_pairs},
                    {"seed", opts.seed}};
    const CounterStream rng(opts.seed, stream_id::kRandomTest);
    std::uint64_t counter = 0;
    auto draw = [&](std::size_t n) {
        const Vec v = uniform_ball_point(rng, n, counter);
        counter += 16;
        return v;
    };

    for (std::size_t n : {2u, 3u}) {
        const std::string tag = "n" + std::to_string(n);
        // Analytic gradient against central differences.
        double worst_fd = 0.0;
        for (std::size_t k = 0; k < opts.fd_pairs;) {
            const Vec x = draw(n) * 0.95, y = draw(n) * 0.95;
            if (distance(x, y) < 0.1) continue;
            ++k;
            const Vec g = green_gradient(x, y);
            Vec fd(n);
            constexpr double step = 1e-5;
            for (std::size_t i = 0; i < n; ++i) {
                const Vec e = Vec::unit(n, i) * step;
                fd[i] = (green(x + e, y) - green(x - e, y)) / (2.0 * step);
            }
            worst_fd = std::max(worst_fd, (fd - g).norm() / g.norm());
        }
        r.aggregates[tag]["gradient_fd_max_relative_error"] = worst_fd;
        r.verdicts.push_back(make_verdict("green-gradient-fd-" + tag,
                                          "grad_x G matches central differences (rel. err <= 1e-6)", 1e-6 - worst_fd));

        // |grad_x G| <= 2 c1 |x - y|^{1-n}.
        double worst_bound = kInf;
        const double c1 = green_constant(n);
        for (std::size_t k = 0; k < opts.bound_pairs;) {
            const Vec x = draw(n), y = draw(n);
            if (distance(x, y) < 1e-6) continue;
            ++k;
            const double bound = 2.0 * c1 * std::pow(distance(x, y), 1.0 - static_cast<double>(n));
            worst_bound = std::min(worst_bound, (bound - green_gradient(x, y).norm()) / bound);
        }
        r.aggregates[tag]["gradient_bound_min_slack"] = worst_bound;
        r.verdicts.push_back(
            make_verdict("green-gradient-bound-" + tag, "|grad_x G(x, y)| <= 2 c1 |y - x|^{1-n}", worst_bound));

        // |y| |x - y| <= |y - |y|^2 x|, relative slack.
        double worst_refl = kInf;
        for (std::size_t k = 0; k < opts.reflection_pairs; ++k) {
            const Vec x = draw(n), y = draw(n);
            const double lhs = y.norm() * distance(x, y);
            const double rhs = (y - x * y.norm2()).norm();
            worst_refl = std::min(worst_refl, (rhs - lhs) / std::max(rhs, 1e-300));
        }
        r.aggregates[tag]["reflection_min_slack"] = worst_refl;
        r.verdicts.push_back(
            make_verdict("reflection-" + tag, "|y| |x - y| <= |y - |y|^2 x|", worst_refl, 1e-12));

        // Green potential of h = 1: w = (|x|^2 - 1) / (2n).
        const Density one = [](const Vec&) { return 1.0; };
        double worst_w = 0.0;
        json wt = json::array();
        for (double t : {0.0, 0.5}) {
            const Vec x = Vec::unit(n, 0) * t;
            const PotentialValue w = green_potential(one, x, {});
            const double exact = (t * t - 1.0) / (2.0 * static_cast<double>(n));
            worst_w = std::max(worst_w, std::abs(w.value - exact));
            wt.push_back({{"x", vec_json(x)}, {"value", w.value}, {"exact", exact}, {"error", w.error}});
        }
        r.aggregates[tag]["green_potential"] = wt;
        r.verdicts.push_back(
            make_verdict("green-potential-" + tag, "int G(x, y) dy = (|x|^2 - 1) / (2n) within 1e-3", 1e-3 - worst_w));

        // Gradient of that potential: x / n.
        const Vec x = Vec::unit(n, 0) * 0.3;
        const PotentialGradient gw = green_potential_gradient(one, x, {});
        const double gerr = (gw.value - x / static_cast<double>(n)).norm();
        r.aggregates[tag]["green_potential_gradient_error"] = gerr;
        r.verdicts.push_back(
            make_verdict("green-potential-gradient-" + tag, "grad int G(x, y) dy = x / n within 1e-6", 1e-6 - gerr));
    }

    // Riesz potentials at the origin of B^3: both equal 2 pi.
    const Vec o(3);
    const PotentialValue r1 = riesz_potential(2.0, [](const Vec&) { return 1.0; }, o);
    const PotentialValue r2 = riesz_potential(1.0, [](const Vec& y) { return y.norm(); }, o);
    const double tau = 2.0 * std::numbers::pi;
    r.aggregates["riesz"] = {{"s2_h1", r1.value}, {"s1_h_abs", r2.value}, {"exact", tau}};
    r.verdicts.push_back(make_verdict("riesz-s2", "I_2 1 (0) = int_{B^3} |y|^{-1} dy = 2 pi",
                                      1e-8 - std::abs(r1.value - tau)));
    r.verdicts.push_back(make_verdict("riesz-s1", "I_1 |y| (0) = int_{B^3} |y|^{-1} dy = 2 pi",
                                      1e-8 - std::abs(r2.value - tau)));
    return out;
}

// ---------------------------------------------------------------------------

Report fixture_suite(const Fixture& fx, const SuiteOptions& opts) {
    const MapSpec& spec = fx.spec;
    const LoadedMap lm = build_map(spec);
    const HarmonicMap& f = lm.map;
    const std::size_t n = f.dim();
    const Domain ball = Domain::unit_ball(n);
    Report r = start_report("fixture-suite", spec);
    r.parameters["points"] = opts.points;
    r.parameters["seed"] = opts.seed;
    const SamplingPlan plan{Strategy::UniformBall, opts.points, opts.seed, 0.999};
    const auto pts = plan_points(plan, n);

    // Components are harmonic.
    double lap = 0.0;
    for (const Vec& x : pts)
        for (const auto& c : f.components()) lap = std::max(lap, std::abs(laplacian_residual(c, x)));
    r.aggregates["max_laplacian_residual"] = lap;
    r.verdicts.push_back(make_verdict("harmonic", "Laplacian f^j = 0", -lap, 1e-9));

    // Identities of w = 1 - |f|^2.
    const WFieldReport w = w_field_inequality(f, SamplingPlan{Strategy::UniformBall, 4096, opts.seed, 0.999});
    r.aggregates["w_field"] = {{"identity_residual", w.identity_residual},
                               {"upper_slack", w.upper_slack},
                               {"lower_slack", w.lower_slack},
                               {"best_lower_constant", w.best_lower_constant},
                               {"a_hat", w.a_hat},
                               {"b_hat", w.b_hat}};
    r.verdicts.push_back(make_verdict("w-laplacian", "Laplacian (1 - |f|^2) = -2 ||Df||_HS^2",
                                      w.identity_tolerance - w.identity_residual));
    r.verdicts.push_back(make_verdict("w-gradient-upper", "|grad w| <= 2 |f| |Df|", w.upper_slack, kWUpperRounding));
    r.verdicts.push_back(make_verdict("w-gradient-lower", "|grad w| >= 2 |f| |Df| / H", w.lower_slack, 1e-12));

    if (lm.gradient) {
        double asym = 0.0;
        for (const Vec& x : pts) {
            const Mat d = f.derivative(x);
            asym = std::max(asym, std::sqrt((d - d.transpose()).frobenius2()) / std::sqrt(d.frobenius2()));
        }
        r.aggregates["max_relative_asymmetry"] = asym;
        r.verdicts.push_back(make_verdict("hessian-symmetric", "Df = H_u is symmetric", -asym, 1e-12));
    }

    if (fx.expect_degenerate) {
        const GradientCertificate cert =
            gradient_map_certificate(*lm.gradient, SamplingPlan{Strategy::UniformBall, 10000, opts.seed, 0.999});
        r.aggregates["certificate"] = {{"passed", cert.passed}, {"inf_jacobian", cert.inf_jacobian}};
        r.verdicts.push_back(make_strict_verdict("certificate-rejects", "det H_u changes sign in B^n", -cert.inf_jacobian));
        return r;
    }

    // Jet consistency and distortion.
    double jet_err = 0.0;
    for (const Vec& x : pts) {
        const Jet j = f.jet(x);
        double prod = 1.0;
        for (double s : j.singular_values) prod *= s;
        jet_err = std::max(jet_err, std::abs(std::abs(j.jacobian) - prod) / std::max(prod, 1e-300));
    }
    r.verdicts.push_back(make_verdict("jet-consistent", "|J_f| = prod sigma_i", -jet_err, 1e-10));

    const DistortionScan scan = distortion_scan(f, plan);
    r.aggregates["distortion"] = {{"sup_k_outer", scan.sup_k_outer},
                                  {"sup_k_inner", scan.sup_k_inner},
                                  {"sup_linear_dilatation", scan.sup_linear_dilatation},
                                  {"inf_jacobian", scan.inf_jacobian},
                                  {"sup_jacobian", scan.sup_jacobian}};
    r.verdicts.push_back(make_verdict("jacobian-positive", "J_f(x) > 0", scan.inf_jacobian - kDegenerateJacobian));
    if (spec.declared_k) {
        const double k = *spec.declared_k;
        r.verdicts.push_back(make_verdict("declared-distortion", "max(K_O(f), K_I(f)) <= K",
                                          k - std::max(scan.sup_k_outer, scan.sup_k_inner), 1e-9 * k));
    }
    if (fx.constant_derivative) {
        double dev = 0.0;
        const auto& a = scan.records.front();
        for (const auto& b : scan.records)
            dev = std::max({dev, std::abs(b.k_outer - a.k_outer), std::abs(b.k_inner - a.k_inner),
                            std::abs(b.jacobian - a.jacobian)});
        r.verdicts.push_back(make_verdict("constant-distortion", "K_O, K_I, J constant for constant Df", -dev, 1e-12));
    }
    if (lm.gradient) {
        const GradientCertificate cert =
            gradient_map_certificate(*lm.gradient, SamplingPlan{Strategy::UniformBall, 10000, opts.seed, 0.999});
        r.aggregates["certificate_inf_jacobian"] = cert.inf_jacobian;
        r.verdicts.push_back(make_strict_verdict("certificate", "det H_u > 0 in B^n", cert.inf_jacobian));
    }

    const BlochResult bloch = bloch_ratio(f, plan);
    r.aggregates["bloch_ratio"] = bloch.ratio;
    const PairScanResult lip = lipschitz_scan(f, SamplingPlan{Strategy::UniformBall, 1000, opts.seed, 0.999});
    r.aggregates["l_hat"] = lip.l_hat;
    r.aggregates["inv_hat"] = lip.inv_hat;
    r.verdicts.push_back(make_verdict("lipschitz-order", "0 <= inv_hat <= L_hat", lip.l_hat - lip.inv_hat));

    if (spec.target) {
        const Domain target = spec.target->build();
        r.verdicts.push_back(make_strict_verdict("co-lipschitz", "|f(x) - f(y)| >= |x - y| / L', L' finite", lip.inv_hat));
        const HarnackReport h =
            harnack_chain_check(f, target, SamplingPlan{Strategy::UniformBall, 2048, opts.seed, 0.999});
        r.aggregates["harnack_min_slack"] = h.min_slack;
        r.verdicts.push_back(make_verdict("harnack",
                                          "d(f(z), dT) >= (1 - |z|) / (1 + |z|)^{n-1} d(f(0), dT)",
                                          h.min_slack, kHarnackTolerance));
        if (maps_into_unit_ball(spec)) {
            const PointValue d = delta_bound(f, plan);
            r.aggregates["delta"] = d.value;
            r.verdicts.push_back(make_strict_verdict("delta-positive", "1 - |x| + |f(x)| >= delta > 0", d.value));
        }
    }

    // Averaged derivative: Jensen direction, and the chains where they apply.
    const BallQuadrature quad = BallQuadrature::monte_carlo(4096, opts.seed);
    const auto centres = plan_points(SamplingPlan{Strategy::UniformBall, 16, opts.seed, 0.9}, n);
    double jensen = kInf, jensen_eq = 0.0;
    for (const Vec& z : centres) {
        const AInfinityResult a = a_infinity_ratio(f, z, 0.5, ball, quad);
        jensen = std::min(jensen, 1.0 + 3.0 * a.error - a.ratio);
        jensen_eq = std::max(jensen_eq, std::abs(a.ratio - 1.0));
    }
    r.verdicts.push_back(make_verdict("jensen", "alpha_f(z)^n <= (mean_{B_z} J_f^p)^{1/p}, p = 1/2", jensen));
    if (fx.constant_derivative)
        r.verdicts.push_back(make_verdict("jensen-equality", "A_inf ratio = 1 for constant J_f", -jensen_eq, 1e-10));

    if (n == 2 || lm.gradient) {
        SuperharmonicOptions so;
        so.quantity = n == 2 ? Quantity::LogJacobian : Quantity::LogDetHessian;
        so.centers = SamplingPlan{Strategy::UniformBall, n == 2 ? 32u : 8u, opts.seed, 0.9};
        so.sphere_order = n == 2 ? kSphereOrder : 32;
        const Output s = superharmonic(spec, so);
        r.aggregates["superharmonic_min_slack"] = s.report.aggregates["min_slack"];
        r.verdicts.push_back(s.report.verdicts.front());
    }
    if (spec.target) {
        const Domain target = spec.target->build();
        double first = kInf, second = kInf;
        for (const Vec& z : centres) {
            if (n == 2) {
                const Chain2dReport c = chain_check_2d(f, z, ball, target, quad);
                first = std::min(first, c.first_slack);
                second = std::min(second, c.second_slack);
            } else if (lm.gradient) {
                const Chain3dReport c =
                    chain_check_3d_gradient(*lm.gradient, z, ball, target, quad, scan.sup_k_outer);
                first = std::min(first, c.first_slack);
                second = std::min(second, c.second_slack);
            }
        }
        if (n == 2) {
            r.verdicts.push_back(make_verdict("chain-2d-upper", "sigma_max^2 >= J_f", first));
            r.verdicts.push_back(make_verdict("chain-2d-lower", "J_f >= alpha_f^2 (1 - 3 err)", second));
        } else if (lm.gradient) {
            r.verdicts.push_back(make_verdict("chain-3d-lower", "alpha_f^3 <= J_f (1 + 3 err)", first));
            r.verdicts.push_back(make_verdict("chain-3d-upper", "J_f <= K^2 sigma_min^3", second));
        }

        // Quasihyperbolic bi-Lipschitz ratios at a coarse step.
        QhBilipOptions qo;
        qo.pairs = 8;
        qo.seed = opts.seed;
        qo.h = n == 2 ? 0.04 : 0.1;
        const Output q = qh_bilip(spec, qo);
        r.aggregates["qh_m_hat"] = q.report.aggregates["m_hat"];
        r.verdicts.push_back(q.report.verdicts.front());
    }
    return r;
}

}  // namespace hqc
