// Acceptance suite: one PASS/FAIL line per criterion. A criterion passes only
// if its numerical condition holds and it finishes within its time budget.
// Usage: acceptance <path-to-hqc-cli>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "hqc/averaging.hpp"
#include "hqc/fixtures.hpp"
#include "hqc/lipschitz.hpp"
#include "hqc/mapspec.hpp"
#include "hqc/operations.hpp"
#include "hqc/potential.hpp"
#include "hqc/qc_analysis.hpp"
#include "hqc/quasihyperbolic.hpp"
#include "support.hpp"

using namespace hqc;
namespace fs = std::filesystem;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;
};

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3g", v);
    return buf;
}

// Records a named sub-check; the criterion fails if any sub-check fails.
void expect(Outcome& o, bool ok, const std::string& what) {
    if (!ok) o.pass = false;
    if (!o.detail.empty()) o.detail += "; ";
    o.detail += (ok ? "" : "FAILED ") + what;
}

LoadedMap load(const Fixture& fx) { return build_map(fx.spec); }

bool constant_jacobian(const Fixture& fx) { return fx.constant_derivative; }

// ---------------------------------------------------------------------------

Outcome exact_linear_suite() {
    Outcome o;
    struct Case {
        const char* name;
        std::vector<double> sv;
        double j, ko, ki, alpha, l, inv;
    };
    const std::vector<Case> cases{
        {"linear_diag3", {2, 1, 1}, 2, 4, 2, std::cbrt(2.0), 2, 1},
        {"shear_c05", {1.5, 0.5}, 0.75, 3, 3, std::sqrt(0.75), 1.5, 0.5},
    };
    for (const Case& c : cases) {
        const HarmonicMap f = build_map(find_fixture(c.name)->spec).map;
        const std::size_t n = f.dim();
        const Domain ball = Domain::unit_ball(n);
        double dev = 0.0;
        for (const Vec& z : plan_points({Strategy::UniformBall, 64, 1, 0.95}, n)) {
            const Jet j = f.jet(z);
            const DistortionRecord r = distortion_at(j);
            for (std::size_t i = 0; i < n; ++i) dev = std::max(dev, std::abs(j.singular_values[i] - c.sv[i]));
            dev = std::max({dev, std::abs(j.jacobian - c.j), std::abs(r.k_outer - c.ko), std::abs(r.k_inner - c.ki)});
            dev = std::max(dev, std::abs(alpha(f, z, ball, BallQuadrature::monte_carlo(1024)).alpha - c.alpha));
        }
        const PairScanResult s = lipschitz_scan(f, {Strategy::UniformBall, 1000, 1, 0.999});
        dev = std::max({dev, std::abs(s.l_hat - c.l), std::abs(s.inv_hat - c.inv)});
        expect(o, dev <= 1e-9, std::string(c.name) + " max deviation " + fmt(dev) + " <= 1e-9");
    }
    return o;
}

Outcome bootstrap_exact() {
    Outcome o;
    const Rational p0 = parse_decimal("3.3");
    const ExactBootstrapTrace t = sobolev_bootstrap_exact(3, p0);
    const std::vector<Rational> want{Rational(33, 10), Rational(11, 3), Rational(33, 7), Rational(11)};
    expect(o, t.sequence == want, "sequence (33/10, 11/3, 33/7, 11) exact");
    expect(o, t.terminated && !t.restarted && t.sequence.back() > 6, "terminates at 11 > 6 without restart");
    const Rational eps = p0 / 3 - 1;
    bool growth = eps == Rational(1, 10);
    Rational pow2 = 1;
    for (std::size_t l = 0; l < t.sequence.size(); ++l, pow2 *= 2)
        if (l > 0) growth = growth && t.sequence[l] > 3 * (1 + pow2 * eps);
    expect(o, growth, "p_l > 3 (1 + 2^l 0.1) for l >= 1, exact");
    const BootstrapTrace d = sobolev_bootstrap(3, 3.3);
    double dev = d.sequence.size() == want.size() ? 0.0 : 1.0;
    for (std::size_t i = 0; i < std::min(d.sequence.size(), want.size()); ++i)
        dev = std::max(dev, std::abs(d.sequence[i] - static_cast<double>(want[i])));
    expect(o, dev <= 1e-12, "double trace matches, deviation " + fmt(dev));
    return o;
}

Outcome green_calibration() {
    Outcome o;
    testing::Rng rng(1001);
    for (std::size_t n : {2u, 3u}) {
        const double c1 = green_constant(n);
        double fd_err = 0.0, bound_slack = 1e300, refl_slack = 1e300;
        for (int k = 0; k < 100;) {
            const Vec x = rng.in_ball(n, 0.95), y = rng.in_ball(n, 0.95);
            if (distance(x, y) < 0.1) continue;
            ++k;
            const Vec g = green_gradient(x, y);
            Vec fd(n);
            const double h = 1e-5;
            for (std::size_t i = 0; i < n; ++i) {
                const Vec e = Vec::unit(n, i) * h;
                fd[i] = (green(x + e, y) - green(x - e, y)) / (2 * h);
            }
            fd_err = std::max(fd_err, distance(g, fd) / g.norm());
        }
        for (int k = 0; k < 1000;) {
            const Vec x = rng.in_ball(n), y = rng.in_ball(n);
            if (distance(x, y) < 1e-6) continue;
            ++k;
            const double bound = 2 * c1 * std::pow(distance(x, y), 1.0 - static_cast<double>(n));
            bound_slack = std::min(bound_slack, (bound - green_gradient(x, y).norm()) / bound);
        }
        for (int k = 0; k < 1000000; ++k) {
            const Vec x = rng.in_ball(n), y = rng.in_ball(n);
            refl_slack = std::min(refl_slack, (y - x * y.norm2()).norm() - y.norm() * distance(x, y));
        }
        const std::string tag = "n=" + std::to_string(n) + " ";
        expect(o, fd_err < 1e-6, tag + "FD rel err " + fmt(fd_err) + " < 1e-6");
        expect(o, bound_slack >= 0.0, tag + "gradient bound rel slack " + fmt(bound_slack) + " >= 0");
        expect(o, refl_slack >= -1e-12, tag + "reflection slack " + fmt(refl_slack) + " >= -1e-12");
    }
    return o;
}

Outcome green_potential_values() {
    Outcome o;
    const Density one = [](const Vec&) { return 1.0; };
    const double w0 = green_potential(one, {0, 0, 0}).value;
    const double w5 = green_potential(one, {0.5, 0, 0}).value;
    expect(o, std::abs(w0 + 1.0 / 6) <= 1e-3, "w(0) = " + fmt(w0) + " vs -1/6");
    expect(o, std::abs(w5 + 0.125) <= 1e-3, "w(0.5 e1) = " + fmt(w5) + " vs -0.125");
    return o;
}

Outcome qh_convergence() {
    Outcome o;
    const double radial = -std::log(0.1);
    auto rel = [](double v, double exact) { return std::abs(v - exact) / exact; };

    const double e2c = rel(QHGraph::build(Domain::unit_ball(2), 0.02).distance({0, 0}, {0.9, 0}), radial);
    const double e2f = rel(QHGraph::build(Domain::unit_ball(2), 0.01).distance({0, 0}, {0.9, 0}), radial);
    expect(o, e2f <= 0.02, "ball2 h=0.01 rel err " + fmt(e2f) + " <= 2%");
    expect(o, e2f < e2c, "ball2 halving h: " + fmt(e2c) + " -> " + fmt(e2f));

    const double e3c = rel(QHGraph::build(Domain::unit_ball(3), 0.08).distance({0, 0, 0}, {0.9, 0, 0}), radial);
    const double e3f = rel(QHGraph::build(Domain::unit_ball(3), 0.04).distance({0, 0, 0}, {0.9, 0, 0}), radial);
    expect(o, e3f <= 0.04, "ball3 h=0.04 rel err " + fmt(e3f) + " <= 4%");
    expect(o, e3f < e3c, "ball3 halving h: " + fmt(e3c) + " -> " + fmt(e3f));

    const Domain hs = Domain::half_space({0, 1}, 0);
    const Box win{{-3, 0}, {3, 4}};
    const Vec a{0.0, 0.2}, b{0.0, 2.0};
    const double vertical = std::log(2.0 / 0.2);
    const double ehc = rel(QHGraph::build(hs, 0.04, Neighborhood::Radius2, win).distance(a, b), vertical);
    const double ehf = rel(QHGraph::build(hs, 0.02, Neighborhood::Radius2, win).distance(a, b), vertical);
    expect(o, ehf <= 0.02, "half-plane h=0.02 rel err " + fmt(ehf) + " <= 2%");
    expect(o, ehf < ehc, "half-plane halving h: " + fmt(ehc) + " -> " + fmt(ehf));
    return o;
}

Outcome superharmonicity() {
    Outcome o;
    const std::vector<double> fractions{0.25, 0.5, 0.75};
    auto radii = [&](const Vec& z) {
        std::vector<double> r;
        for (double f : fractions) r.push_back(f * (1 - z.norm()));
        return r;
    };
    auto worst = [&](const ScalarField& s, std::size_t n, std::size_t centres, std::size_t order) {
        double m = 1e300;
        for (const Vec& z : plan_points({Strategy::UniformBall, centres, 1, 0.9}, n)) {
            const SuperharmonicReport r = superharmonicity_check(s, z, radii(z), Domain::unit_ball(n), order);
            for (const SphereSlack& sp : r.spheres) m = std::min(m, sp.slack + 3 * sp.error);
        }
        return m;
    };
    const LoadedMap p = load(*find_fixture("poisson_disk2"));
    const double mp = worst(log_jacobian(p.map), 2, 256, kSphereOrder);
    expect(o, mp >= 0.0, "poisson_disk2 log J: min(slack + 3 err) = " + fmt(mp) + " >= 0 (256 x 3)");
    const LoadedMap c = load(*find_fixture("cubic_gradient3"));
    const double mc = worst(log_det_hessian(*c.gradient), 3, 256, kSphereOrder);
    expect(o, mc >= 0.0, "cubic_gradient3 log det H: min(slack + 3 err) = " + fmt(mc) + " >= 0 (256 x 3)");

    double flat = 0.0;
    for (const Fixture& fx : fixture_registry()) {
        if (!constant_jacobian(fx)) continue;
        const ScalarField s = log_jacobian(load(fx).map);
        const std::size_t n = fx.spec.dim;
        for (const Vec& z : plan_points({Strategy::UniformBall, 16, 1, 0.9}, n)) {
            const SuperharmonicReport r = superharmonicity_check(s, z, radii(z), Domain::unit_ball(n), 16);
            for (const SphereSlack& sp : r.spheres) flat = std::max(flat, std::abs(sp.slack));
        }
    }
    expect(o, flat <= 1e-9, "constant-J fixtures |slack| " + fmt(flat) + " <= 1e-9");
    return o;
}

Outcome inequality_chains() {
    Outcome o;
    const BallQuadrature quad = BallQuadrature::monte_carlo(4096);
    for (const Fixture& fx : fixture_registry()) {
        if (fx.spec.dim != 3 || !fx.spec.potential || fx.expect_degenerate) continue;
        const LoadedMap lm = load(fx);
        const SamplingPlan plan{Strategy::UniformBall, 512, 1, 0.95};
        const double k = distortion_scan(lm.map, plan).sup_k_outer;
        const Domain target = fx.spec.target->build();
        double first = 1e300, second = 1e300;
        for (const Vec& z : plan_points(plan, 3)) {
            const Chain3dReport c = chain_check_3d_gradient(*lm.gradient, z, Domain::unit_ball(3), target, quad, k);
            first = std::min(first, c.first_slack);
            second = std::min(second, c.second_slack / c.jacobian);
        }
        expect(o, first >= 0.0 && second >= -1e-12,
               fx.spec.name + " alpha^3 <= J(1+3err) slack " + fmt(first) + ", J <= K^2 s_min^3 rel slack " + fmt(second));
    }
    for (const Fixture& fx : fixture_registry()) {
        if (fx.spec.dim != 2) continue;
        const LoadedMap lm = load(fx);
        // The conformal fixture has no declared target; |2z - z^2| < 3 on the disk.
        const Domain target = fx.spec.target ? fx.spec.target->build() : Domain::ball({0, 0}, 3.0);
        double first = 1e300, second = 1e300;
        for (const Vec& z : plan_points({Strategy::UniformBall, 256, 1, 0.95}, 2)) {
            const Chain2dReport c = chain_check_2d(lm.map, z, Domain::unit_ball(2), target, quad);
            first = std::min(first, c.first_slack / c.sigma_max2);
            second = std::min(second, c.second_slack);
        }
        expect(o, first >= -1e-12 && second >= 0.0,
               fx.spec.name + " s_max^2 >= J rel slack " + fmt(first) + ", J >= alpha^2(1-3err) slack " + fmt(second));
    }
    return o;
}

Outcome harnack() {
    Outcome o;
    for (const Fixture& fx : fixture_registry()) {
        if (!fx.spec.target) continue;
        const HarnackReport h = harnack_chain_check(load(fx).map, fx.spec.target->build(),
                                                    {Strategy::UniformBall, 2048, 1, 0.999});
        expect(o, h.min_slack >= -1e-10 && h.samples == 2048, fx.spec.name + " " + fmt(h.min_slack));
    }
    return o;
}

Outcome w_field() {
    Outcome o;
    for (const Fixture& fx : fixture_registry()) {
        const WFieldReport w = w_field_inequality(load(fx).map, {Strategy::UniformBall, 4096, 1, 0.999});
        expect(o, w.points.size() == 4096 && w.identity_residual <= 1e-10 && w.upper_slack >= -kWUpperRounding,
               fx.spec.name + " identity " + fmt(w.identity_residual) + ", upper " + fmt(w.upper_slack));
    }
    return o;
}

Outcome qh_bilipschitz() {
    Outcome o;
    const double h = 0.08;
    const QHGraph ball = QHGraph::build(Domain::unit_ball(3), h);
    for (const char* name : {"linear_diag3", "cubic_gradient3"}) {
        const Fixture& fx = *find_fixture(name);
        const HarmonicMap f = load(fx).map;
        const QHGraph target = fx.spec.exact_image ? QHGraph::build(fx.spec.target->build(), h)
                                                   : QHGraph::pulled_back(f, h);
        const BilipschitzStats s = qh_bilipschitz_scan(f, ball, target, {Strategy::UniformBall, 64, 1, 0.95});
        bool inside = s.pairs.size() == 64 && std::isfinite(s.m_hat);
        for (const PairRatio& p : s.pairs) inside = inside && p.ratio <= s.m_hat && p.ratio >= 1 / s.m_hat;
        expect(o, inside, std::string(name) + " M_hat " + fmt(s.m_hat) + " over " + std::to_string(s.pairs.size()) + " pairs");
    }
    // Identity: source lattice graph against the pulled-back graph of the identity.
    const double disc = std::abs(ball.distance({0, 0, 0}, {0.9, 0, 0}) + std::log(0.1)) / -std::log(0.1);
    const HarmonicMap id = HarmonicMap::identity(3);
    const BilipschitzStats s = qh_bilipschitz_scan(id, ball, QHGraph::pulled_back(id, h), {Strategy::UniformBall, 64, 1, 0.95});
    double dev = 0.0;
    for (const PairRatio& p : s.pairs) dev = std::max(dev, std::abs(p.ratio - 1));
    expect(o, dev <= 2 * disc, "identity max |ratio - 1| " + fmt(dev) + " <= 2 x " + fmt(disc));
    return o;
}

Outcome a_infinity() {
    Outcome o;
    const BallQuadrature quad = BallQuadrature::monte_carlo(4096);
    for (const Fixture& fx : fixture_registry()) {
        if (fx.expect_degenerate) continue;
        const LoadedMap lm = load(fx);
        const std::size_t n = fx.spec.dim;
        double slack = 1e300, eq = 0.0;
        for (const Vec& z : plan_points({Strategy::UniformBall, 64, 1, 0.95}, n)) {
            for (double p : {0.5, 1.0}) {
                const AInfinityResult a = a_infinity_ratio(lm.map, z, p, Domain::unit_ball(n), quad);
                slack = std::min(slack, 1 + 3 * a.error - a.ratio);
                eq = std::max(eq, std::abs(a.ratio - 1));
            }
        }
        bool ok = slack >= 0.0;
        std::string what = fx.spec.name + " slack " + fmt(slack);
        if (constant_jacobian(fx)) {
            ok = ok && eq <= 1e-10;
            what += ", |ratio - 1| " + fmt(eq);
        }
        expect(o, ok, what);
    }
    return o;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

Outcome cli_determinism(const std::string& cli) {
    Outcome o;
    const fs::path root = fs::temp_directory_path() / "hqc_acceptance";
    fs::remove_all(root);
    fs::create_directories(root);
    int codes[2];
    for (int run = 0; run < 2; ++run) {
        const fs::path dir = root / ("run" + std::to_string(run));
        const std::string cmd = cli + " fixtures run-all --out " + dir.string() + " > " +
                                (root / ("stdout" + std::to_string(run))).string() + " 2>&1";
        const int status = std::system(cmd.c_str());
        codes[run] = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    }
    expect(o, codes[0] == 0 && codes[1] == 0, "exit codes " + std::to_string(codes[0]) + ", " + std::to_string(codes[1]));
    std::size_t files = 0, differing = 0;
    for (const auto& e : fs::directory_iterator(root / "run0")) {
        ++files;
        const fs::path other = root / "run1" / e.path().filename();
        if (!fs::exists(other) || slurp(e.path()) != slurp(other)) ++differing;
    }
    std::size_t files1 = 0;
    for ([[maybe_unused]] const auto& e : fs::directory_iterator(root / "run1")) ++files1;
    const bool same_stdout = slurp(root / "stdout0") == slurp(root / "stdout1");
    expect(o, files > 0 && files == files1 && differing == 0 && same_stdout,
           std::to_string(files) + " report files, " + std::to_string(differing) + " differ, stdout identical: " +
               (same_stdout ? "yes" : "no"));
    fs::remove_all(root);
    return o;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-hqc-cli>\n");
        return 2;
    }
    const std::string cli = argv[1];
    struct Criterion {
        int id;
        const char* name;
        double budget;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {1, "exact linear suite", 5, exact_linear_suite},
        {2, "exponent bootstrap", 1, bootstrap_exact},
        {3, "Green calibration", 10, green_calibration},
        {4, "Green potential", 30, green_potential_values},
        {5, "quasihyperbolic convergence", 60, qh_convergence},
        {6, "superharmonicity", 120, superharmonicity},
        {7, "inequality chains", 120, inequality_chains},
        {8, "Harnack chain", 30, harnack},
        {9, "w-field identities", 10, w_field},
        {10, "quasihyperbolic bi-Lipschitz", 120, qh_bilipschitz},
        {11, "Jensen / A-infinity direction", 30, a_infinity},
        {12, "CLI determinism", 600, [&] { return cli_determinism(cli); }},
    };
    int failed = 0;
    for (const Criterion& c : criteria) {
        const auto t0 = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        const bool in_time = secs <= c.budget;
        const bool pass = o.pass && in_time;
        if (!pass) ++failed;
        std::printf("criterion %2d %s  %s: %s; %.2f s (budget %.0f s%s)\n", c.id, pass ? "PASS" : "FAIL", c.name,
                    o.detail.c_str(), secs, c.budget, in_time ? "" : ", EXCEEDED");
        std::fflush(stdout);
    }
    std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
    return failed == 0 ? 0 : 1;
}
