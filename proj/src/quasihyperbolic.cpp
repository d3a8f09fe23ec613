#include "hqc/quasihyperbolic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <queue>
#include <unordered_map>

#include "hqc/errors.hpp"
#include "hqc/parallel.hpp"
#include "hqc/quadrature.hpp"

namespace hqc {

std::vector<std::array<int, 3>> neighbor_offsets(std::size_t n, Neighborhood nb) {
    if (n != 2 && n != 3) throw DimensionError("quasihyperbolic graphs support n = 2 or 3");
    const int r = nb == Neighborhood::Radius1 ? 1 : 2;
    const int rz = n == 3 ? r : 0;
    std::vector<std::array<int, 3>> out;
    for (int a = -r; a <= r; ++a)
        for (int b = -r; b <= r; ++b)
            for (int c = -rz; c <= rz; ++c) {
                if (a == 0 && b == 0 && c == 0) continue;
                if (std::gcd(std::gcd(std::abs(a), std::abs(b)), std::abs(c)) != 1) continue;
                out.push_back({a, b, c});
            }
    return out;
}

// ---------------------------------------------------------------------------

ImageBoundary::ImageBoundary(const HarmonicMap& f, std::size_t order) : f_(f) {
    const std::size_t n = f.dim();
    if (order == 0) order = n == 2 ? 2048 : 64;
    const SphereRule rule = sphere_rule(n, order);
    zeta_ = rule.nodes;
    image_.resize(zeta_.size());
    parallel_for(zeta_.size(), [&](std::size_t i) { image_[i] = f_.boundary_value(zeta_[i]); });
}

double ImageBoundary::distance(const Vec& p) const {
    std::size_t best = 0;
    double best_d2 = std::numeric_limits<double>::infinity();
    for (std::size_t i = 0; i < image_.size(); ++i) {
        double d2 = 0.0;
        for (std::size_t j = 0; j < p.dim(); ++j) {
            const double t = image_[i][j] - p[j];
            d2 += t * t;
        }
        if (d2 < best_d2) {
            best_d2 = d2;
            best = i;
        }
    }
    // Gauss-Newton on the sphere, tangent-plane parameterization.
    const std::size_t n = p.dim();
    Vec zeta = zeta_[best];
    Vec fz = image_[best];
    double cur = best_d2;
    constexpr double eps = 1e-6;
    for (int it = 0; it < 8; ++it) {
        // Orthonormal tangent basis at zeta.
        std::vector<Vec> tangents;
        if (n == 2) {
            tangents.push_back(Vec{-zeta[1], zeta[0]});
        } else {
            const std::size_t k = std::abs(zeta[0]) < 0.9 ? 0 : 1;
            Vec e = Vec::unit(3, k);
            Vec t1 = e - zeta * zeta.dot(e);
            t1 /= t1.norm();
            Vec t2{zeta[1] * t1[2] - zeta[2] * t1[1], zeta[2] * t1[0] - zeta[0] * t1[2],
                   zeta[0] * t1[1] - zeta[1] * t1[0]};
            tangents = {t1, t2};
        }
        const std::size_t m = tangents.size();
        std::vector<Vec> cols;
        for (const Vec& t : tangents) {
            const Vec plus = f_.boundary_value((zeta + t * eps) / (zeta + t * eps).norm());
            const Vec minus = f_.boundary_value((zeta - t * eps) / (zeta - t * eps).norm());
            cols.push_back((plus - minus) / (2.0 * eps));
        }
        const Vec r = fz - p;
        double step[2] = {0.0, 0.0};
        if (m == 1) {
            const double a = cols[0].norm2();
            if (a <= 0.0) break;
            step[0] = -cols[0].dot(r) / a;
        } else {
            const double a = cols[0].norm2(), b = cols[0].dot(cols[1]), c = cols[1].norm2();
            const double det = a * c - b * b;
            if (!(std::abs(det) > 0.0)) break;
            const double g0 = cols[0].dot(r), g1 = cols[1].dot(r);
            step[0] = -(c * g0 - b * g1) / det;
            step[1] = -(a * g1 - b * g0) / det;
        }
        Vec cand = zeta;
        for (std::size_t k = 0; k < m; ++k) cand += tangents[k] * step[k];
        cand /= cand.norm();
        const Vec fc = f_.boundary_value(cand);
        const double d2 = (fc - p).norm2();
        if (!(d2 < cur)) break;
        const bool done = cur - d2 <= 1e-14 * cur;
        zeta = cand;
        fz = fc;
        cur = d2;
        if (done) break;
    }
    return std::sqrt(cur);
}

// ---------------------------------------------------------------------------

struct QHGraph::Impl {
    std::size_t n = 2;
    double h = 0.0;
    Domain domain = Domain::unit_ball(2);
    bool pullback = false;
    std::optional<HarmonicMap> map;
    std::shared_ptr<ImageBoundary> image_boundary;

    std::array<int, 3> lo{0, 0, 0};
    std::array<int, 3> size{1, 1, 1};
    std::vector<std::int32_t> node_of_cell;
    std::vector<std::array<int, 3>> cell;  // lattice coordinates per node
    std::vector<double> pos;               // metric coordinates, stride n
    std::vector<double> dist;              // boundary distance in the metric space
    std::vector<std::array<int, 3>> offsets;
    std::vector<double> offset_len;  // |offset| h (source graphs)
    QHGraphStats stats;

    std::int64_t cell_index(const std::array<int, 3>& c) const {
        for (std::size_t k = 0; k < 3; ++k)
            if (c[k] < lo[k] || c[k] >= lo[k] + size[k]) return -1;
        return (static_cast<std::int64_t>(c[0] - lo[0]) * size[1] + (c[1] - lo[1])) * size[2] + (c[2] - lo[2]);
    }
    std::int32_t node_at(const std::array<int, 3>& c) const {
        const std::int64_t i = cell_index(c);
        return i < 0 ? -1 : node_of_cell[static_cast<std::size_t>(i)];
    }
    double length(std::size_t u, std::size_t v) const {
        double s = 0.0;
        for (std::size_t k = 0; k < n; ++k) {
            const double t = pos[u * n + k] - pos[v * n + k];
            s += t * t;
        }
        return std::sqrt(s);
    }
    Vec position(std::size_t u) const {
        Vec p(n);
        for (std::size_t k = 0; k < n; ++k) p[k] = pos[u * n + k];
        return p;
    }

    struct Query {
        Vec source_point;  // lattice-space coordinates
        Vec metric_point;
        double d = 0.0;
        std::vector<std::pair<std::int32_t, double>> attach;
    };

    Query make_query(const Vec& x) const {
        if (x.dim() != n) throw_dimension_mismatch(n, x.dim());
        Query q;
        q.source_point = x;
        const double d_src = domain.boundary_distance(x);
        if (d_src < h) throw DomainError("query point closer than one grid step to the boundary", x);
        if (pullback) {
            q.metric_point = map->evaluate(x);
            q.d = image_boundary->distance(q.metric_point);
        } else {
            q.metric_point = x;
            q.d = d_src;
        }
        std::array<int, 3> a{0, 0, 0}, b{0, 0, 0};
        for (std::size_t k = 0; k < n; ++k) {
            a[k] = static_cast<int>(std::ceil(x[k] / h - 2.0));
            b[k] = static_cast<int>(std::floor(x[k] / h + 2.0));
        }
        for (int i = a[0]; i <= b[0]; ++i)
            for (int j = a[1]; j <= b[1]; ++j)
                for (int k = a[2]; k <= b[2]; ++k) {
                    const std::int32_t v = node_at({i, j, k});
                    if (v < 0) continue;
                    double len = 0.0;
                    for (std::size_t c = 0; c < n; ++c) {
                        const double t = q.metric_point[c] - pos[static_cast<std::size_t>(v) * n + c];
                        len += t * t;
                    }
                    len = std::sqrt(len);
                    q.attach.emplace_back(v, len * 0.5 * (1.0 / q.d + 1.0 / dist[static_cast<std::size_t>(v)]));
                }
        return q;
    }

    void fill_lattice(const Box& box);
    void finish();

    QHPath search(const Vec& x_in, const Vec& y_in, bool want_path) const {
        Vec x = x_in, y = y_in;
        const bool swapped = std::lexicographical_compare(y.begin(), y.end(), x.begin(), x.end());
        if (swapped) std::swap(x, y);
        QHPath out;
        if (x == y) {
            if (want_path) out.points = {x};
            return out;
        }
        const Query qs = make_query(x);
        const Query qt = make_query(y);

        double best = std::numeric_limits<double>::infinity();
        std::int32_t best_node = -1;  // -1 with finite best: direct edge
        double cheb = 0.0;
        for (std::size_t k = 0; k < n; ++k) cheb = std::max(cheb, std::abs(x[k] - y[k]));
        if (cheb <= 2.0 * h) {
            const double len = (qs.metric_point - qt.metric_point).norm();
            best = len * 0.5 * (1.0 / qs.d + 1.0 / qt.d);
        }

        const std::size_t N = dist.size();
        std::vector<double> label(N, std::numeric_limits<double>::infinity());
        std::vector<std::int32_t> prev;
        if (want_path) prev.assign(N, -1);
        std::unordered_map<std::int32_t, double> to_target(qt.attach.begin(), qt.attach.end());

        using Item = std::pair<double, std::int32_t>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
        for (const auto& [v, w] : qs.attach) {
            if (w < label[static_cast<std::size_t>(v)]) {
                label[static_cast<std::size_t>(v)] = w;
                heap.emplace(w, v);
            }
        }
        while (!heap.empty()) {
            const auto [du, u32] = heap.top();
            heap.pop();
            const std::size_t u = static_cast<std::size_t>(u32);
            if (du > label[u]) continue;
            if (du >= best) break;
            if (auto it = to_target.find(u32); it != to_target.end() && du + it->second < best) {
                best = du + it->second;
                best_node = u32;
            }
            const auto& cu = cell[u];
            for (std::size_t o = 0; o < offsets.size(); ++o) {
                const std::int32_t v32 =
                    node_at({cu[0] + offsets[o][0], cu[1] + offsets[o][1], cu[2] + offsets[o][2]});
                if (v32 < 0) continue;
                const std::size_t v = static_cast<std::size_t>(v32);
                const double len = pullback ? length(u, v) : offset_len[o];
                const double nd = du + len * 0.5 * (1.0 / dist[u] + 1.0 / dist[v]);
                if (nd < label[v]) {
                    label[v] = nd;
                    if (want_path) prev[v] = u32;
                    heap.emplace(nd, v32);
                }
            }
        }
        if (!std::isfinite(best))
            throw ConnectivityError("query points are not connected in the quasihyperbolic graph", y);
        out.length = best;
        if (want_path) {
            out.points.push_back(qt.metric_point);
            for (std::int32_t v = best_node; v >= 0; v = prev[static_cast<std::size_t>(v)])
                out.points.push_back(position(static_cast<std::size_t>(v)));
            out.points.push_back(qs.metric_point);
            if (!swapped) std::reverse(out.points.begin(), out.points.end());
        }
        return out;
    }
};

void QHGraph::Impl::fill_lattice(const Box& box) {
    Impl& g = *this;
    for (std::size_t k = 0; k < g.n; ++k) {
        const int a = static_cast<int>(std::ceil(box.lo[k] / g.h));
        const int b = static_cast<int>(std::floor(box.hi[k] / g.h));
        g.lo[k] = a;
        g.size[k] = std::max(0, b - a + 1);
    }
    const std::size_t cells = static_cast<std::size_t>(g.size[0]) * g.size[1] * g.size[2];
    if (cells > 60'000'000) throw ResolutionError("grid step too small: lattice exceeds 6e7 cells");

    // Boundary distance per cell; NaN marks excluded cells.
    std::vector<double> dcell(cells);
    parallel_for(cells, [&](std::size_t idx) {
        std::array<int, 3> c{0, 0, 0};
        std::size_t r = idx;
        c[2] = static_cast<int>(r % g.size[2]) + g.lo[2];
        r /= g.size[2];
        c[1] = static_cast<int>(r % g.size[1]) + g.lo[1];
        c[0] = static_cast<int>(r / g.size[1]) + g.lo[0];
        Vec x(g.n);
        for (std::size_t k = 0; k < g.n; ++k) x[k] = c[k] * g.h;
        double d = std::numeric_limits<double>::quiet_NaN();
        if (g.domain.contains(x)) {
            const double t = g.domain.boundary_distance(x);
            if (t >= g.h) d = t;
        }
        dcell[idx] = d;
    });

    g.node_of_cell.assign(cells, -1);
    for (std::size_t idx = 0; idx < cells; ++idx) {
        if (std::isnan(dcell[idx])) continue;
        if (g.cell.size() >= static_cast<std::size_t>(std::numeric_limits<std::int32_t>::max()))
            throw ResolutionError("too many graph nodes");
        std::array<int, 3> c{0, 0, 0};
        std::size_t r = idx;
        c[2] = static_cast<int>(r % g.size[2]) + g.lo[2];
        r /= g.size[2];
        c[1] = static_cast<int>(r % g.size[1]) + g.lo[1];
        c[0] = static_cast<int>(r / g.size[1]) + g.lo[0];
        g.node_of_cell[idx] = static_cast<std::int32_t>(g.cell.size());
        g.cell.push_back(c);
        for (std::size_t k = 0; k < g.n; ++k) g.pos.push_back(c[k] * g.h);
        g.dist.push_back(dcell[idx]);
    }
    if (g.cell.empty()) throw ResolutionError("grid step leaves no interior nodes");
}

void QHGraph::Impl::finish() {
    Impl& g = *this;
    const std::size_t N = g.cell.size();
    std::size_t directed = 0;
    for (std::size_t u = 0; u < N; ++u)
        for (const auto& o : g.offsets)
            if (g.node_at({g.cell[u][0] + o[0], g.cell[u][1] + o[1], g.cell[u][2] + o[2]}) >= 0) ++directed;
    g.stats.nodes = N;
    g.stats.edges = directed / 2;
    g.stats.h = g.h;
    g.stats.directions = g.offsets.size();

    // Convex domains give connected lattices; anything else is a bug.
    std::vector<char> seen(N, 0);
    std::vector<std::size_t> stack{0};
    seen[0] = 1;
    std::size_t count = 1;
    while (!stack.empty()) {
        const std::size_t u = stack.back();
        stack.pop_back();
        for (const auto& o : g.offsets) {
            const std::int32_t v = g.node_at({g.cell[u][0] + o[0], g.cell[u][1] + o[1], g.cell[u][2] + o[2]});
            if (v >= 0 && !seen[static_cast<std::size_t>(v)]) {
                seen[static_cast<std::size_t>(v)] = 1;
                ++count;
                stack.push_back(static_cast<std::size_t>(v));
            }
        }
    }
    if (count != N)
        throw ConnectivityError("quasihyperbolic graph of a convex domain is disconnected (" + std::to_string(count) +
                                " of " + std::to_string(N) + " nodes reachable)");
}

namespace {

Box intersect(const Box& a, const Box& b) {
    Box r{a.lo, a.hi};
    for (std::size_t k = 0; k < a.lo.dim(); ++k) {
        r.lo[k] = std::max(a.lo[k], b.lo[k]);
        r.hi[k] = std::min(a.hi[k], b.hi[k]);
    }
    return r;
}

}  // namespace

QHGraph QHGraph::build(const Domain& domain, double h, Neighborhood nb, std::optional<Box> window) {
    if (!(h > 0.0)) throw PreconditionError("grid step must be positive");
    auto g = std::make_shared<Impl>();
    g->n = domain.dim();
    g->h = h;
    g->domain = domain;
    g->offsets = neighbor_offsets(g->n, nb);
    for (const auto& o : g->offsets)
        g->offset_len.push_back(h * std::sqrt(static_cast<double>(o[0] * o[0] + o[1] * o[1] + o[2] * o[2])));
    std::optional<Box> box = domain.bounding_box();
    if (window) {
        if (window->lo.dim() != g->n || window->hi.dim() != g->n) throw_dimension_mismatch(g->n, window->lo.dim());
        box = box ? intersect(*box, *window) : *window;
    }
    if (!box) throw PreconditionError("unbounded domain needs a window box: " + domain.describe());
    g->fill_lattice(*box);
    g->finish();
    return QHGraph(std::move(g));
}

QHGraph QHGraph::pulled_back(const HarmonicMap& f, double h, Neighborhood nb) {
    if (!(h > 0.0)) throw PreconditionError("grid step must be positive");
    auto g = std::make_shared<Impl>();
    g->n = f.dim();
    g->h = h;
    g->domain = Domain::unit_ball(g->n);
    g->pullback = true;
    g->map = f;
    g->image_boundary = std::make_shared<ImageBoundary>(f);
    g->offsets = neighbor_offsets(g->n, nb);
    g->fill_lattice(*g->domain.bounding_box());
    const std::size_t N = g->cell.size();
    parallel_for(N, [&](std::size_t u) {
        Vec x(g->n);
        for (std::size_t k = 0; k < g->n; ++k) x[k] = g->pos[u * g->n + k];
        const Vec y = f.evaluate(x);
        for (std::size_t k = 0; k < g->n; ++k) g->pos[u * g->n + k] = y[k];
        g->dist[u] = g->image_boundary->distance(y);
        if (!(g->dist[u] > 0.0)) throw DegeneracyError("image point on the image boundary", x);
    });
    g->finish();
    return QHGraph(std::move(g));
}

const Domain& QHGraph::domain() const { return impl_->domain; }
bool QHGraph::is_pullback() const { return impl_->pullback; }
const QHGraphStats& QHGraph::stats() const { return impl_->stats; }
double QHGraph::h() const { return impl_->h; }

double QHGraph::query_distance_to_boundary(const Vec& x) const {
    if (impl_->pullback) return impl_->image_boundary->distance(impl_->map->evaluate(x));
    return impl_->domain.boundary_distance(x);
}

double QHGraph::distance(const Vec& x, const Vec& y) const { return impl_->search(x, y, false).length; }

QHPath QHGraph::path(const Vec& x, const Vec& y) const { return impl_->search(x, y, true); }

// ---------------------------------------------------------------------------

std::vector<std::pair<Vec, Vec>> qh_pairs(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                          const SamplingPlan& plan, std::size_t* rejected) {
    const std::size_t n = f.dim();
    std::vector<std::pair<Vec, Vec>> out;
    std::size_t skipped = 0;
    const double hs = source.h(), ht = target.h();
    auto ok_source = [&](const Vec& p) {
        return source.domain().contains(p) && source.domain().boundary_distance(p) >= hs;
    };
    auto ok_target = [&](const Vec& p, const Vec& fp) {
        if (target.is_pullback()) return target.domain().boundary_distance(p) >= ht;
        return target.domain().contains(fp) && target.domain().boundary_distance(fp) >= ht;
    };
    for (std::size_t k = 0; out.size() < plan.count; ++k) {
        if (k > 1000 * plan.count + 1000)
            throw PreconditionError("could not draw enough well-separated interior pairs");
        const Vec x = plan_point(plan, n, 2 * k);
        const Vec y = plan_point(plan, n, 2 * k + 1);
        const Vec fx = f.evaluate(x), fy = f.evaluate(y);
        const bool ok = distance(x, y) >= 10.0 * hs && ok_source(x) && ok_source(y) && ok_target(x, fx) &&
                        ok_target(y, fy) && (target.is_pullback() || distance(fx, fy) >= 10.0 * ht);
        if (ok)
            out.emplace_back(x, y);
        else
            ++skipped;
    }
    if (rejected) *rejected = skipped;
    return out;
}

BilipschitzStats qh_bilipschitz_scan(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                     const SamplingPlan& plan) {
    if (source.domain().dim() != f.dim()) throw_dimension_mismatch(f.dim(), source.domain().dim());
    BilipschitzStats s;
    const auto pairs = qh_pairs(f, source, target, plan, &s.rejected);
    s.pairs.resize(pairs.size());
    parallel_for(pairs.size(), [&](std::size_t i) {
        const auto& [x, y] = pairs[i];
        PairRatio& r = s.pairs[i];
        r.x = x;
        r.y = y;
        r.k_source = source.distance(x, y);
        r.k_target = target.is_pullback() ? target.distance(x, y) : target.distance(f.evaluate(x), f.evaluate(y));
        r.ratio = r.k_target / r.k_source;
    }, 1);
    s.min_ratio = std::numeric_limits<double>::infinity();
    s.max_ratio = 0.0;
    for (const auto& r : s.pairs) {
        s.min_ratio = std::min(s.min_ratio, r.ratio);
        s.max_ratio = std::max(s.max_ratio, r.ratio);
    }
    s.m_hat = std::max(s.max_ratio, 1.0 / s.min_ratio);
    return s;
}

GehringOsgoodResult gehring_osgood_check(const HarmonicMap& f, const QHGraph& source, const QHGraph& target,
                                         const SamplingPlan& pairs, double k) {
    if (!(k >= 1.0)) throw PreconditionError("distortion K must be >= 1");
    const BilipschitzStats s = qh_bilipschitz_scan(f, source, target, pairs);
    GehringOsgoodResult r;
    r.exponent = std::pow(k, 1.0 / (1.0 - static_cast<double>(f.dim())));
    r.pairs = s.pairs.size();
    for (const auto& p : s.pairs)
        r.c_hat = std::max(r.c_hat, p.k_target / std::max(p.k_source, std::pow(p.k_source, r.exponent)));
    return r;
}

}  // namespace hqc
