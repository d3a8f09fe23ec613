#include "hqc/mapspec.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "hqc/errors.hpp"

namespace hqc {

using nlohmann::json;

std::string to_string(Representation r) {
    switch (r) {
    case Representation::Polynomial: return "polynomial";
    case Representation::GradientPotential: return "gradient-potential";
    case Representation::FourierBoundary: return "fourier-boundary";
    case Representation::SphereSamples: return "sphere-samples";
    }
    return "?";
}

namespace {

const json& field(const json& obj, const char* key, const std::string& where) {
    if (!obj.is_object()) throw ParseError(where.empty() ? "/" : where, "expected an object");
    auto it = obj.find(key);
    if (it == obj.end()) throw ParseError(where + "/" + key, "missing field");
    return *it;
}

double number(const json& j, const std::string& where) {
    if (!j.is_number()) throw ParseError(where, "expected a number");
    const double v = j.get<double>();
    if (!std::isfinite(v)) throw ParseError(where, "number is not finite");
    return v;
}

long integer(const json& j, const std::string& where) {
    if (!j.is_number_integer()) throw ParseError(where, "expected an integer");
    return j.get<long>();
}

const json& array(const json& j, const std::string& where) {
    if (!j.is_array()) throw ParseError(where, "expected an array");
    return j;
}

std::vector<double> numbers(const json& j, const std::string& where) {
    std::vector<double> out;
    const json& a = array(j, where);
    for (std::size_t i = 0; i < a.size(); ++i) out.push_back(number(a[i], where + "/" + std::to_string(i)));
    return out;
}

Vec vec_of(const json& j, std::size_t dim, const std::string& where) {
    const auto v = numbers(j, where);
    if (v.size() != dim)
        throw ParseError(where, "expected " + std::to_string(dim) + " coordinates, got " + std::to_string(v.size()));
    return Vec(std::span<const double>(v));
}

json vec_json(const Vec& v) {
    json a = json::array();
    for (double x : v) a.push_back(x);
    return a;
}

const char* kind_name(Domain::Kind k) {
    switch (k) {
    case Domain::Kind::UnitBall: return "unit-ball";
    case Domain::Kind::Ball: return "ball";
    case Domain::Kind::HalfSpace: return "half-space";
    case Domain::Kind::ConvexPolytope: return "polytope";
    case Domain::Kind::Ellipsoid: return "ellipsoid";
    }
    return "?";
}

}  // namespace

// ---------------------------------------------------------------------------
// Domains

Domain DomainRecord::build() const {
    switch (kind) {
    case Domain::Kind::UnitBall: return Domain::unit_ball(dim);
    case Domain::Kind::Ball: return Domain::ball(center, radius);
    case Domain::Kind::HalfSpace: return Domain::half_space(faces.at(0).normal, faces.at(0).offset);
    case Domain::Kind::ConvexPolytope: return Domain::polytope(faces);
    case Domain::Kind::Ellipsoid: return Domain::ellipsoid(semi_axes);
    }
    throw PreconditionError("unknown domain kind");
}

bool operator==(const DomainRecord& a, const DomainRecord& b) {
    return domain_to_json(a) == domain_to_json(b);
}

json domain_to_json(const DomainRecord& d) {
    json j;
    j["kind"] = kind_name(d.kind);
    j["dimension"] = d.dim;
    switch (d.kind) {
    case Domain::Kind::UnitBall: break;
    case Domain::Kind::Ball:
        j["center"] = vec_json(d.center);
        j["radius"] = d.radius;
        break;
    case Domain::Kind::HalfSpace:
        j["normal"] = vec_json(d.faces.at(0).normal);
        j["offset"] = d.faces.at(0).offset;
        break;
    case Domain::Kind::ConvexPolytope: {
        json faces = json::array();
        for (const auto& f : d.faces) faces.push_back({{"normal", vec_json(f.normal)}, {"offset", f.offset}});
        j["faces"] = faces;
        break;
    }
    case Domain::Kind::Ellipsoid: j["semi_axes"] = vec_json(d.semi_axes); break;
    }
    if (d.window) j["window"] = {{"lo", vec_json(d.window->lo)}, {"hi", vec_json(d.window->hi)}};
    return j;
}

DomainRecord parse_domain(const json& j, std::size_t dim, const std::string& where) {
    DomainRecord d;
    const json& kind = field(j, "kind", where);
    if (!kind.is_string()) throw ParseError(where + "/kind", "expected a string");
    const std::string k = kind.get<std::string>();
    if (j.contains("dimension")) {
        const long n = integer(j["dimension"], where + "/dimension");
        if (dim != 0 && static_cast<std::size_t>(n) != dim)
            throw ParseError(where + "/dimension", "domain dimension differs from the map dimension");
        dim = static_cast<std::size_t>(n);
    }
    if (dim < 1 || dim > kMaxDim) throw ParseError(where, "domain needs a dimension between 1 and 8");
    d.dim = dim;
    if (k == "unit-ball") {
        d.kind = Domain::Kind::UnitBall;
    } else if (k == "ball") {
        d.kind = Domain::Kind::Ball;
        d.center = vec_of(field(j, "center", where), dim, where + "/center");
        d.radius = number(field(j, "radius", where), where + "/radius");
    } else if (k == "half-space") {
        d.kind = Domain::Kind::HalfSpace;
        d.faces.push_back({vec_of(field(j, "normal", where), dim, where + "/normal"),
                           number(field(j, "offset", where), where + "/offset")});
    } else if (k == "polytope") {
        d.kind = Domain::Kind::ConvexPolytope;
        const json& faces = array(field(j, "faces", where), where + "/faces");
        for (std::size_t i = 0; i < faces.size(); ++i) {
            const std::string w = where + "/faces/" + std::to_string(i);
            d.faces.push_back({vec_of(field(faces[i], "normal", w), dim, w + "/normal"),
                               number(field(faces[i], "offset", w), w + "/offset")});
        }
    } else if (k == "ellipsoid") {
        d.kind = Domain::Kind::Ellipsoid;
        d.semi_axes = vec_of(field(j, "semi_axes", where), dim, where + "/semi_axes");
    } else {
        throw ParseError(where + "/kind", "unknown domain kind '" + k + "'");
    }
    if (j.contains("window")) {
        const std::string w = where + "/window";
        d.window = Box{vec_of(field(j["window"], "lo", w), dim, w + "/lo"),
                       vec_of(field(j["window"], "hi", w), dim, w + "/hi")};
    }
    try {
        (void)d.build();
    } catch (const Error& e) {
        throw ParseError(where, e.what());
    }
    return d;
}

// ---------------------------------------------------------------------------
// Polynomials

json polynomial_to_json(const Polynomial& p) {
    json terms = json::array();
    for (const auto& [k, c] : p.terms()) {
        json e = json::array();
        for (std::size_t i = 0; i < p.dim(); ++i) e.push_back(k[i]);
        terms.push_back({{"exponents", e}, {"coefficient", c}});
    }
    return terms;
}

Polynomial parse_polynomial(const json& j, std::size_t dim, const std::string& where) {
    const json& terms = array(j, where);
    std::vector<std::pair<MultiIndex, double>> out;
    for (std::size_t i = 0; i < terms.size(); ++i) {
        const std::string w = where + "/" + std::to_string(i);
        const json& e = array(field(terms[i], "exponents", w), w + "/exponents");
        if (e.size() != dim) throw ParseError(w + "/exponents", "expected " + std::to_string(dim) + " exponents");
        MultiIndex k{0, 0, 0};
        for (std::size_t a = 0; a < dim; ++a) {
            const long v = integer(e[a], w + "/exponents/" + std::to_string(a));
            if (v < 0 || v > 15) throw ParseError(w + "/exponents/" + std::to_string(a), "exponent must lie in 0..15");
            k[a] = static_cast<int>(v);
        }
        out.emplace_back(k, number(field(terms[i], "coefficient", w), w + "/coefficient"));
    }
    return Polynomial(dim, out);
}

// ---------------------------------------------------------------------------
// Map specifications

bool operator==(const MapSpec& a, const MapSpec& b) {
    if (a.name != b.name || a.dim != b.dim || a.representation != b.representation ||
        a.components != b.components || a.potential != b.potential || a.n_theta != b.n_theta ||
        a.evaluation != b.evaluation || a.declared_k != b.declared_k || a.target != b.target ||
        a.exact_image != b.exact_image || a.boundary.size() != b.boundary.size())
        return false;
    for (std::size_t i = 0; i < a.boundary.size(); ++i) {
        const auto &x = a.boundary[i], &y = b.boundary[i];
        if (x.cos != y.cos || x.sin != y.sin || x.samples != y.samples || x.terms.size() != y.terms.size())
            return false;
        for (std::size_t t = 0; t < x.terms.size(); ++t)
            if (x.terms[t].l != y.terms[t].l || x.terms[t].m != y.terms[t].m ||
                x.terms[t].coefficient != y.terms[t].coefficient)
                return false;
    }
    return true;
}

MapSpec parse_mapspec(const json& doc) {
    MapSpec s;
    if (!doc.is_object()) throw ParseError("/", "map specification must be an object");
    if (doc.contains("format_version")) {
        const long v = integer(doc["format_version"], "/format_version");
        if (v != kFormatVersion) throw ParseError("/format_version", "unsupported format version " + std::to_string(v));
    }
    if (doc.contains("name")) {
        if (!doc["name"].is_string()) throw ParseError("/name", "expected a string");
        s.name = doc["name"].get<std::string>();
    }
    const long dim = integer(field(doc, "dimension", ""), "/dimension");
    if (dim != 2 && dim != 3) throw ParseError("/dimension", "dimension must be 2 or 3");
    s.dim = static_cast<std::size_t>(dim);

    const json& rep = field(doc, "representation", "");
    if (!rep.is_string()) throw ParseError("/representation", "expected a string");
    const std::string r = rep.get<std::string>();
    if (r == "polynomial") {
        s.representation = Representation::Polynomial;
        const json& comps = array(field(doc, "components", ""), "/components");
        if (comps.size() != s.dim) throw ParseError("/components", "expected one component per dimension");
        for (std::size_t i = 0; i < comps.size(); ++i)
            s.components.push_back(parse_polynomial(comps[i], s.dim, "/components/" + std::to_string(i)));
    } else if (r == "gradient-potential") {
        s.representation = Representation::GradientPotential;
        s.potential = parse_polynomial(field(doc, "potential", ""), s.dim, "/potential");
    } else if (r == "fourier-boundary" || r == "sphere-samples") {
        s.representation = r == "fourier-boundary" ? Representation::FourierBoundary : Representation::SphereSamples;
        const json& comps = array(field(doc, "boundary", ""), "/boundary");
        if (comps.size() != s.dim) throw ParseError("/boundary", "expected one boundary component per dimension");
        for (std::size_t i = 0; i < comps.size(); ++i) {
            const std::string w = "/boundary/" + std::to_string(i);
            BoundaryComponent b;
            if (s.representation == Representation::FourierBoundary) {
                if (s.dim == 2) {
                    if (comps[i].contains("cos")) b.cos = numbers(comps[i]["cos"], w + "/cos");
                    if (comps[i].contains("sin")) b.sin = numbers(comps[i]["sin"], w + "/sin");
                } else {
                    const json& terms = array(field(comps[i], "terms", w), w + "/terms");
                    for (std::size_t t = 0; t < terms.size(); ++t) {
                        const std::string wt = w + "/terms/" + std::to_string(t);
                        SphericalHarmonicTerm term;
                        term.l = static_cast<int>(integer(field(terms[t], "l", wt), wt + "/l"));
                        term.m = static_cast<int>(integer(field(terms[t], "m", wt), wt + "/m"));
                        term.coefficient = number(field(terms[t], "coefficient", wt), wt + "/coefficient");
                        if (term.l < 0 || std::abs(term.m) > term.l || term.l > 15)
                            throw ParseError(wt, "need 0 <= |m| <= l <= 15");
                        b.terms.push_back(term);
                    }
                }
            } else {
                b.samples = numbers(field(comps[i], "samples", w), w + "/samples");
            }
            s.boundary.push_back(std::move(b));
        }
        if (s.representation == Representation::SphereSamples) {
            s.evaluation = s.dim == 2 ? PoissonField::Mode::ExactLift : PoissonField::Mode::KernelQuadrature;
            if (doc.contains("evaluation")) {
                const json& e = doc["evaluation"];
                if (!e.is_string()) throw ParseError("/evaluation", "expected a string");
                if (e == "exact-lift")
                    s.evaluation = PoissonField::Mode::ExactLift;
                else if (e == "kernel-quadrature")
                    s.evaluation = PoissonField::Mode::KernelQuadrature;
                else
                    throw ParseError("/evaluation", "expected exact-lift or kernel-quadrature");
            }
            if (s.dim == 3) {
                if (s.evaluation != PoissonField::Mode::KernelQuadrature)
                    throw ParseError("/evaluation", "n = 3 sample tables support kernel-quadrature only");
                const long nt = integer(field(doc, "n_theta", ""), "/n_theta");
                if (nt < 2) throw ParseError("/n_theta", "n_theta must be >= 2");
                s.n_theta = static_cast<std::size_t>(nt);
            }
        }
    } else {
        throw ParseError("/representation", "unknown representation '" + r + "'");
    }

    if (doc.contains("declared_K") && !doc["declared_K"].is_null()) {
        s.declared_k = number(doc["declared_K"], "/declared_K");
        if (*s.declared_k < 1.0) throw ParseError("/declared_K", "declared K must be >= 1");
    }
    if (doc.contains("target") && !doc["target"].is_null()) s.target = parse_domain(doc["target"], s.dim, "/target");
    if (doc.contains("exact_image")) {
        if (!doc["exact_image"].is_boolean()) throw ParseError("/exact_image", "expected a boolean");
        s.exact_image = doc["exact_image"].get<bool>();
    }
    // Validate by construction so that bad coefficients surface at load time.
    try {
        (void)build_map(s);
    } catch (const ParseError&) {
        throw;
    } catch (const Error& e) {
        throw ParseError("/", e.what());
    }
    return s;
}

MapSpec parse_mapspec_text(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ParseError("byte " + std::to_string(e.byte), e.what());
    }
    return parse_mapspec(doc);
}

MapSpec load_mapspec(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ParseError(path, "cannot open file");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_mapspec_text(ss.str());
}

json to_json(const MapSpec& s) {
    json j;
    j["format_version"] = kFormatVersion;
    j["name"] = s.name;
    j["dimension"] = s.dim;
    j["representation"] = to_string(s.representation);
    switch (s.representation) {
    case Representation::Polynomial: {
        json comps = json::array();
        for (const auto& p : s.components) comps.push_back(polynomial_to_json(p));
        j["components"] = comps;
        break;
    }
    case Representation::GradientPotential: j["potential"] = polynomial_to_json(*s.potential); break;
    case Representation::FourierBoundary:
    case Representation::SphereSamples: {
        json comps = json::array();
        for (const auto& b : s.boundary) {
            json c = json::object();
            if (s.representation == Representation::SphereSamples) {
                c["samples"] = b.samples;
            } else if (s.dim == 2) {
                c["cos"] = b.cos;
                c["sin"] = b.sin;
            } else {
                json terms = json::array();
                for (const auto& t : b.terms) terms.push_back({{"l", t.l}, {"m", t.m}, {"coefficient", t.coefficient}});
                c["terms"] = terms;
            }
            comps.push_back(c);
        }
        j["boundary"] = comps;
        if (s.representation == Representation::SphereSamples) {
            j["evaluation"] = s.evaluation == PoissonField::Mode::ExactLift ? "exact-lift" : "kernel-quadrature";
            if (s.dim == 3) j["n_theta"] = s.n_theta;
        }
        break;
    }
    }
    if (s.declared_k) j["declared_K"] = *s.declared_k;
    if (s.target) j["target"] = domain_to_json(*s.target);
    j["exact_image"] = s.exact_image;
    return j;
}

std::string serialize(const MapSpec& s) { return write_json(to_json(s)) + "\n"; }

LoadedMap build_map(const MapSpec& s) {
    std::vector<Component> comps;
    switch (s.representation) {
    case Representation::Polynomial:
        for (const auto& p : s.components) comps.emplace_back(HarmonicPolynomial(p));
        return {HarmonicMap(std::move(comps), s.declared_k), std::nullopt};
    case Representation::GradientPotential: {
        GradientMap g(HarmonicPolynomial(*s.potential), s.declared_k);
        return {g.map(), g};
    }
    case Representation::FourierBoundary:
        for (const auto& b : s.boundary)
            comps.emplace_back(s.dim == 2 ? harmonic_from_fourier(b.cos, b.sin) : harmonic_from_spherical(b.terms));
        return {HarmonicMap(std::move(comps), s.declared_k), std::nullopt};
    case Representation::SphereSamples:
        for (const auto& b : s.boundary) {
            if (s.dim == 2)
                comps.emplace_back(s.evaluation == PoissonField::Mode::ExactLift
                                       ? PoissonField::spectral_samples(b.samples)
                                       : PoissonField::circle_samples(b.samples));
            else
                comps.emplace_back(PoissonField::sphere_samples(s.n_theta, b.samples));
        }
        return {HarmonicMap(std::move(comps), s.declared_k), std::nullopt};
    }
    throw PreconditionError("unknown representation");
}

// ---------------------------------------------------------------------------
// Deterministic JSON text

namespace {

void write_value(std::string& out, const json& j, int indent, int depth) {
    auto newline = [&](int d) {
        if (indent > 0) {
            out += '\n';
            out.append(static_cast<std::size_t>(indent * d), ' ');
        }
    };
    switch (j.type()) {
    case json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += '{';
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ',';
            first = false;
            newline(depth + 1);
            out += json(it.key()).dump();
            out += indent > 0 ? ": " : ":";
            write_value(out, it.value(), indent, depth + 1);
        }
        newline(depth);
        out += '}';
        return;
    }
    case json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        // Arrays of scalars stay on one line.
        bool scalars = true;
        for (const auto& v : j) scalars = scalars && !v.is_structured();
        out += '[';
        bool first = true;
        for (const auto& v : j) {
            if (!first) out += scalars && indent > 0 ? ", " : ",";
            first = false;
            if (!scalars) newline(depth + 1);
            write_value(out, v, indent, depth + 1);
        }
        if (!scalars) newline(depth);
        out += ']';
        return;
    }
    case json::value_t::number_float: {
        const double v = j.get<double>();
        if (!std::isfinite(v)) {
            out += "null";
            return;
        }
        char buf[32];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        out += buf;
        // Keep floats recognisable as floats on re-read.
        if (std::string_view(buf).find_first_of(".eEn") == std::string_view::npos) out += ".0";
        return;
    }
    default: out += j.dump(); return;
    }
}

}  // namespace

std::string write_json(const json& j, int indent) {
    std::string out;
    write_value(out, j, indent, 0);
    return out;
}

std::string fnv1a64(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

}  // namespace hqc
