#pragma once

#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "hqc/geometry.hpp"
#include "hqc/harmonic.hpp"

namespace hqc {

inline constexpr int kFormatVersion = 1;

enum class Representation { Polynomial, GradientPotential, FourierBoundary, SphereSamples };

std::string to_string(Representation r);

/// Boundary data of one component. n = 2 Fourier data uses cos/sin
/// (cos[0] is the constant term); n = 3 uses spherical-harmonic terms.
/// Sample tables are equispaced on the circle (n = 2) or on the
/// Gauss-Legendre x uniform grid, theta-major (n = 3).
struct BoundaryComponent {
    std::vector<double> cos;
    std::vector<double> sin;
    std::vector<SphericalHarmonicTerm> terms;
    std::vector<double> samples;
};

/// Domain as written in a document (raw parameters, so documents round-trip
/// exactly) plus an optional window, required to grid unbounded kinds.
struct DomainRecord {
    Domain::Kind kind = Domain::Kind::UnitBall;
    std::size_t dim = 2;
    Vec center;
    double radius = 1.0;
    std::vector<HalfSpace> faces;  // one face for a half-space
    Vec semi_axes;
    std::optional<Box> window;

    Domain build() const;
    friend bool operator==(const DomainRecord&, const DomainRecord&);
};

/// In-memory form of a map-specification document.
struct MapSpec {
    std::string name;
    std::size_t dim = 2;
    Representation representation = Representation::Polynomial;
    std::vector<Polynomial> components;
    std::optional<Polynomial> potential;
    std::vector<BoundaryComponent> boundary;
    std::size_t n_theta = 0;
    PoissonField::Mode evaluation = PoissonField::Mode::ExactLift;
    std::optional<double> declared_k;
    std::optional<DomainRecord> target;
    /// True when the target is exactly f(B^n), so quasihyperbolic distances
    /// in the image may use the target's own graph.
    bool exact_image = false;

    friend bool operator==(const MapSpec&, const MapSpec&);
};

struct LoadedMap {
    HarmonicMap map;
    std::optional<GradientMap> gradient;
};

/// Parses a document; malformed input raises ParseError with a JSON-pointer location.
MapSpec parse_mapspec(const nlohmann::json& doc);
MapSpec parse_mapspec_text(const std::string& text);
MapSpec load_mapspec(const std::string& path);

nlohmann::json to_json(const MapSpec& spec);
/// Canonical text (sorted keys, 17 significant digits).
std::string serialize(const MapSpec& spec);

/// Builds the map; harmonicity and dimension errors propagate.
LoadedMap build_map(const MapSpec& spec);

nlohmann::json domain_to_json(const DomainRecord& d);
DomainRecord parse_domain(const nlohmann::json& j, std::size_t dim, const std::string& where = "");

nlohmann::json polynomial_to_json(const Polynomial& p);
Polynomial parse_polynomial(const nlohmann::json& j, std::size_t dim, const std::string& where);

/// Compact deterministic JSON: sorted keys, doubles printed with %.17g.
std::string write_json(const nlohmann::json& j, int indent = 2);

/// 64-bit FNV-1a digest, printed as 16 hex digits.
std::string fnv1a64(const std::string& bytes);

}  // namespace hqc
