#pragma once

#include <string>
#include <vector>

#include "hqc/mapspec.hpp"

namespace hqc {

/// A named map with the facts its property suite relies on.
struct Fixture {
    MapSpec spec;
    std::string description;
    /// Df is constant, so every distortion quantity has a closed form.
    bool constant_derivative = false;
    /// Expected to fail the positivity certificate (J changes sign).
    bool expect_degenerate = false;
};

const std::vector<Fixture>& fixture_registry();

/// Lookup by name; nullptr when unknown.
const Fixture* find_fixture(const std::string& name);

/// Boundary map of the planar Poisson fixture: theta -> theta + 0.3 sin theta.
double poisson_disk_angle(double theta);

}  // namespace hqc
