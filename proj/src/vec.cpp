#include "hqc/vec.hpp"

#include <cstdio>

#include "hqc/errors.hpp"

namespace hqc {

void throw_dimension_mismatch(std::size_t a, std::size_t b) {
    throw DimensionError("dimension mismatch: " + std::to_string(a) + " vs " + std::to_string(b));
}

void throw_dimension_unsupported(std::size_t n, std::size_t max) {
    throw DimensionError("dimension " + std::to_string(n) + " exceeds supported maximum " +
                         std::to_string(max));
}

std::string to_string(const Vec& v) {
    std::string s = "(";
    char buf[32];
    for (std::size_t i = 0; i < v.dim(); ++i) {
        std::snprintf(buf, sizeof buf, "%.17g", v[i]);
        if (i) s += ", ";
        s += buf;
    }
    return s + ")";
}

}  // namespace hqc
