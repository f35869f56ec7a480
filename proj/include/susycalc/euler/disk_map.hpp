#pragma once

#include <cmath>

#include "susycalc/errors.hpp"
#include "susycalc/geometry/chart_manifold.hpp"

namespace susy::euler {

/// Fibrewise diffeomorphism of R^n onto the open unit ball:
/// x -> x / sqrt(1 + |x|^2).
inline geometry::Vec disk_compress(const geometry::Vec& x) {
    return x / std::sqrt(1.0 + x.squaredNorm());
}

/// Exact inverse y -> y / sqrt(1 - |y|^2), defined for |y| < 1.
inline geometry::Vec disk_decompress(const geometry::Vec& y) {
    const double q = y.squaredNorm();
    if (q >= 1.0) throw DomainError("disk_decompress requires a point inside the unit ball");
    return y / std::sqrt(1.0 - q);
}

}  // namespace susy::euler
