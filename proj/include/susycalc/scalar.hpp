#pragma once

#include <cmath>

namespace susy {

/// Absolute tolerance used for floating-point coefficient comparisons.
inline constexpr double kDefaultTolerance = 1e-12;

/// Traits describing a coefficient field.  Exact fields (rationals) compare
/// with operator==; inexact ones compare within an absolute tolerance.
template <class Scalar>
struct scalar_traits;

template <>
struct scalar_traits<double> {
    static constexpr bool is_exact = false;
    static double magnitude(double x) { return std::fabs(x); }
};

template <class Scalar>
bool scalar_close(const Scalar& a, const Scalar& b, double tol = kDefaultTolerance) {
    if constexpr (scalar_traits<Scalar>::is_exact) {
        (void)tol;
        return a == b;
    } else {
        return scalar_traits<Scalar>::magnitude(a - b) <= tol;
    }
}

}  // namespace susy
