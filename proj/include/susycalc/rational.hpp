#pragma once

#include <boost/multiprecision/cpp_int.hpp>

#include "susycalc/scalar.hpp"

namespace susy {

/// Arbitrary-precision rational coefficient field for exact identity checks.
/// Expression templates are disabled so that sums and products deduce as
/// plain values inside the generic algebra code.
using Rational = boost::multiprecision::number<
    boost::multiprecision::backends::rational_adaptor<boost::multiprecision::backends::cpp_int_backend<>>,
    boost::multiprecision::et_off>;

template <>
struct scalar_traits<Rational> {
    static constexpr bool is_exact = true;
    static double magnitude(const Rational& x) {
        return std::fabs(static_cast<double>(x));
    }
};

}  // namespace susy
