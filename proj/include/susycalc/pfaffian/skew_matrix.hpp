#pragma once

#include <string>
#include <type_traits>
#include <utility>
#include <vector>

#include "susycalc/errors.hpp"
#include "susycalc/scalar.hpp"
#include "susycalc/superalg/grassmann.hpp"

namespace susy::pfaffian {

using superalg::GrassmannElement;
using superalg::MultiIndex;
using superalg::Parity;

template <class T>
struct is_grassmann : std::false_type {};
template <class S>
struct is_grassmann<GrassmannElement<S>> : std::true_type {};
template <class T>
inline constexpr bool is_grassmann_v = is_grassmann<T>::value;

namespace detail {

template <class T>
bool entry_is_even(const T& x) {
    if constexpr (is_grassmann_v<T>)
        return x.is_homogeneous(Parity::even);
    else
        return true;
}

template <class T>
bool entry_zero_within(const T& x, double tol) {
    if constexpr (is_grassmann_v<T>)
        return superalg::approx_zero(x, tol);
    else
        return scalar_close(x, T(0), tol);
}

template <class T>
T zero_like(const T& sample) {
    if constexpr (is_grassmann_v<T>)
        return T::zero(sample.generators());
    else
        return T(0);
}

template <class T>
T one_like(const T& sample) {
    if constexpr (is_grassmann_v<T>)
        return T::unit(sample.generators());
    else
        return T(1);
}

}  // namespace detail

/// An even-dimensional skew-symmetric matrix of even elements.  Entries are
/// either plain scalars or even Grassmann elements of a common coefficient
/// algebra.  Skewness, a zero diagonal and evenness are validated on
/// construction (within `tol` for inexact scalars).
template <class T>
class SkewMatrix {
public:
    SkewMatrix(int n, std::vector<T> entries, double tol = kDefaultTolerance)
        : n_(n), entries_(std::move(entries)) {
        if (n_ <= 0 || n_ % 2 != 0)
            throw DomainError("skew matrix dimension must be a positive even number, got " +
                              std::to_string(n_));
        if (entries_.size() != static_cast<std::size_t>(n_) * static_cast<std::size_t>(n_))
            throw DimensionError("skew matrix entry count does not match dimension");
        for (int i = 0; i < n_; ++i) {
            if (!detail::entry_zero_within(at(i, i), tol))
                throw DomainError("skew matrix has a nonzero diagonal entry at (" +
                                  std::to_string(i) + "," + std::to_string(i) + ")");
            for (int j = 0; j < n_; ++j) {
                if (!detail::entry_is_even(at(i, j)))
                    throw ParityError("skew matrix entry (" + std::to_string(i) + "," +
                                      std::to_string(j) + ") is not even");
                if (j > i && !detail::entry_zero_within(at(i, j) + at(j, i), tol))
                    throw DomainError("matrix is not skew-symmetric at (" + std::to_string(i) +
                                      "," + std::to_string(j) + ")");
            }
        }
    }

    /// Builds the matrix from its strict upper triangle, mirroring the
    /// lower triangle; skewness then holds by construction.
    static SkewMatrix from_upper(int n, const std::vector<T>& upper) {
        if (n <= 0 || n % 2 != 0)
            throw DomainError("skew matrix dimension must be a positive even number");
        if (upper.size() != static_cast<std::size_t>(n) * (n - 1) / 2)
            throw DimensionError("upper triangle entry count does not match dimension");
        std::vector<T> e;
        T zero = detail::zero_like(upper.front());
        e.assign(static_cast<std::size_t>(n) * n, zero);
        std::size_t k = 0;
        for (int i = 0; i < n; ++i) {
            for (int j = i + 1; j < n; ++j, ++k) {
                e[static_cast<std::size_t>(i) * n + j] = upper[k];
                e[static_cast<std::size_t>(j) * n + i] = -upper[k];
            }
        }
        return SkewMatrix(n, std::move(e));
    }

    int dimension() const { return n_; }

    const T& at(int i, int j) const {
        return entries_[static_cast<std::size_t>(i) * n_ + j];
    }

    /// Principal submatrix on the (even-cardinality) index set I.
    SkewMatrix principal_submatrix(const MultiIndex& I) const {
        const auto idx = I.indices();
        const int k = static_cast<int>(idx.size());
        std::vector<T> sub;
        sub.reserve(static_cast<std::size_t>(k) * k);
        for (int a = 0; a < k; ++a)
            for (int b = 0; b < k; ++b) sub.push_back(at(idx[a], idx[b]));
        return SkewMatrix(k, std::move(sub));
    }

private:
    int n_;
    std::vector<T> entries_;
};

/// Embeds a scalar skew matrix into the Grassmann algebra on `generators`
/// generators (entries become constant elements).
template <class S>
SkewMatrix<GrassmannElement<S>> lift(const SkewMatrix<S>& w, int generators) {
    std::vector<GrassmannElement<S>> e;
    e.reserve(static_cast<std::size_t>(w.dimension()) * w.dimension());
    for (int i = 0; i < w.dimension(); ++i)
        for (int j = 0; j < w.dimension(); ++j)
            e.push_back(GrassmannElement<S>::constant(generators, w.at(i, j)));
    return SkewMatrix<GrassmannElement<S>>(w.dimension(), std::move(e));
}

/// A vector of odd elements of a common coefficient algebra.
template <class S>
class OddVector {
public:
    explicit OddVector(std::vector<GrassmannElement<S>> components)
        : components_(std::move(components)) {
        if (components_.empty()) throw DimensionError("odd vector must have at least one component");
        const int n = components_.front().generators();
        for (std::size_t i = 0; i < components_.size(); ++i) {
            if (components_[i].generators() != n)
                throw DimensionError("odd vector components live in different algebras");
            if (!components_[i].is_homogeneous(Parity::odd))
                throw ParityError("odd vector component " + std::to_string(i) + " is not odd");
        }
    }

    static OddVector zeros(int count, int generators) {
        return OddVector(std::vector<GrassmannElement<S>>(
            static_cast<std::size_t>(count), GrassmannElement<S>::zero(generators)));
    }

    int size() const { return static_cast<int>(components_.size()); }
    int generators() const { return components_.front().generators(); }
    const GrassmannElement<S>& at(int i) const { return components_[static_cast<std::size_t>(i)]; }

    MultiIndex support() const {
        MultiIndex s = MultiIndex::none(generators());
        for (const auto& c : components_) s = s | c.support();
        return s;
    }

private:
    std::vector<GrassmannElement<S>> components_;
};

}  // namespace susy::pfaffian
