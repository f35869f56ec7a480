#pragma once

#include <map>
#include <numeric>
#include <vector>

#include "susycalc/pfaffian/skew_matrix.hpp"
#include "susycalc/superalg/grassmann.hpp"

namespace susy::pfaffian {

using superalg::berezin;
using superalg::berezin_full;
using superalg::epsilon_sign;
using superalg::exp_even;

/// Cap for the combinatorial expansion (it enumerates perfect matchings).
inline constexpr int kExpansionLimit = 12;

namespace detail {

// Pf = sum_j (-1)^j w_{0j} Pf(minor without rows/cols 0, j), on a live
// index list.  Entries are even, so they commute and the classical
// recursion is valid for Grassmann-valued matrices too.
template <class T>
T pfaffian_rec(const SkewMatrix<T>& w, const std::vector<int>& idx) {
    if (idx.empty()) return one_like(w.at(0, 0));
    T acc = zero_like(w.at(0, 0));
    const int i0 = idx.front();
    std::vector<int> rest(idx.begin() + 1, idx.end());
    for (std::size_t p = 0; p < rest.size(); ++p) {
        std::vector<int> next;
        next.reserve(rest.size() - 1);
        for (std::size_t q = 0; q < rest.size(); ++q)
            if (q != p) next.push_back(rest[q]);
        T term = w.at(i0, rest[p]) * pfaffian_rec(w, next);
        if (p % 2 == 0)
            acc = acc + term;
        else
            acc = acc - term;
    }
    return acc;
}

// sum_{i<j} w_ij g_{eta_i} g_{eta_j}: the doubled upper triangle of the
// quadratic form, with eta_k the k-th set bit of `eta`.
template <class S>
GrassmannElement<S> quadratic_form(const SkewMatrix<GrassmannElement<S>>& w,
                                   const MultiIndex& eta) {
    const auto gens = eta.indices();
    if (static_cast<int>(gens.size()) != w.dimension())
        throw DimensionError("need exactly one auxiliary generator per matrix row");
    const int N = eta.generators();
    auto q = GrassmannElement<S>::zero(N);
    for (int i = 0; i < w.dimension(); ++i) {
        for (int j = i + 1; j < w.dimension(); ++j) {
            if (w.at(i, j).is_zero()) continue;
            auto pair = GrassmannElement<S>::monomial(MultiIndex::of(N, {gens[i], gens[j]}), S(1));
            q = q + w.at(i, j) * pair;
        }
    }
    return q;
}

template <class S>
void require_disjoint_support(const SkewMatrix<GrassmannElement<S>>& w, const MultiIndex& eta,
                              const char* what) {
    for (int i = 0; i < w.dimension(); ++i)
        for (int j = 0; j < w.dimension(); ++j)
            if (!w.at(i, j).support().disjoint(eta))
                throw DomainError(std::string(what) + ": matrix entries must not involve the auxiliary generators");
}

}  // namespace detail

/// Pfaffian by the fermionic-integral definition: the top coefficient of
/// exp of the quadratic form, over a fresh algebra with one generator per row.
template <class S>
    requires(!is_grassmann_v<S>)
S pfaffian_berezin(const SkewMatrix<S>& w) {
    const int n = w.dimension();
    const auto lifted = lift(w, n);
    const auto q = detail::quadratic_form(lifted, MultiIndex::full(n));
    return berezin_full(exp_even(q));
}

/// Same, for a matrix of even elements.  `eta` designates the auxiliary
/// generators (one per row) inside the entries' algebra; the entries must
/// not involve them.  The result lives in the same algebra with the
/// auxiliary generators integrated out.
template <class S>
GrassmannElement<S> pfaffian_berezin(const SkewMatrix<GrassmannElement<S>>& w,
                                     const MultiIndex& eta) {
    detail::require_disjoint_support(w, eta, "pfaffian_berezin");
    const auto q = detail::quadratic_form(w, eta);
    return berezin(exp_even(q), eta);
}

/// Independent combinatorial oracle: recursive first-row expansion.
/// Exponential time; guarded to small dimensions.
template <class T>
T pfaffian_expansion(const SkewMatrix<T>& w) {
    if (w.dimension() > kExpansionLimit)
        throw DomainError("pfaffian_expansion supports n <= " + std::to_string(kExpansionLimit));
    std::vector<int> idx(static_cast<std::size_t>(w.dimension()));
    std::iota(idx.begin(), idx.end(), 0);
    return detail::pfaffian_rec(w, idx);
}

/// All principal-submatrix Pfaffians {I -> Pf(w_I)} over even-cardinality
/// index sets, Pf(w_empty) = 1.  Computed with the combinatorial oracle, so
/// it is an independent cross-check for the coefficients of exp of the
/// quadratic form.
template <class T>
std::map<MultiIndex, T> gaussian_expand(const SkewMatrix<T>& w) {
    const int n = w.dimension();
    if (n > kExpansionLimit)
        throw DomainError("gaussian_expand supports n <= " + std::to_string(kExpansionLimit));
    std::map<MultiIndex, T> out;
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        const MultiIndex I(n, mask);
        if (mask == 0) {
            out.emplace(I, detail::one_like(w.at(0, 0)));
            continue;
        }
        out.emplace(I, pfaffian_expansion(w.principal_submatrix(I)));
    }
    return out;
}

/// Closed form of the sourced Gaussian integral:
///   sum over even I of eps(I, I') (-1)^{|I'|/2} Pf(w_I) J^{I'},
/// with J^{I'} the ascending product of the source components over the
/// complement.  Everything lives in the coefficient algebra; no auxiliary
/// generators are consumed.
template <class S>
GrassmannElement<S> berezin_gaussian_source(const SkewMatrix<GrassmannElement<S>>& w,
                                            const OddVector<S>& j) {
    const int n = w.dimension();
    if (j.size() != n) throw DimensionError("source vector length must match matrix dimension");
    if (j.generators() != w.at(0, 0).generators())
        throw DimensionError("sources and matrix entries live in different algebras");
    if (n > kExpansionLimit)
        throw DomainError("berezin_gaussian_source supports n <= " + std::to_string(kExpansionLimit));

    const int N = j.generators();
    auto out = GrassmannElement<S>::zero(N);
    for (std::uint32_t mask = 0; mask < (std::uint32_t{1} << n); ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        const MultiIndex I(n, mask);
        const MultiIndex Ic = I.complement();

        auto pf = mask == 0 ? GrassmannElement<S>::unit(N)
                            : pfaffian_expansion(w.principal_submatrix(I));

        auto sources = GrassmannElement<S>::unit(N);
        for (int i : Ic.indices()) sources = sources * j.at(i);
        if (sources.is_zero()) continue;

        int sign = epsilon_sign(I);
        if ((Ic.size() / 2) % 2 != 0) sign = -sign;
        out = out + S(sign) * (pf * sources);
    }
    return out;
}

/// Direct oracle for the same integral: build the full exponent
/// (quadratic form plus J^t eta) in the enlarged algebra, exponentiate and
/// integrate over the auxiliary generators.
template <class S>
GrassmannElement<S> berezin_gaussian_source_direct(const SkewMatrix<GrassmannElement<S>>& w,
                                                   const OddVector<S>& j, const MultiIndex& eta) {
    const int n = w.dimension();
    if (j.size() != n) throw DimensionError("source vector length must match matrix dimension");
    detail::require_disjoint_support(w, eta, "berezin_gaussian_source_direct");
    if (!j.support().disjoint(eta))
        throw DomainError("berezin_gaussian_source_direct: sources must not involve the auxiliary generators");

    const int N = eta.generators();
    const auto gens = eta.indices();
    auto exponent = detail::quadratic_form(w, eta);
    for (int i = 0; i < n; ++i)
        exponent = exponent + j.at(i) * GrassmannElement<S>::generator(N, gens[static_cast<std::size_t>(i)]);
    return berezin(exp_even(exponent), eta);
}

}  // namespace susy::pfaffian
