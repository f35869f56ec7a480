#pragma once

#include <algorithm>
#include <cstdint>
#include <map>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "susycalc/errors.hpp"
#include "susycalc/scalar.hpp"
#include "susycalc/superalg/multi_index.hpp"

namespace susy::superalg {

/// Z_2 grading of an algebra element.
enum class Parity { even, odd, mixed };

/// Above this generator count, products accumulate into an ordered map
/// instead of a dense 2^n scratch array.
inline constexpr int kDenseAccumulationLimit = 16;

/// An element of the Grassmann algebra on n anticommuting generators:
/// a finite linear combination of ascending generator monomials.
///
/// Canonical form is maintained everywhere: terms are sorted by monomial
/// mask and coefficients that are exactly zero are never stored.  Elements
/// are immutable values; all operations return fresh elements.
template <class Scalar>
class GrassmannElement {
public:
    using term_type = std::pair<std::uint32_t, Scalar>;

    /// The zero element of the algebra on n generators.
    explicit GrassmannElement(int n) : n_(checked_generator_count(n)) {}

    static GrassmannElement zero(int n) { return GrassmannElement(n); }

    static GrassmannElement constant(int n, Scalar c) {
        GrassmannElement e(n);
        if (!(c == Scalar(0))) e.terms_.emplace_back(0u, std::move(c));
        return e;
    }

    static GrassmannElement unit(int n) { return constant(n, Scalar(1)); }

    static GrassmannElement generator(int n, int i) {
        return monomial(MultiIndex::single(n, i), Scalar(1));
    }

    static GrassmannElement monomial(const MultiIndex& I, Scalar c) {
        GrassmannElement e(I.generators());
        if (!(c == Scalar(0))) e.terms_.emplace_back(I.bits(), std::move(c));
        return e;
    }

    /// Builds an element from arbitrary (mask, coefficient) pairs; repeated
    /// masks are combined and zero coefficients dropped.
    static GrassmannElement from_terms(int n, std::vector<term_type> raw) {
        GrassmannElement e(n);
        const std::uint32_t allowed = full_mask(e.n_);
        std::sort(raw.begin(), raw.end(),
                  [](const term_type& a, const term_type& b) { return a.first < b.first; });
        for (auto& [mask, coeff] : raw) {
            if (mask & ~allowed) throw DimensionError("monomial uses generators outside the algebra");
            if (!e.terms_.empty() && e.terms_.back().first == mask)
                e.terms_.back().second = e.terms_.back().second + coeff;
            else
                e.terms_.emplace_back(mask, std::move(coeff));
        }
        std::erase_if(e.terms_, [](const term_type& t) { return t.second == Scalar(0); });
        return e;
    }

    int generators() const { return n_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t term_count() const { return terms_.size(); }
    const std::vector<term_type>& terms() const { return terms_; }

    Scalar coefficient(const MultiIndex& I) const {
        if (I.generators() != n_) throw DimensionError("index set from a different algebra");
        auto it = std::lower_bound(terms_.begin(), terms_.end(), I.bits(),
                                   [](const term_type& t, std::uint32_t m) { return t.first < m; });
        return (it != terms_.end() && it->first == I.bits()) ? it->second : Scalar(0);
    }

    /// Coefficient of the empty monomial.
    Scalar scalar_part() const {
        return (!terms_.empty() && terms_.front().first == 0u) ? terms_.front().second : Scalar(0);
    }

    /// Union of all generators appearing in some term.
    MultiIndex support() const {
        std::uint32_t bits = 0;
        for (const auto& [mask, coeff] : terms_) bits |= mask;
        return MultiIndex(n_, bits);
    }

    Parity parity() const {
        bool even = true, odd = true;
        for (const auto& [mask, coeff] : terms_) {
            if (std::popcount(mask) & 1)
                even = false;
            else
                odd = false;
        }
        if (even) return Parity::even;  // zero counts as even
        if (odd) return Parity::odd;
        return Parity::mixed;
    }

    bool is_homogeneous(Parity p) const {
        if (is_zero()) return true;
        return parity() == p;
    }

    GrassmannElement graded_part(int parity_bit) const {
        GrassmannElement out(n_);
        for (const auto& t : terms_)
            if ((std::popcount(t.first) & 1) == parity_bit) out.terms_.push_back(t);
        return out;
    }
    GrassmannElement even_part() const { return graded_part(0); }
    GrassmannElement odd_part() const { return graded_part(1); }

    friend GrassmannElement operator+(const GrassmannElement& a, const GrassmannElement& b) {
        a.require_same_algebra(b);
        GrassmannElement out(a.n_);
        out.terms_.reserve(a.terms_.size() + b.terms_.size());
        auto ia = a.terms_.begin(), ib = b.terms_.begin();
        while (ia != a.terms_.end() && ib != b.terms_.end()) {
            if (ia->first < ib->first) {
                out.terms_.push_back(*ia++);
            } else if (ib->first < ia->first) {
                out.terms_.push_back(*ib++);
            } else {
                Scalar c = ia->second + ib->second;
                if (!(c == Scalar(0))) out.terms_.emplace_back(ia->first, std::move(c));
                ++ia, ++ib;
            }
        }
        out.terms_.insert(out.terms_.end(), ia, a.terms_.end());
        out.terms_.insert(out.terms_.end(), ib, b.terms_.end());
        return out;
    }

    friend GrassmannElement operator-(const GrassmannElement& a) {
        GrassmannElement out = a;
        for (auto& t : out.terms_) t.second = -t.second;
        return out;
    }

    friend GrassmannElement operator-(const GrassmannElement& a, const GrassmannElement& b) {
        return a + (-b);
    }

    friend GrassmannElement operator*(const Scalar& c, const GrassmannElement& a) {
        GrassmannElement out(a.n_);
        if (c == Scalar(0)) return out;
        out.terms_ = a.terms_;
        for (auto& t : out.terms_) t.second = c * t.second;
        return out;
    }
    friend GrassmannElement operator*(const GrassmannElement& a, const Scalar& c) { return c * a; }

    friend GrassmannElement operator/(const GrassmannElement& a, const Scalar& c) {
        GrassmannElement out = a;
        for (auto& t : out.terms_) t.second = t.second / c;
        return out;
    }

    /// Graded product.  Monomials multiply to zero when they share a
    /// generator, otherwise to the merged monomial with the reordering sign.
    /// Accumulation is dense (2^n scratch) when the term-pair count is of
    /// that order, otherwise an ordered map; identical results either way.
    friend GrassmannElement operator*(const GrassmannElement& a, const GrassmannElement& b) {
        a.require_same_algebra(b);
        GrassmannElement out(a.n_);
        if (a.terms_.empty() || b.terms_.empty()) return out;

        const bool dense = a.n_ <= kDenseAccumulationLimit &&
                           a.terms_.size() * b.terms_.size() * 4 >= (std::size_t{1} << a.n_);
        if (dense) {
            std::vector<Scalar> acc(std::size_t{1} << a.n_, Scalar(0));
            for (const auto& [ma, ca] : a.terms_) {
                for (const auto& [mb, cb] : b.terms_) {
                    if (ma & mb) continue;
                    if (merge_sign(ma, mb) > 0)
                        acc[ma | mb] = acc[ma | mb] + ca * cb;
                    else
                        acc[ma | mb] = acc[ma | mb] - ca * cb;
                }
            }
            for (std::uint32_t mask = 0; mask < acc.size(); ++mask)
                if (!(acc[mask] == Scalar(0))) out.terms_.emplace_back(mask, std::move(acc[mask]));
        } else {
            std::map<std::uint32_t, Scalar> acc;
            for (const auto& [ma, ca] : a.terms_) {
                for (const auto& [mb, cb] : b.terms_) {
                    if (ma & mb) continue;
                    auto it = acc.try_emplace(ma | mb, Scalar(0)).first;
                    if (merge_sign(ma, mb) > 0)
                        it->second = it->second + ca * cb;
                    else
                        it->second = it->second - ca * cb;
                }
            }
            for (auto& [mask, coeff] : acc)
                if (!(coeff == Scalar(0))) out.terms_.emplace_back(mask, std::move(coeff));
        }
        return out;
    }

    friend bool operator==(const GrassmannElement& a, const GrassmannElement& b) {
        return a.n_ == b.n_ && a.terms_ == b.terms_;
    }

private:
    void require_same_algebra(const GrassmannElement& other) const {
        if (n_ != other.n_)
            throw DimensionError("elements live in algebras with " + std::to_string(n_) +
                                 " and " + std::to_string(other.n_) + " generators");
    }

    int n_;
    std::vector<term_type> terms_;
};

template <class Scalar>
GrassmannElement<Scalar> multiply(const GrassmannElement<Scalar>& a, const GrassmannElement<Scalar>& b) {
    return a * b;
}

template <class Scalar>
GrassmannElement<Scalar> add(const GrassmannElement<Scalar>& a, const GrassmannElement<Scalar>& b) {
    return a + b;
}

template <class Scalar>
GrassmannElement<Scalar> scale(const Scalar& c, const GrassmannElement<Scalar>& a) {
    return c * a;
}

/// Termwise comparison within an absolute coefficient tolerance (exact
/// comparison for exact scalar types).
template <class Scalar>
bool approx_equal(const GrassmannElement<Scalar>& a, const GrassmannElement<Scalar>& b,
                  double tol = kDefaultTolerance) {
    if (a.generators() != b.generators()) return false;
    auto ia = a.terms().begin(), ib = b.terms().begin();
    const Scalar nil(0);
    while (ia != a.terms().end() || ib != b.terms().end()) {
        if (ib == b.terms().end() || (ia != a.terms().end() && ia->first < ib->first)) {
            if (!scalar_close(ia->second, nil, tol)) return false;
            ++ia;
        } else if (ia == a.terms().end() || ib->first < ia->first) {
            if (!scalar_close(ib->second, nil, tol)) return false;
            ++ib;
        } else {
            if (!scalar_close(ia->second, ib->second, tol)) return false;
            ++ia, ++ib;
        }
    }
    return true;
}

template <class Scalar>
bool approx_zero(const GrassmannElement<Scalar>& a, double tol = kDefaultTolerance) {
    return approx_equal(a, GrassmannElement<Scalar>::zero(a.generators()), tol);
}

/// [a, b] = ab - (-1)^{deg a deg b} ba, computed on homogeneous parts and
/// summed.  Vanishes identically here; kept as the assertable definition.
template <class Scalar>
GrassmannElement<Scalar> super_bracket(const GrassmannElement<Scalar>& a,
                                       const GrassmannElement<Scalar>& b) {
    GrassmannElement<Scalar> out(a.generators());
    for (int p = 0; p <= 1; ++p) {
        const auto ap = a.graded_part(p);
        if (ap.is_zero()) continue;
        for (int q = 0; q <= 1; ++q) {
            const auto bq = b.graded_part(q);
            if (bq.is_zero()) continue;
            if (p == 1 && q == 1)
                out = out + (ap * bq + bq * ap);
            else
                out = out + (ap * bq - bq * ap);
        }
    }
    return out;
}

/// Exponential of a nilpotent even element: the finite sum of a^k / k!.
/// The scalar part must be split off by the caller.
template <class Scalar>
GrassmannElement<Scalar> exp_even(const GrassmannElement<Scalar>& a) {
    const int n = a.generators();
    if (!(a.scalar_part() == Scalar(0)))
        throw DomainError("exp_even: nonzero constant term (multiply by exp of the scalar separately)");
    if (!a.is_homogeneous(Parity::even))
        throw ParityError("exp_even: argument must be even");

    auto result = GrassmannElement<Scalar>::unit(n);
    auto power = GrassmannElement<Scalar>::unit(n);
    for (int k = 1; k <= n / 2; ++k) {
        power = power * a / Scalar(k);
        if (power.is_zero()) break;
        result = result + power;
    }
    return result;
}

/// Integration over the generator subset S.  A monomial g^J contributes
/// only when S is contained in J; the surviving monomial g^{J \ S} carries
/// the sign of rewriting g^J as g^{J \ S} . g^S.  S = the full set recovers
/// plain top-coefficient extraction.
template <class Scalar>
GrassmannElement<Scalar> berezin(const GrassmannElement<Scalar>& a, const MultiIndex& S) {
    if (S.generators() != a.generators())
        throw DimensionError("integration subset from a different algebra");
    std::vector<typename GrassmannElement<Scalar>::term_type> out;
    const std::uint32_t sm = S.bits();
    for (const auto& [mask, coeff] : a.terms()) {
        if ((mask & sm) != sm) continue;
        const std::uint32_t rest = mask & ~sm;
        out.emplace_back(rest, merge_sign(rest, sm) > 0 ? coeff : -coeff);
    }
    return GrassmannElement<Scalar>::from_terms(a.generators(), std::move(out));
}

/// Full-set integral: the coefficient of the top monomial.
template <class Scalar>
Scalar berezin_full(const GrassmannElement<Scalar>& a) {
    return a.coefficient(MultiIndex::full(a.generators()));
}

template <class Scalar>
std::string to_string(const GrassmannElement<Scalar>& a) {
    if (a.is_zero()) return "0";
    std::ostringstream os;
    bool first = true;
    for (const auto& [mask, coeff] : a.terms()) {
        if (!first) os << " + ";
        os << "(" << coeff << ")";
        for (std::uint32_t rest = mask; rest != 0; rest &= rest - 1)
            os << " g" << std::countr_zero(rest);
        first = false;
    }
    return os.str();
}

template <class Scalar>
std::ostream& operator<<(std::ostream& os, const GrassmannElement<Scalar>& a) {
    return os << to_string(a);
}

}  // namespace susy::superalg
