#pragma once

#include <Eigen/Dense>
#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "susycalc/euler/disk_map.hpp"
#include "susycalc/pfaffian/pfaffian.hpp"
#include "susycalc/rational.hpp"
#include "susycalc/superalg/grassmann.hpp"

namespace susy::checks {

using pfaffian::OddVector;
using pfaffian::SkewMatrix;
using superalg::GrassmannElement;
using superalg::MultiIndex;
using GQ = GrassmannElement<Rational>;

/// Outcome of one property suite.  `failing_case` carries the first
/// offending instance, serialized for replay.
struct SuiteResult {
    std::string name;
    long instances = 0;
    double max_deviation = 0.0;
    bool pass = true;
    std::string failing_case;
};

namespace detail {

inline Rational random_rational(std::mt19937_64& rng) {
    std::uniform_int_distribution<int> num(-9, 9);
    std::uniform_int_distribution<int> den(1, 4);
    return Rational(num(rng), den(rng));
}

inline GQ random_element(std::mt19937_64& rng, int n, int max_terms, int parity_bit = -1) {
    std::uniform_int_distribution<std::uint32_t> mask(0, superalg::full_mask(n));
    std::vector<GQ::term_type> terms;
    for (int k = 0; k < max_terms; ++k) {
        const std::uint32_t m = mask(rng);
        if (parity_bit >= 0 && (std::popcount(m) & 1) != parity_bit) continue;
        terms.emplace_back(m, random_rational(rng));
    }
    return GQ::from_terms(n, std::move(terms));
}

inline SkewMatrix<Rational> random_rational_skew(std::mt19937_64& rng, int n) {
    std::vector<Rational> upper(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (auto& v : upper) v = random_rational(rng);
    return SkewMatrix<Rational>::from_upper(n, upper);
}

inline SkewMatrix<double> random_double_skew(std::mt19937_64& rng, int n) {
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> upper(static_cast<std::size_t>(n) * (n - 1) / 2);
    for (auto& v : upper) v = dist(rng);
    return SkewMatrix<double>::from_upper(n, upper);
}

template <class T>
std::string describe_skew(const SkewMatrix<T>& w) {
    std::ostringstream os;
    os << "n=" << w.dimension() << " upper=[";
    bool first = true;
    for (int i = 0; i < w.dimension(); ++i)
        for (int j = i + 1; j < w.dimension(); ++j) {
            if (!first) os << ", ";
            os << w.at(i, j);
            first = false;
        }
    os << "]";
    return os.str();
}

inline Eigen::MatrixXd to_eigen(const SkewMatrix<double>& w) {
    Eigen::MatrixXd m(w.dimension(), w.dimension());
    for (int i = 0; i < w.dimension(); ++i)
        for (int j = 0; j < w.dimension(); ++j) m(i, j) = w.at(i, j);
    return m;
}

inline double rel_deviation(double a, double b) {
    return std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
}

}  // namespace detail

/// The subset-pfaffian expansion of the fermionic Gaussian: every
/// even-cardinality coefficient of exp of the quadratic form equals the
/// pfaffian of the corresponding principal submatrix, exactly over the
/// rationals, and all odd coefficients vanish.
inline SuiteResult subset_pfaffian_expansion_suite(std::uint64_t seed, int max_n, int per_n = 50) {
    SuiteResult res;
    res.name = "subset-pfaffian-expansion";
    std::mt19937_64 rng(seed ^ 0x9e3779b97f4a7c15ull);
    for (int n = 2; n <= std::min(max_n, 6); n += 2) {
        for (int rep = 0; rep < per_n; ++rep) {
            const auto w = detail::random_rational_skew(rng, n);
            auto q = GQ::zero(n);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j)
                    q = q + GQ::monomial(MultiIndex::of(n, {i, j}), w.at(i, j));
            const auto expq = superalg::exp_even(q);
            const auto expansion = pfaffian::gaussian_expand(w);

            bool ok = true;
            for (const auto& [I, pf] : expansion)
                if (!(expq.coefficient(I) == pf)) ok = false;
            for (std::uint32_t bits = 0; ok && bits <= superalg::full_mask(n); ++bits)
                if (std::popcount(bits) % 2 == 1 &&
                    !(expq.coefficient(MultiIndex(n, bits)) == Rational(0)))
                    ok = false;

            ++res.instances;
            if (!ok && res.pass) {
                res.pass = false;
                res.failing_case = detail::describe_skew(w);
            }
        }
    }
    return res;
}

/// Sourced Gaussian integral: the closed-form sum over even index sets
/// agrees with the direct route (exponentiate, then integrate out the
/// auxiliary generators), exactly, with symbolic odd sources.
inline SuiteResult sourced_gaussian_suite(std::uint64_t seed, int max_n, int per_n = 25) {
    SuiteResult res;
    res.name = "sourced-gaussian-integral";
    std::mt19937_64 rng(seed ^ 0xbf58476d1ce4e5b9ull);
    for (int n = 2; n <= std::min(max_n, 6); n += 2) {
        const int N = 2 * n;
        const MultiIndex eta(N, superalg::full_mask(n));
        for (int rep = 0; rep < per_n; ++rep) {
            std::vector<GQ> upper;
            for (int k = 0; k < n * (n - 1) / 2; ++k) {
                auto e = GQ::constant(N, detail::random_rational(rng));
                if (rng() % 3 == 0) {
                    const int p = n + static_cast<int>(rng() % n);
                    int q = n + static_cast<int>(rng() % n);
                    if (q == p) q = n + ((p - n + 1) % n);
                    e = e + GQ::monomial(MultiIndex::of(N, {std::min(p, q), std::max(p, q)}),
                                         detail::random_rational(rng));
                }
                upper.push_back(e);
            }
            const auto w = SkewMatrix<GQ>::from_upper(n, upper);

            std::vector<GQ> comps;
            for (int i = 0; i < n; ++i) {
                auto ji = GQ::zero(N);
                for (int k = 0; k < n; ++k)
                    if (rng() % 2 == 0)
                        ji = ji + GQ::monomial(MultiIndex::single(N, n + k), detail::random_rational(rng));
                if (n >= 3 && rng() % 4 == 0)
                    ji = ji + GQ::monomial(MultiIndex::of(N, {n, n + 1, n + 2}),
                                           detail::random_rational(rng));
                comps.push_back(ji);
            }
            const OddVector<Rational> j(comps);

            const bool ok = pfaffian::berezin_gaussian_source(w, j) ==
                            pfaffian::berezin_gaussian_source_direct(w, j, eta);
            ++res.instances;
            if (!ok && res.pass) {
                res.pass = false;
                res.failing_case = detail::describe_skew(w);
            }
        }
    }
    return res;
}

/// Determinant identities and method agreement for scalar pfaffians.
inline SuiteResult pfaffian_identity_suite(std::uint64_t seed, int max_n, int instances = 100,
                                           double tol_det = 1e-10, double tol_congruence = 1e-9,
                                           double tol_methods = 1e-12) {
    SuiteResult res;
    res.name = "pfaffian-identities";
    std::mt19937_64 rng(seed ^ 0x94d049bb133111ebull);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    const int cap = std::max(2, std::min(max_n, 8));

    auto record = [&res](bool ok, double dev, const std::string& what) {
        ++res.instances;
        res.max_deviation = std::max(res.max_deviation, dev);
        if (!ok && res.pass) {
            res.pass = false;
            res.failing_case = what;
        }
    };

    for (int i = 0; i < instances; ++i) {
        const int n = 2 * (1 + static_cast<int>(rng() % static_cast<unsigned>(cap / 2)));
        const auto w = detail::random_double_skew(rng, n);
        const double pf = pfaffian::pfaffian_berezin(w);

        const double dev_det = detail::rel_deviation(pf * pf, detail::to_eigen(w).determinant());
        record(dev_det <= tol_det, dev_det, "square-vs-determinant " + detail::describe_skew(w));

        Eigen::MatrixXd b(n, n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) b(r, c) = dist(rng);
        const Eigen::MatrixXd conj = b * detail::to_eigen(w) * b.transpose();
        const Eigen::MatrixXd skew = 0.5 * (conj - conj.transpose());
        std::vector<double> e(static_cast<std::size_t>(n) * n);
        for (int r = 0; r < n; ++r)
            for (int c = 0; c < n; ++c) e[static_cast<std::size_t>(r) * n + c] = skew(r, c);
        const SkewMatrix<double> wc(n, e);
        const double dev_con =
            detail::rel_deviation(pfaffian::pfaffian_berezin(wc), b.determinant() * pf);
        record(dev_con <= tol_congruence, dev_con, "congruence " + detail::describe_skew(w));
    }

    for (int n = 2; n <= std::min(max_n, 10); n += 2) {
        for (int rep = 0; rep < 10; ++rep) {
            const auto w = detail::random_double_skew(rng, n);
            const double dev = detail::rel_deviation(pfaffian::pfaffian_berezin(w),
                                                     pfaffian::pfaffian_expansion(w));
            record(dev <= tol_methods, dev, "method-agreement " + detail::describe_skew(w));
        }
    }

    for (int rep = 0; rep < 20; ++rep) {
        const int n1 = 2 * (1 + static_cast<int>(rng() % 2));
        const int n2 = 2 * (1 + static_cast<int>(rng() % 2));
        const auto w1 = detail::random_double_skew(rng, n1);
        const auto w2 = detail::random_double_skew(rng, n2);
        const int n = n1 + n2;
        std::vector<double> e(static_cast<std::size_t>(n) * n, 0.0);
        for (int i = 0; i < n1; ++i)
            for (int j = 0; j < n1; ++j) e[static_cast<std::size_t>(i) * n + j] = w1.at(i, j);
        for (int i = 0; i < n2; ++i)
            for (int j = 0; j < n2; ++j)
                e[static_cast<std::size_t>(n1 + i) * n + (n1 + j)] = w2.at(i, j);
        const SkewMatrix<double> w(n, e);
        const double dev = detail::rel_deviation(
            pfaffian::pfaffian_berezin(w),
            pfaffian::pfaffian_berezin(w1) * pfaffian::pfaffian_berezin(w2));
        record(dev <= tol_methods, dev, "block-diagonal " + detail::describe_skew(w));
    }
    return res;
}

/// Vanishing super bracket on homogeneous pairs and the exhaustive
/// complement-sign identity against the top monomial.
inline SuiteResult super_commutativity_suite(std::uint64_t seed, int max_n, int pairs = 500) {
    SuiteResult res;
    res.name = "super-commutativity-signs";
    std::mt19937_64 rng(seed ^ 0xd6e8feb86659fd93ull);
    const int cap = std::max(2, std::min(max_n, 8));

    for (int i = 0; i < pairs; ++i) {
        const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(cap - 1));
        const auto a = detail::random_element(rng, n, 5, static_cast<int>(rng() % 2));
        const auto b = detail::random_element(rng, n, 5, static_cast<int>(rng() % 2));
        ++res.instances;
        if (!superalg::super_bracket(a, b).is_zero() && res.pass) {
            res.pass = false;
            res.failing_case = "bracket a=" + superalg::to_string(a) + " b=" + superalg::to_string(b);
        }
    }

    for (int n = 1; n <= std::min(max_n, 10); ++n) {
        const auto top = GQ::monomial(MultiIndex::full(n), Rational(1));
        for (std::uint32_t bits = 0; bits <= superalg::full_mask(n); ++bits) {
            const MultiIndex I(n, bits);
            const auto prod =
                GQ::monomial(I, Rational(1)) * GQ::monomial(I.complement(), Rational(1));
            ++res.instances;
            if (!(prod == Rational(superalg::epsilon_sign(I)) * top) && res.pass) {
                res.pass = false;
                res.failing_case = "epsilon n=" + std::to_string(n) + " I=" + superalg::to_string(I);
            }
        }
    }

    // associativity and distributivity ride along on random triples
    for (int i = 0; i < 100; ++i) {
        const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(cap - 1));
        const auto a = detail::random_element(rng, n, 5);
        const auto b = detail::random_element(rng, n, 5);
        const auto c = detail::random_element(rng, n, 5);
        ++res.instances;
        if ((!((a * b) * c == a * (b * c)) || !(a * (b + c) == a * b + a * c)) && res.pass) {
            res.pass = false;
            res.failing_case = "ring-axioms a=" + superalg::to_string(a);
        }
    }
    return res;
}

/// Exponential and subset-integration identities of the algebra.
inline SuiteResult berezin_exponential_suite(std::uint64_t seed, int max_n, int instances = 60) {
    SuiteResult res;
    res.name = "nilpotent-exponential-berezin";
    std::mt19937_64 rng(seed ^ 0xa5a5a5a55a5a5a5aull);
    const int cap = std::max(2, std::min(max_n, 8));

    auto fail = [&res](const std::string& what) {
        if (res.pass) {
            res.pass = false;
            res.failing_case = what;
        }
    };

    for (int i = 0; i < instances; ++i) {
        const int n = 2 + static_cast<int>(rng() % static_cast<unsigned>(cap - 1));
        auto x = detail::random_element(rng, n, 4, 0);
        auto y = detail::random_element(rng, n, 4, 0);
        x = x - GQ::constant(n, x.scalar_part());
        y = y - GQ::constant(n, y.scalar_part());
        ++res.instances;
        const auto ex = superalg::exp_even(x);
        if (!(ex * superalg::exp_even(-x) == GQ::unit(n)))
            fail("exp-inverse x=" + superalg::to_string(x));
        if (!(superalg::exp_even(x + y) == ex * superalg::exp_even(y)))
            fail("exp-homomorphism x=" + superalg::to_string(x));
    }

    std::uniform_int_distribution<std::uint32_t> anymask;
    for (int i = 0; i < instances; ++i) {
        const int n = 3 + static_cast<int>(rng() % static_cast<unsigned>(std::max(1, cap - 2)));
        const std::uint32_t m1 = anymask(rng) & superalg::full_mask(n);
        const std::uint32_t m2 = anymask(rng) & superalg::full_mask(n) & ~m1;
        const MultiIndex s1(n, m1), s2(n, m2);
        const auto x = detail::random_element(rng, n, 8);
        ++res.instances;
        const auto iterated = superalg::berezin(superalg::berezin(x, s1), s2);
        const auto direct = superalg::berezin(x, s1 | s2);
        if (!(iterated == Rational(superalg::merge_sign(m2, m1)) * direct))
            fail("iterated-berezin x=" + superalg::to_string(x));

        // full-set integral: linear, kills everything below top degree
        const auto top = MultiIndex::full(n);
        const auto y = detail::random_element(rng, n, 8);
        if (!(superalg::berezin_full(x + y) == superalg::berezin_full(x) + superalg::berezin_full(y)))
            fail("berezin-linearity");
        const auto low = x - GQ::monomial(top, x.coefficient(top));
        if (!superalg::berezin(low, top).is_zero()) fail("berezin-low-degree");
    }
    return res;
}

/// Roundtrip and range of the ball compression map.
inline SuiteResult disk_map_suite(std::uint64_t seed, int samples = 10000) {
    SuiteResult res;
    res.name = "disk-compression";
    std::mt19937_64 rng(seed ^ 0x2545f4914f6cdd1dull);
    std::uniform_real_distribution<double> comp(-2.0, 2.0);

    for (int i = 0; i < samples; ++i) {
        const int dim = 1 + static_cast<int>(rng() % 6);
        Eigen::VectorXd x(dim);
        for (int k = 0; k < dim; ++k) x(k) = comp(rng);
        const Eigen::VectorXd y = euler::disk_compress(x);
        const Eigen::VectorXd back = euler::disk_decompress(y);
        const double scale = std::max(1.0, x.norm());
        const double dev = (back - x).lpNorm<Eigen::Infinity>() / scale;
        res.max_deviation = std::max(res.max_deviation, dev);
        ++res.instances;

        bool ok = dev <= 1e-14 && y.norm() < 1.0;
        if (x.norm() > 0.0) ok = ok && euler::disk_compress(1.5 * x).norm() > y.norm();
        if (!ok && res.pass) {
            res.pass = false;
            std::ostringstream os;
            os << "x=" << x.transpose();
            res.failing_case = os.str();
        }
    }
    return res;
}

inline std::vector<SuiteResult> run_all(std::uint64_t seed, int max_n) {
    return {
        subset_pfaffian_expansion_suite(seed, max_n),
        sourced_gaussian_suite(seed, max_n),
        pfaffian_identity_suite(seed, max_n),
        super_commutativity_suite(seed, max_n),
        berezin_exponential_suite(seed, max_n),
        disk_map_suite(seed),
    };
}

}  // namespace susy::checks
