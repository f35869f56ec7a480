#pragma once

#include <algorithm>
#include <cmath>
#include <exception>
#include <numbers>
#include <string>
#include <thread>
#include <vector>

#include "susycalc/errors.hpp"
#include "susycalc/euler/quadrature.hpp"
#include "susycalc/geometry/builtins.hpp"
#include "susycalc/geometry/chart_manifold.hpp"
#include "susycalc/superalg/grassmann.hpp"

namespace susy::euler {

using geometry::ChartManifold;
using geometry::Mat;
using geometry::SectionField;
using geometry::Vec;

/// Conventions for the overall constant of the curvature representative.
/// The source formulas fix it only up to powers of 2 and a sign, so three
/// readings are provided; `calibrated` pins the per-two-plane factor once
/// on the round two-sphere and reuses it everywhere.
enum class NormalizationMode { eqU, eqU1, calibrated };

inline std::string to_string(NormalizationMode m) {
    switch (m) {
        case NormalizationMode::eqU: return "eqU";
        case NormalizationMode::eqU1: return "eqU1";
        case NormalizationMode::calibrated: return "calibrated";
    }
    return "?";
}

inline NormalizationMode parse_mode(const std::string& s) {
    if (s == "eqU") return NormalizationMode::eqU;
    if (s == "eqU1") return NormalizationMode::eqU1;
    if (s == "calibrated") return NormalizationMode::calibrated;
    throw ConfigError("unknown normalization mode \"" + s + "\" (eqU, eqU1, calibrated)");
}

/// Scale applied to the curvature block of the exponent.  The raw reading
/// (eqU1) keeps the curvature unscaled; the coherent reading halves and
/// flips it, which together with the (-1)^m constant below reproduces the
/// closed-form sum with half-curvature subpfaffians termwise.
inline double curvature_prescale(NormalizationMode mode) {
    return mode == NormalizationMode::eqU1 ? 1.0 : -0.5;
}

/// Widened tolerance for the scale-family scan; localization at large t
/// concentrates the integrand.
inline constexpr double kScanTolerance = 1e-4;

struct MQContext {
    ChartManifold manifold;
    SectionField section;
    NormalizationMode mode = NormalizationMode::calibrated;
    std::vector<int> nodes_per_axis;
};

namespace detail {

/// Pointwise chart density of the curvature-plus-section representative,
/// without the mode constant: pi^{-m} e^{-t^2 |s|^2} times the top
/// coefficient of the fermionic integral of exp of the exponent, times the
/// frame volume factor.
inline double integrand_core(const ChartManifold& M, const SectionField& S, const Vec& u,
                             double t, double curvature_scale) {
    using GD = superalg::GrassmannElement<double>;
    using superalg::MultiIndex;

    const int n = M.dim;
    const int m = n / 2;
    const Mat g = M.metric(u);
    const auto fd = geometry::orthonormal_frame(M, u);
    const Vec s = S.value(u);
    const double s2 = s.dot(g * s);  // metric norm of the section

    const auto curv = geometry::curvature_form(M, u);

    // generators 0..n-1: orthonormal coframe slots; n..2n-1: fermions
    const int N = 2 * n;
    std::vector<GD::term_type> terms;
    terms.reserve(static_cast<std::size_t>(m * n * n));
    for (int a = 0; a < n; ++a) {
        for (int b = a + 1; b < n; ++b) {
            for (int c = 0; c < n; ++c) {
                for (int d = c + 1; d < n; ++d) {
                    // frame-frame two-form coefficient of e^c ^ e^d
                    double val = 0.0;
                    for (int mu = 0; mu < n; ++mu)
                        for (int nu = 0; nu < n; ++nu)
                            val += curv.omega(a, b, mu, nu) * fd.frame(mu, c) * fd.frame(nu, d);
                    val *= curvature_scale;
                    if (val != 0.0)
                        terms.emplace_back((1u << c) | (1u << d) | (1u << (n + a)) | (1u << (n + b)),
                                           val);
                }
            }
        }
    }
    if (t != 0.0) {
        const Mat nabla = geometry::covariant_derivative_section(M, S, u);
        for (int a = 0; a < n; ++a)
            for (int c = 0; c < n; ++c) {
                const double val = t * nabla(a, c);
                if (val != 0.0) terms.emplace_back((1u << c) | (1u << (n + a)), val);
            }
    }

    const auto exponent = GD::from_terms(N, std::move(terms));
    if (!exponent.is_homogeneous(superalg::Parity::even))
        throw InternalError("integrand exponent is not even: sign bookkeeping bug");

    const MultiIndex fermions(N, superalg::full_mask(N) & ~superalg::full_mask(n));
    const auto integrated = superalg::berezin(superalg::exp_even(exponent), fermions);
    const double top = integrated.coefficient(MultiIndex(N, superalg::full_mask(n)));

    return std::pow(std::numbers::pi, -m) * std::exp(-t * t * s2) * top * fd.volume_factor;
}

inline std::vector<int> validated_counts(const MQContext& ctx) {
    if (ctx.manifold.dim <= 0 || ctx.manifold.dim % 2 != 0)
        throw ConfigError("manifold dimension must be even");
    if (ctx.nodes_per_axis.size() != static_cast<std::size_t>(ctx.manifold.dim))
        throw ConfigError("need one node count per chart axis");
    for (int c : ctx.nodes_per_axis)
        if (c < 8) throw ConfigError("node counts must be at least 8 per axis");
    return ctx.nodes_per_axis;
}

/// Quadrature of the raw density over the chart; node evaluations run in
/// parallel, accumulation is a fixed pairwise tree.
inline double integrate_grid(const ChartManifold& M, const SectionField& S, double t,
                             double curvature_scale, const std::vector<int>& counts) {
    const auto grid = TensorGrid::make(M, counts);
    const std::size_t total = grid.total();
    std::vector<double> values(total);

    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const std::size_t nthreads = std::min<std::size_t>(hw, std::max<std::size_t>(1, total / 256));
    std::vector<std::exception_ptr> errors(nthreads);

    auto run_chunk = [&](std::size_t tid, std::size_t begin, std::size_t end) {
        try {
            Vec u(M.dim);
            double w = 0.0;
            for (std::size_t f = begin; f < end; ++f) {
                grid.node(f, u, w);
                values[f] = integrand_core(M, S, u, t, curvature_scale) * w;
            }
        } catch (...) {
            errors[tid] = std::current_exception();
        }
    };

    if (nthreads <= 1) {
        run_chunk(0, 0, total);
    } else {
        std::vector<std::thread> pool;
        const std::size_t chunk = (total + nthreads - 1) / nthreads;
        for (std::size_t tid = 0; tid < nthreads; ++tid) {
            const std::size_t begin = tid * chunk;
            const std::size_t end = std::min(total, begin + chunk);
            pool.emplace_back(run_chunk, tid, begin, end);
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& e : errors)
        if (e) std::rethrow_exception(e);

    for (std::size_t f = 0; f < total; ++f) {
        if (!std::isfinite(values[f])) {
            Vec u(M.dim);
            double w = 0.0;
            grid.node(f, u, w);
            throw NumericError("non-finite integrand at node " + geometry::format_point(u));
        }
    }
    return pairwise_sum(values);
}

}  // namespace detail

/// The per-two-plane constant of calibrated mode: fixed once by requiring
/// that the zero-section integral over the unit two-sphere equal 2, then
/// frozen for every manifold and section.
inline double calibration_constant() {
    static const double kappa = [] {
        const auto m = geometry::sphere2(1.0);
        const auto s = geometry::zero_section(2);
        const double raw = detail::integrate_grid(m, s, 0.0, -0.5, {64, 64});
        if (std::fabs(raw) < 1e-8) throw NumericError("calibration integral degenerate");
        return 2.0 / raw;
    }();
    return kappa;
}

/// Constant applied on top of pi^{-m}, as a function of m = dim/2.
inline double mode_constant(NormalizationMode mode, int m) {
    switch (mode) {
        case NormalizationMode::eqU1:
            return 1.0;
        case NormalizationMode::eqU:
            return (m % 2 == 0) ? 1.0 : -1.0;
        case NormalizationMode::calibrated:
            return std::pow(calibration_constant(), m);
    }
    throw InternalError("unhandled normalization mode");
}

/// Pointwise chart density of the pulled-back representative at scale t.
inline double mq_integrand(const MQContext& ctx, const Vec& u, double t) {
    const int m = ctx.manifold.dim / 2;
    return mode_constant(ctx.mode, m) *
           detail::integrand_core(ctx.manifold, ctx.section, u, t, curvature_prescale(ctx.mode));
}

struct EulerResult {
    double chi = 0.0;
    /// Difference against a half-resolution grid.
    double convergence_estimate = 0.0;
};

inline EulerResult euler_integral(const MQContext& ctx, double t) {
    const auto counts = detail::validated_counts(ctx);
    const double scale = curvature_prescale(ctx.mode);
    const double constant = mode_constant(ctx.mode, ctx.manifold.dim / 2);

    const double full = detail::integrate_grid(ctx.manifold, ctx.section, t, scale, counts);
    std::vector<int> half(counts.size());
    for (std::size_t k = 0; k < counts.size(); ++k)
        half[k] = std::max(4, counts[k] / 2);
    const double coarse = detail::integrate_grid(ctx.manifold, ctx.section, t, scale, half);

    return {constant * full, std::fabs(constant) * std::fabs(full - coarse)};
}

struct ScanPoint {
    double t = 0.0;
    double chi = 0.0;
    double convergence_estimate = 0.0;
};

struct ScanResult {
    std::vector<ScanPoint> points;
    double max_pairwise_deviation = 0.0;
    std::vector<std::string> warnings;
};

/// Integral of the representative pulled back by t*s for each listed t.
/// The total is invariant in t; the report carries the spread and flags
/// resolution trouble instead of failing.
inline ScanResult thom_family_scan(const MQContext& ctx, const std::vector<double>& ts) {
    if (ts.empty()) throw ConfigError("scan needs at least one scale value");
    for (double t : ts)
        if (t < 0.0 || !std::isfinite(t)) throw ConfigError("scale values must be finite and >= 0");

    ScanResult out;
    for (double t : ts) {
        const auto r = euler_integral(ctx, t);
        out.points.push_back({t, r.chi, r.convergence_estimate});
        if (r.convergence_estimate > 10.0 * kScanTolerance) {
            std::ostringstream os;
            os << "resolution warning at t=" << t << ": convergence estimate "
               << r.convergence_estimate << " exceeds " << 10.0 * kScanTolerance;
            out.warnings.push_back(os.str());
        }
    }
    double lo = out.points.front().chi, hi = lo;
    for (const auto& p : out.points) {
        lo = std::min(lo, p.chi);
        hi = std::max(hi, p.chi);
    }
    out.max_pairwise_deviation = hi - lo;
    return out;
}

}  // namespace susy::euler
