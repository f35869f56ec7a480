#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "susycalc/errors.hpp"
#include "susycalc/euler/mq.hpp"
#include "susycalc/geometry/chart_manifold.hpp"

namespace susy::euler {

inline constexpr double kNewtonTolerance = 1e-10;
inline constexpr int kNewtonMaxSteps = 50;
inline constexpr double kDedupeRadius = 1e-6;
inline constexpr double kDegenerateDet = 1e-8;

struct HopfZero {
    Vec point;
    int index = 0;       // sign of det of the frame components of nabla s
    double abs_det = 0.0;
};

struct HopfReport {
    std::vector<HopfZero> zeros;
    long total = 0;
    std::vector<std::string> warnings;
};

namespace detail {

inline Vec wrap_periodic(const ChartManifold& M, Vec u) {
    for (int k = 0; k < M.dim; ++k) {
        const auto& ax = M.axes[static_cast<std::size_t>(k)];
        if (!ax.periodic) continue;
        double w = std::fmod(u(k) - ax.lo, ax.length());
        if (w < 0.0) w += ax.length();
        u(k) = ax.lo + w;
    }
    return u;
}

inline Vec clamp_into_chart(const ChartManifold& M, Vec u) {
    u = wrap_periodic(M, u);
    for (int k = 0; k < M.dim; ++k) {
        const auto& ax = M.axes[static_cast<std::size_t>(k)];
        if (!ax.periodic) u(k) = std::clamp(u(k), ax.lo, ax.hi);
    }
    return u;
}

/// A converged point just outside a trimmed non-periodic axis is a genuine
/// zero sitting in the excised margin (it gets clamped to the nearest
/// interior point).  Far outside the box it is an alias of the periodic
/// chart functions, not a point of the manifold.
inline bool within_chart_margin(const ChartManifold& M, const Vec& u) {
    for (int k = 0; k < M.dim; ++k) {
        const auto& ax = M.axes[static_cast<std::size_t>(k)];
        if (ax.periodic) continue;
        const double margin = 1e-3 * ax.length();
        if (u(k) < ax.lo - margin || u(k) > ax.hi + margin) return false;
    }
    return true;
}

/// Squared distance in the local metric at `at`, with periodic wrapping of
/// the separation.  Chart-degenerate duplicates (e.g. a polar zero reached
/// at many angle values) collapse under this distance while genuinely
/// distinct zeros stay apart.
inline double metric_distance_sq(const ChartManifold& M, const Vec& at, const Vec& other) {
    Vec d = other - at;
    for (int k = 0; k < M.dim; ++k) {
        const auto& ax = M.axes[static_cast<std::size_t>(k)];
        if (!ax.periodic) continue;
        const double L = ax.length();
        d(k) = std::remainder(d(k), L);
    }
    return d.dot(M.metric(at) * d);
}

}  // namespace detail

/// Locates the zeros of the section by Newton iteration from a coarse seed
/// grid and assigns each the sign of det of the frame components of its
/// covariant derivative.  The Newton matrix is the covariant derivative in
/// chart indices; unlike the bare Jacobian it stays regular when the zero
/// sits in a chart-degenerate direction.
inline HopfReport hopf_indices(const MQContext& ctx, int seeds_per_axis = 32) {
    const auto& M = ctx.manifold;
    const auto& S = ctx.section;
    const int n = M.dim;
    if (seeds_per_axis < 2) throw ConfigError("need at least 2 seeds per axis");

    double diag = 0.0;
    for (const auto& ax : M.axes) diag += ax.length() * ax.length();
    const double max_step = std::sqrt(diag);

    std::size_t total_seeds = 1;
    for (int k = 0; k < n; ++k) total_seeds *= static_cast<std::size_t>(seeds_per_axis);

    HopfReport report;
    std::vector<Vec> raw_zeros;  // pre-clamp representatives, for dedupe
    std::size_t abandoned = 0;
    bool near_miss = false;

    for (std::size_t flat = 0; flat < total_seeds; ++flat) {
        Vec u(n);
        std::size_t rest = flat;
        for (int k = 0; k < n; ++k) {
            const auto& ax = M.axes[static_cast<std::size_t>(k)];
            const auto i = rest % static_cast<std::size_t>(seeds_per_axis);
            rest /= static_cast<std::size_t>(seeds_per_axis);
            u(k) = ax.lo + (static_cast<double>(i) + 0.5) * ax.length() / seeds_per_axis;
        }

        bool converged = false;
        double last_residual = std::numeric_limits<double>::infinity();
        try {
            for (int step = 0; step < kNewtonMaxSteps; ++step) {
                const Vec s = S.value(u);
                if (!s.allFinite()) break;
                last_residual = s.lpNorm<Eigen::Infinity>();
                if (last_residual <= kNewtonTolerance) {
                    converged = true;
                    break;
                }
                const Mat A = geometry::covariant_derivative_chart(M, S, u);
                Eigen::FullPivLU<Mat> lu(A);
                if (!lu.isInvertible()) break;
                Vec du = lu.solve(-s);
                const double len = du.norm();
                if (len > max_step) du *= max_step / len;
                u = detail::wrap_periodic(M, u + du);
            }
        } catch (const Error&) {
            converged = false;  // iterate wandered outside the metric's domain
        }

        if (!converged) {
            ++abandoned;
            if (last_residual < 1e-4) near_miss = true;
            continue;
        }
        if (!detail::within_chart_margin(M, u)) continue;

        bool duplicate = false;
        for (const auto& z : raw_zeros) {
            if (detail::metric_distance_sq(M, z, u) <= kDedupeRadius * kDedupeRadius) {
                duplicate = true;
                break;
            }
        }
        if (duplicate) continue;
        raw_zeros.push_back(u);

        const Vec rep = detail::clamp_into_chart(M, u);
        const Mat nabla = geometry::covariant_derivative_section(M, S, rep);
        const double det = nabla.determinant();
        if (std::fabs(det) < kDegenerateDet)
            throw DegenerateZeroError("degenerate zero at " + geometry::format_point(rep) +
                                      ": |det nabla s| = " + std::to_string(std::fabs(det)));
        report.zeros.push_back({rep, det > 0.0 ? 1 : -1, std::fabs(det)});
    }

    if (near_miss) {
        std::ostringstream os;
        os << "resolution warning: " << abandoned << " of " << total_seeds
           << " seeds did not converge and at least one stalled near a small residual;"
           << " consider a finer seed grid";
        report.warnings.push_back(os.str());
    }

    std::sort(report.zeros.begin(), report.zeros.end(), [](const HopfZero& a, const HopfZero& b) {
        for (int k = 0; k < a.point.size(); ++k) {
            if (a.point(k) < b.point(k)) return true;
            if (a.point(k) > b.point(k)) return false;
        }
        return false;
    });
    for (const auto& z : report.zeros) report.total += z.index;
    return report;
}

}  // namespace susy::euler
