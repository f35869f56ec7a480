#pragma once

#include <cmath>
#include <numbers>
#include <span>
#include <vector>

#include "susycalc/errors.hpp"
#include "susycalc/geometry/chart_manifold.hpp"

namespace susy::euler {

struct Rule1D {
    std::vector<double> nodes;
    std::vector<double> weights;
};

/// Gauss-Legendre rule on [a, b]; nodes by Newton iteration on the
/// Legendre polynomial from the Chebyshev initial guess.
inline Rule1D gauss_legendre(int n, double a, double b) {
    if (n < 1) throw ConfigError("quadrature rule needs at least one node");
    Rule1D r;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.resize(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double x = std::cos(std::numbers::pi * (i + 0.75) / (n + 0.5));
        double deriv = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p_prev = 0.0, p = 1.0;
            for (int k = 1; k <= n; ++k) {
                const double p_next = ((2.0 * k - 1.0) * x * p - (k - 1.0) * p_prev) / k;
                p_prev = p;
                p = p_next;
            }
            deriv = n * (x * p - p_prev) / (x * x - 1.0);
            const double dx = -p / deriv;
            x += dx;
            if (std::fabs(dx) < 1e-15) break;
        }
        const double w = 2.0 / ((1.0 - x * x) * deriv * deriv);
        r.nodes[static_cast<std::size_t>(i)] = 0.5 * (b - a) * x + 0.5 * (a + b);
        r.weights[static_cast<std::size_t>(i)] = 0.5 * (b - a) * w;
    }
    return r;
}

/// Equispaced rule without endpoint duplication; spectrally accurate for
/// smooth periodic integrands.
inline Rule1D periodic_trapezoid(int n, double a, double b) {
    if (n < 1) throw ConfigError("quadrature rule needs at least one node");
    Rule1D r;
    const double h = (b - a) / n;
    r.nodes.resize(static_cast<std::size_t>(n));
    r.weights.assign(static_cast<std::size_t>(n), h);
    for (int i = 0; i < n; ++i) r.nodes[static_cast<std::size_t>(i)] = a + i * h;
    return r;
}

inline Rule1D axis_rule(const geometry::Axis& ax, int count) {
    return ax.periodic ? periodic_trapezoid(count, ax.lo, ax.hi)
                       : gauss_legendre(count, ax.lo, ax.hi);
}

/// Summation with a fixed pairwise tree, so the result does not depend on
/// how the evaluations were distributed over threads.
inline double pairwise_sum(std::span<const double> v) {
    if (v.size() <= 16) {
        double s = 0.0;
        for (double x : v) s += x;
        return s;
    }
    const std::size_t half = v.size() / 2;
    return pairwise_sum(v.first(half)) + pairwise_sum(v.subspan(half));
}

/// Tensor-product grid over the chart axes.
struct TensorGrid {
    std::vector<Rule1D> rules;

    static TensorGrid make(const geometry::ChartManifold& m, const std::vector<int>& counts) {
        if (counts.size() != static_cast<std::size_t>(m.dim))
            throw ConfigError("need one node count per axis");
        TensorGrid g;
        for (int k = 0; k < m.dim; ++k)
            g.rules.push_back(axis_rule(m.axes[static_cast<std::size_t>(k)],
                                        counts[static_cast<std::size_t>(k)]));
        return g;
    }

    std::size_t total() const {
        std::size_t t = 1;
        for (const auto& r : rules) t *= r.nodes.size();
        return t;
    }

    /// Chart point and combined weight of the flat-indexed node.
    void node(std::size_t flat, geometry::Vec& u, double& w) const {
        w = 1.0;
        for (std::size_t k = 0; k < rules.size(); ++k) {
            const std::size_t nk = rules[k].nodes.size();
            const std::size_t i = flat % nk;
            flat /= nk;
            u(static_cast<int>(k)) = rules[k].nodes[i];
            w *= rules[k].weights[i];
        }
    }
};

}  // namespace susy::euler
