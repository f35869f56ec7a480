#pragma once

#include <cmath>
#include <numbers>

#include "susycalc/geometry/chart_manifold.hpp"

namespace susy::geometry {

/// Excision margin for chart-degenerate loci (sphere poles).  Integrands
/// are bounded top forms, so the induced error is O(trim).
inline constexpr double kPoleTrim = 1e-6;

/// R^mu_{nu rho sigma} = K (delta^mu_rho g_{nu sigma} - delta^mu_sigma g_{nu rho}).
/// Exact for constant-curvature metrics in any dimension and for every
/// two-dimensional metric with Gauss curvature K(u).
inline Tensor4 curvature_from_scalar(double K, const Mat& g) {
    const int n = static_cast<int>(g.rows());
    Tensor4 r(n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
            for (int rho = 0; rho < n; ++rho)
                for (int sig = 0; sig < n; ++sig)
                    r(mu, nu, rho, sig) = K * ((mu == rho ? g(nu, sig) : 0.0) -
                                               (mu == sig ? g(nu, rho) : 0.0));
    return r;
}

/// Round two-sphere of radius r in polar coordinates (theta, phi), poles
/// trimmed off the theta axis.
inline ChartManifold sphere2(double radius) {
    if (!(radius > 0.0)) throw ConfigError("sphere2: radius must be positive");
    constexpr double pi = std::numbers::pi;
    ChartManifold m;
    m.name = "sphere2";
    m.params = {{"radius", radius}};
    m.dim = 2;
    m.axes = {{kPoleTrim, pi - kPoleTrim, false}, {0.0, 2.0 * pi, true}};
    const double r2 = radius * radius;
    m.metric = [r2](const Vec& u) {
        Mat g = Mat::Zero(2, 2);
        const double s = std::sin(u(0));
        g(0, 0) = r2;
        g(1, 1) = r2 * s * s;
        return g;
    };
    m.metric_grad = [r2](const Vec& u) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[0](1, 1) = 2.0 * r2 * std::sin(u(0)) * std::cos(u(0));
        return dg;
    };
    const double K = 1.0 / r2;
    m.riemann = [metric = m.metric, K](const Vec& u) { return curvature_from_scalar(K, metric(u)); };
    return m;
}

/// Torus of revolution with major radius R and tube radius r, chart
/// (v, u): both angles periodic, metric diag(r^2, (R + r cos v)^2).
inline ChartManifold torus2(double R, double r) {
    if (!(r > 0.0) || !(R > r)) throw ConfigError("torus2: need R > r > 0");
    constexpr double pi = std::numbers::pi;
    ChartManifold m;
    m.name = "torus2";
    m.params = {{"R", R}, {"r", r}};
    m.dim = 2;
    m.axes = {{0.0, 2.0 * pi, true}, {0.0, 2.0 * pi, true}};
    m.metric = [R, r](const Vec& u) {
        Mat g = Mat::Zero(2, 2);
        const double w = R + r * std::cos(u(0));
        g(0, 0) = r * r;
        g(1, 1) = w * w;
        return g;
    };
    m.metric_grad = [R, r](const Vec& u) {
        std::vector<Mat> dg(2, Mat::Zero(2, 2));
        dg[0](1, 1) = -2.0 * r * std::sin(u(0)) * (R + r * std::cos(u(0)));
        return dg;
    };
    m.riemann = [metric = m.metric, R, r](const Vec& u) {
        const double K = std::cos(u(0)) / (r * (R + r * std::cos(u(0))));
        return curvature_from_scalar(K, metric(u));
    };
    return m;
}

/// Unit-square flat torus.
inline ChartManifold flat_torus2() {
    ChartManifold m;
    m.name = "flat_torus2";
    m.dim = 2;
    m.axes = {{0.0, 1.0, true}, {0.0, 1.0, true}};
    m.metric = [](const Vec&) { return Mat::Identity(2, 2); };
    m.metric_grad = [](const Vec&) { return std::vector<Mat>(2, Mat::Zero(2, 2)); };
    m.riemann = [](const Vec&) { return Tensor4(2); };
    return m;
}

/// Round four-sphere of radius r in hyperspherical angles
/// (theta1, theta2, theta3, phi); the three polar axes are trimmed.
inline ChartManifold sphere4(double radius) {
    if (!(radius > 0.0)) throw ConfigError("sphere4: radius must be positive");
    constexpr double pi = std::numbers::pi;
    ChartManifold m;
    m.name = "sphere4";
    m.params = {{"radius", radius}};
    m.dim = 4;
    m.axes = {{kPoleTrim, pi - kPoleTrim, false},
              {kPoleTrim, pi - kPoleTrim, false},
              {kPoleTrim, pi - kPoleTrim, false},
              {0.0, 2.0 * pi, true}};
    const double r2 = radius * radius;
    m.metric = [r2](const Vec& u) {
        const double s1 = std::sin(u(0)), s2 = std::sin(u(1)), s3 = std::sin(u(2));
        Mat g = Mat::Zero(4, 4);
        g(0, 0) = r2;
        g(1, 1) = r2 * s1 * s1;
        g(2, 2) = r2 * s1 * s1 * s2 * s2;
        g(3, 3) = r2 * s1 * s1 * s2 * s2 * s3 * s3;
        return g;
    };
    m.metric_grad = [r2](const Vec& u) {
        const double s1 = std::sin(u(0)), c1 = std::cos(u(0));
        const double s2 = std::sin(u(1)), c2 = std::cos(u(1));
        const double s3 = std::sin(u(2)), c3 = std::cos(u(2));
        std::vector<Mat> dg(4, Mat::Zero(4, 4));
        dg[0](1, 1) = r2 * 2.0 * s1 * c1;
        dg[0](2, 2) = r2 * 2.0 * s1 * c1 * s2 * s2;
        dg[0](3, 3) = r2 * 2.0 * s1 * c1 * s2 * s2 * s3 * s3;
        dg[1](2, 2) = r2 * s1 * s1 * 2.0 * s2 * c2;
        dg[1](3, 3) = r2 * s1 * s1 * 2.0 * s2 * c2 * s3 * s3;
        dg[2](3, 3) = r2 * s1 * s1 * s2 * s2 * 2.0 * s3 * c3;
        return dg;
    };
    const double K = 1.0 / r2;
    m.riemann = [metric = m.metric, K](const Vec& u) { return curvature_from_scalar(K, metric(u)); };
    return m;
}

inline ChartManifold builtin_manifold(const std::string& name,
                                      const std::map<std::string, double>& params) {
    auto get = [&](const char* key, double fallback) {
        auto it = params.find(key);
        return it == params.end() ? fallback : it->second;
    };
    if (name == "sphere2") return sphere2(get("radius", 1.0));
    if (name == "sphere4") return sphere4(get("radius", 1.0));
    if (name == "flat_torus2") return flat_torus2();
    if (name == "torus2") return torus2(get("R", 2.0), get("r", 0.5));
    throw ConfigError("unknown manifold \"" + name +
                      "\" (available: sphere2, torus2, flat_torus2, sphere4)");
}

inline SectionField zero_section(int dim) {
    SectionField s;
    s.name = "zero";
    s.value = [dim](const Vec&) { return Vec::Zero(dim).eval(); };
    s.jacobian = [dim](const Vec&) { return Mat::Zero(dim, dim).eval(); };
    return s;
}

/// Named test sections with hand-checkable zero sets.
inline SectionField builtin_section(const std::string& name, const ChartManifold& m) {
    if (name == "zero") return zero_section(m.dim);

    if (name == "height-gradient") {
        if (m.name != "sphere2")
            throw ConfigError("section \"height-gradient\" is defined on sphere2 only");
        SectionField s;
        s.name = name;
        s.value = [](const Vec& u) {
            Vec v(2);
            v << std::sin(u(0)), 0.0;
            return v;
        };
        s.jacobian = [](const Vec& u) {
            Mat j = Mat::Zero(2, 2);
            j(0, 0) = std::cos(u(0));
            return j;
        };
        return s;
    }

    if (name == "rotational") {
        if (m.name != "sphere2")
            throw ConfigError("section \"rotational\" is defined on sphere2 only");
        SectionField s;
        s.name = name;
        s.value = [](const Vec&) {
            Vec v(2);
            v << 0.0, 1.0;
            return v;
        };
        s.jacobian = [](const Vec&) { return Mat::Zero(2, 2).eval(); };
        return s;
    }

    if (name == "sines") {
        if (m.name != "flat_torus2" && m.name != "torus2")
            throw ConfigError("section \"sines\" is defined on tori only");
        constexpr double two_pi = 2.0 * std::numbers::pi;
        std::vector<double> freq(static_cast<std::size_t>(m.dim));
        std::vector<double> lo(static_cast<std::size_t>(m.dim));
        for (int k = 0; k < m.dim; ++k) {
            freq[static_cast<std::size_t>(k)] = two_pi / m.axes[static_cast<std::size_t>(k)].length();
            lo[static_cast<std::size_t>(k)] = m.axes[static_cast<std::size_t>(k)].lo;
        }
        SectionField s;
        s.name = name;
        s.value = [freq, lo](const Vec& u) {
            Vec v(static_cast<int>(freq.size()));
            for (std::size_t k = 0; k < freq.size(); ++k)
                v(static_cast<int>(k)) = std::sin(freq[k] * (u(static_cast<int>(k)) - lo[k]));
            return v;
        };
        s.jacobian = [freq, lo](const Vec& u) {
            const int n = static_cast<int>(freq.size());
            Mat j = Mat::Zero(n, n);
            for (int k = 0; k < n; ++k)
                j(k, k) = freq[static_cast<std::size_t>(k)] *
                          std::cos(freq[static_cast<std::size_t>(k)] * (u(k) - lo[static_cast<std::size_t>(k)]));
            return j;
        };
        return s;
    }

    throw ConfigError("unknown section \"" + name +
                      "\" (available: zero, height-gradient, rotational, sines)");
}

}  // namespace susy::geometry
