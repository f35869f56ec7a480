#pragma once

#include <Eigen/Dense>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "susycalc/errors.hpp"

namespace susy::geometry {

using Vec = Eigen::VectorXd;
using Mat = Eigen::MatrixXd;

/// Finite-difference steps: first and second derivatives of chart data.
inline constexpr double kFdStepFirst = 1e-5;
inline constexpr double kFdStepSecond = 1e-4;

struct Axis {
    double lo = 0.0;
    double hi = 1.0;
    bool periodic = false;
    double length() const { return hi - lo; }
};

/// Dense rank-4 tensor of fixed dimension n (chart or frame indices).
class Tensor4 {
public:
    explicit Tensor4(int n) : n_(n), v_(static_cast<std::size_t>(n) * n * n * n, 0.0) {}

    double& operator()(int i, int j, int k, int l) { return v_[idx(i, j, k, l)]; }
    double operator()(int i, int j, int k, int l) const { return v_[idx(i, j, k, l)]; }
    int dim() const { return n_; }

private:
    std::size_t idx(int i, int j, int k, int l) const {
        return ((static_cast<std::size_t>(i) * n_ + j) * n_ + k) * n_ + l;
    }
    int n_;
    std::vector<double> v_;
};

/// Christoffel symbols: gamma[mu](rho, sigma).
using Christoffel = std::vector<Mat>;

/// A Riemannian manifold presented as a single parameter chart over a box,
/// with optional analytic metric derivatives and curvature.  Degenerate
/// chart loci (sphere poles) are excised by baking the trim into the axis
/// ranges.  Immutable after construction; evaluation callbacks are pure.
struct ChartManifold {
    std::string name;
    std::map<std::string, double> params;
    int dim = 0;
    std::vector<Axis> axes;
    std::function<Mat(const Vec&)> metric;
    /// Per-axis derivatives of the metric; empty -> central differences.
    std::function<std::vector<Mat>(const Vec&)> metric_grad;
    /// Analytic curvature tensor R^mu_{nu rho sigma}; empty -> differences
    /// of the Christoffel symbols.
    std::function<Tensor4(const Vec&)> riemann;
};

inline std::string format_point(const Vec& u) {
    std::ostringstream os;
    os << "(";
    for (int i = 0; i < u.size(); ++i) os << (i ? ", " : "") << u(i);
    os << ")";
    return os.str();
}

/// Orthonormal coframe at a point.  coframe(a, mu) are the components of
/// e^a along du^mu; frame = coframe^{-1} maps frame indices back to chart
/// vectors.  Built by Gram-Schmidt on the coordinate coframe in axis order,
/// so the matrix is lower triangular with positive diagonal and the frame
/// is orientation preserving.
struct FrameData {
    Mat coframe;
    Mat frame;
    double volume_factor = 0.0;  // det coframe = sqrt(det g)
};

inline FrameData orthonormal_frame(const ChartManifold& M, const Vec& u) {
    const Mat g = M.metric(u);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        throw GeometryError(M.name + ": metric is not positive definite at " + format_point(u));
    const Mat ginv = llt.solve(Mat::Identity(M.dim, M.dim));
    Eigen::LLT<Mat> llt_inv(ginv);
    if (llt_inv.info() != Eigen::Success)
        throw GeometryError(M.name + ": degenerate inverse metric at " + format_point(u));
    const Mat l = llt_inv.matrixL();

    FrameData fd;
    fd.frame = l;                       // columns: frame vectors, lower triangular
    fd.coframe = l.inverse();           // rows: coframe, also lower triangular
    fd.volume_factor = fd.coframe.determinant();
    return fd;
}

inline std::vector<Mat> metric_derivatives(const ChartManifold& M, const Vec& u) {
    if (M.metric_grad) return M.metric_grad(u);
    std::vector<Mat> dg(static_cast<std::size_t>(M.dim));
    for (int k = 0; k < M.dim; ++k) {
        const double h = kFdStepFirst * std::max(1.0, std::fabs(u(k)));
        Vec up = u, dn = u;
        up(k) += h;
        dn(k) -= h;
        dg[static_cast<std::size_t>(k)] = (M.metric(up) - M.metric(dn)) / (2.0 * h);
    }
    return dg;
}

/// Levi-Civita connection coefficients from the metric.
inline Christoffel christoffel(const ChartManifold& M, const Vec& u) {
    const int n = M.dim;
    const Mat g = M.metric(u);
    Eigen::LLT<Mat> llt(g);
    if (llt.info() != Eigen::Success)
        throw GeometryError(M.name + ": metric is not positive definite at " + format_point(u));
    const Mat ginv = llt.solve(Mat::Identity(n, n));
    const auto dg = metric_derivatives(M, u);

    Christoffel gamma(static_cast<std::size_t>(n), Mat::Zero(n, n));
    for (int mu = 0; mu < n; ++mu)
        for (int rho = 0; rho < n; ++rho)
            for (int sig = rho; sig < n; ++sig) {
                double sum = 0.0;
                for (int nu = 0; nu < n; ++nu)
                    sum += ginv(mu, nu) * (dg[static_cast<std::size_t>(rho)](nu, sig) +
                                           dg[static_cast<std::size_t>(sig)](nu, rho) -
                                           dg[static_cast<std::size_t>(nu)](rho, sig));
                gamma[static_cast<std::size_t>(mu)](rho, sig) = 0.5 * sum;
                gamma[static_cast<std::size_t>(mu)](sig, rho) = 0.5 * sum;
            }
    return gamma;
}

/// Curvature tensor R^mu_{nu rho sigma}, with
/// R(d_rho, d_sigma) d_nu = R^mu_{nu rho sigma} d_mu.
inline Tensor4 riemann(const ChartManifold& M, const Vec& u) {
    const int n = M.dim;
    if (M.riemann) return M.riemann(u);

    const auto gamma = christoffel(M, u);
    std::vector<Christoffel> dgamma(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        const double h = kFdStepSecond * std::max(1.0, std::fabs(u(k)));
        Vec up = u, dn = u;
        up(k) += h;
        dn(k) -= h;
        const auto gup = christoffel(M, up);
        const auto gdn = christoffel(M, dn);
        Christoffel d(static_cast<std::size_t>(n));
        for (int mu = 0; mu < n; ++mu)
            d[static_cast<std::size_t>(mu)] =
                (gup[static_cast<std::size_t>(mu)] - gdn[static_cast<std::size_t>(mu)]) / (2.0 * h);
        dgamma[static_cast<std::size_t>(k)] = std::move(d);
    }

    Tensor4 r(n);
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
            for (int rho = 0; rho < n; ++rho)
                for (int sig = 0; sig < n; ++sig) {
                    double val = dgamma[static_cast<std::size_t>(rho)][static_cast<std::size_t>(mu)](nu, sig) -
                                 dgamma[static_cast<std::size_t>(sig)][static_cast<std::size_t>(mu)](nu, rho);
                    for (int lam = 0; lam < n; ++lam)
                        val += gamma[static_cast<std::size_t>(mu)](rho, lam) * gamma[static_cast<std::size_t>(lam)](nu, sig) -
                               gamma[static_cast<std::size_t>(mu)](sig, lam) * gamma[static_cast<std::size_t>(lam)](nu, rho);
                    r(mu, nu, rho, sig) = val;
                }
    return r;
}

/// Curvature two-form in orthonormal frame indices (a, b) and chart form
/// indices (mu, nu): Omega(a,b,mu,nu) = e^a_alpha R^alpha_{beta mu nu} E^beta_b.
/// Values of the two-form on coordinate planes; antisymmetric in both pairs.
struct CurvatureAtPoint {
    int n = 0;
    Tensor4 omega{0};
};

inline CurvatureAtPoint curvature_form(const ChartManifold& M, const Vec& u) {
    const int n = M.dim;
    const Tensor4 r = riemann(M, u);
    const FrameData fd = orthonormal_frame(M, u);

    CurvatureAtPoint out{n, Tensor4(n)};
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b)
            for (int mu = 0; mu < n; ++mu)
                for (int nu = mu + 1; nu < n; ++nu) {
                    double val = 0.0;
                    for (int al = 0; al < n; ++al)
                        for (int be = 0; be < n; ++be)
                            val += fd.coframe(a, al) * r(al, be, mu, nu) * fd.frame(be, b);
                    out.omega(a, b, mu, nu) = val;
                    out.omega(a, b, nu, mu) = -val;
                }
    return out;
}

/// A vector field in chart components, with optional analytic Jacobian.
struct SectionField {
    std::string name;
    std::function<Vec(const Vec&)> value;
    std::function<Mat(const Vec&)> jacobian;
};

inline Mat section_jacobian(const SectionField& s, const Vec& u) {
    if (s.jacobian) return s.jacobian(u);
    const int n = static_cast<int>(u.size());
    Mat j(n, n);
    for (int k = 0; k < n; ++k) {
        const double h = kFdStepFirst * std::max(1.0, std::fabs(u(k)));
        Vec up = u, dn = u;
        up(k) += h;
        dn(k) -= h;
        j.col(k) = (s.value(up) - s.value(dn)) / (2.0 * h);
    }
    return j;
}

/// Covariant derivative in chart indices: (nabla s)^mu_nu = d_nu s^mu
/// + Gamma^mu_{nu sigma} s^sigma.
inline Mat covariant_derivative_chart(const ChartManifold& M, const SectionField& s, const Vec& u) {
    const int n = M.dim;
    const Mat j = section_jacobian(s, u);
    const auto gamma = christoffel(M, u);
    const Vec sv = s.value(u);
    Mat out = j;
    for (int mu = 0; mu < n; ++mu)
        for (int nu = 0; nu < n; ++nu)
            out(mu, nu) += gamma[static_cast<std::size_t>(mu)].row(nu).dot(sv);
    return out;
}

/// The same derivative with both legs converted to the orthonormal frame:
/// (nabla s)^a_b = e^a_mu (nabla s)^mu_nu E^nu_b.
inline Mat covariant_derivative_section(const ChartManifold& M, const SectionField& s, const Vec& u) {
    const FrameData fd = orthonormal_frame(M, u);
    return fd.coframe * covariant_derivative_chart(M, s, u) * fd.frame;
}

}  // namespace susy::geometry
