#include <catch2/catch_amalgamated.hpp>

#include <numbers>
#include <random>

#include "susycalc/euler/disk_map.hpp"
#include "susycalc/euler/hopf.hpp"
#include "susycalc/euler/mq.hpp"
#include "susycalc/pfaffian/pfaffian.hpp"

using namespace susy::euler;
using namespace susy::geometry;
constexpr double pi = std::numbers::pi;

namespace {

using GD = susy::superalg::GrassmannElement<double>;
using susy::superalg::MultiIndex;

Vec point2(double a, double b) {
    Vec u(2);
    u << a, b;
    return u;
}

MQContext make_ctx(ChartManifold m, SectionField s, NormalizationMode mode, int grid) {
    MQContext ctx;
    ctx.nodes_per_axis.assign(static_cast<std::size_t>(m.dim), grid);
    ctx.manifold = std::move(m);
    ctx.section = std::move(s);
    ctx.mode = mode;
    return ctx;
}

// Independent pointwise oracle: the termwise sum over even index sets I of
//   eps(I, I') Pf((1/2) Omega_I) J^{I'},
// evaluated with the combinatorial subpfaffian oracle in the form algebra
// alone (no fermionic generators), then pi^{-m} e^{-t^2 |s|^2} sqrt(det g)
// times the top coefficient.
double closed_form_density(const ChartManifold& M, const SectionField& S, const Vec& u, double t) {
    using namespace susy::pfaffian;
    const int n = M.dim;
    const int m = n / 2;
    const auto fd = orthonormal_frame(M, u);
    const auto curv = curvature_form(M, u);
    const Vec s = S.value(u);
    const double s2 = s.dot(M.metric(u) * s);

    std::vector<GD> upper;
    for (int a = 0; a < n; ++a)
        for (int b = a + 1; b < n; ++b) {
            std::vector<GD::term_type> terms;
            for (int c = 0; c < n; ++c)
                for (int d = c + 1; d < n; ++d) {
                    double val = 0.0;
                    for (int mu = 0; mu < n; ++mu)
                        for (int nu = 0; nu < n; ++nu)
                            val += curv.omega(a, b, mu, nu) * fd.frame(mu, c) * fd.frame(nu, d);
                    val *= 0.5;  // half-curvature subpfaffians
                    if (val != 0.0)
                        terms.emplace_back((1u << c) | (1u << d), val);
                }
            upper.push_back(GD::from_terms(n, std::move(terms)));
        }
    const auto w = SkewMatrix<GD>::from_upper(n, upper);

    const Mat nabla = covariant_derivative_section(M, S, u);
    std::vector<GD> comps;
    for (int a = 0; a < n; ++a) {
        std::vector<GD::term_type> terms;
        for (int c = 0; c < n; ++c)
            if (t * nabla(a, c) != 0.0) terms.emplace_back(1u << c, t * nabla(a, c));
        comps.push_back(GD::from_terms(n, std::move(terms)));
    }
    const OddVector<double> j(comps);

    auto sum = GD::zero(n);
    for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
        if (std::popcount(mask) % 2 != 0) continue;
        const MultiIndex I(n, mask);
        auto pf = mask == 0 ? GD::unit(n) : pfaffian_expansion(w.principal_submatrix(I));
        auto src = GD::unit(n);
        for (int i : I.complement().indices()) src = src * j.at(i);
        sum = sum + double(susy::superalg::epsilon_sign(I)) * (pf * src);
    }
    const double top = sum.coefficient(MultiIndex::full(n));
    return std::pow(pi, -m) * std::exp(-t * t * s2) * top * fd.volume_factor;
}

}  // namespace

TEST_CASE("calibration lands on the coherent sign convention") {
    CHECK(calibration_constant() == Catch::Approx(-1.0).margin(1e-10));
    CHECK(mode_constant(NormalizationMode::calibrated, 2) == Catch::Approx(1.0).margin(1e-10));
    CHECK(mode_constant(NormalizationMode::eqU, 1) == -1.0);
    CHECK(mode_constant(NormalizationMode::eqU1, 3) == 1.0);
}

TEST_CASE("pointwise integrand on the built-ins") {
    SECTION("flat torus with zero section vanishes identically") {
        const auto ctx = make_ctx(flat_torus2(), zero_section(2), NormalizationMode::calibrated, 16);
        for (double a : {0.1, 0.5, 0.9})
            for (double b : {0.2, 0.7}) CHECK(mq_integrand(ctx, point2(a, b), 0.0) == 0.0);
    }
    SECTION("unit sphere with zero section gives the curvature density") {
        const auto ctx = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::calibrated, 16);
        for (double th : {0.4, 1.0, 2.3}) {
            const double density = mq_integrand(ctx, point2(th, 1.0), 0.0);
            CHECK(density == Catch::Approx(std::sin(th) / (2.0 * pi)).epsilon(1e-10));
        }
    }
    SECTION("large scale damps the integrand away from zeros") {
        const auto m = sphere2(1.0);
        const auto ctx =
            make_ctx(m, builtin_section("height-gradient", m), NormalizationMode::calibrated, 16);
        const Vec equator = point2(pi / 2, 0.3);
        CHECK(std::fabs(mq_integrand(ctx, equator, 40.0)) < 1e-300);
        CHECK(std::fabs(mq_integrand(ctx, equator, 1.0)) > 1e-6);
    }
}

TEST_CASE("zero-section integrand reduces to the pfaffian of the curvature form") {
    std::mt19937_64 rng(41);
    using namespace susy::pfaffian;
    for (const auto& m : {sphere2(1.0), sphere4(1.3)}) {
        const int n = m.dim;
        const int N = 2 * n;
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        for (int rep = 0; rep < 3; ++rep) {
            Vec u(n);
            for (int k = 0; k < n; ++k) {
                const auto& ax = m.axes[static_cast<std::size_t>(k)];
                u(k) = ax.lo + 0.25 + unit(rng) * (ax.length() - 0.5);
            }
            const auto fd = orthonormal_frame(m, u);
            const auto curv = curvature_form(m, u);

            // form-valued skew matrix of the prescaled curvature
            std::vector<GD> upper;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    std::vector<GD::term_type> terms;
                    for (int c = 0; c < n; ++c)
                        for (int d = c + 1; d < n; ++d) {
                            double val = 0.0;
                            for (int mu = 0; mu < n; ++mu)
                                for (int nu = 0; nu < n; ++nu)
                                    val += curv.omega(a, b, mu, nu) * fd.frame(mu, c) * fd.frame(nu, d);
                            val *= curvature_prescale(NormalizationMode::eqU);
                            if (val != 0.0) terms.emplace_back((1u << c) | (1u << d), val);
                        }
                    upper.push_back(GD::from_terms(N, std::move(terms)));
                }
            const auto w = SkewMatrix<GD>::from_upper(n, upper);
            const MultiIndex eta(N, susy::superalg::full_mask(N) & ~susy::superalg::full_mask(n));
            const auto pf = pfaffian_berezin(w, eta);
            const double top = pf.coefficient(MultiIndex(N, susy::superalg::full_mask(n)));
            const double expected = mode_constant(NormalizationMode::eqU, n / 2) *
                                    std::pow(pi, -n / 2) * top * fd.volume_factor;

            const auto ctx = make_ctx(m, zero_section(n), NormalizationMode::eqU, 16);
            CHECK(mq_integrand(ctx, u, 0.0) == Catch::Approx(expected).margin(1e-12));
        }
    }
}

TEST_CASE("integrand matches the independent closed-form sum termwise") {
    std::mt19937_64 rng(42);
    std::uniform_real_distribution<double> th(0.4, pi - 0.4), ph(0.0, 2.0 * pi);
    const auto m = sphere2(1.0);
    for (const char* section : {"height-gradient", "rotational"}) {
        const auto s = builtin_section(section, m);
        const auto ctx = make_ctx(m, s, NormalizationMode::eqU, 16);
        for (int rep = 0; rep < 6; ++rep) {
            const Vec u = point2(th(rng), ph(rng));
            for (double t : {0.0, 0.7, 1.9}) {
                const double via_pipeline = mq_integrand(ctx, u, t);
                const double via_sum = closed_form_density(m, s, u, t);
                REQUIRE(via_pipeline == Catch::Approx(via_sum).margin(1e-12));
            }
        }
    }
}

TEST_CASE("euler characteristic integrals on the built-ins") {
    SECTION("unit two-sphere") {
        const auto ctx = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::calibrated, 128);
        const auto r = euler_integral(ctx, 0.0);
        CHECK(r.chi == Catch::Approx(2.0).margin(1e-6));
        CHECK(r.convergence_estimate < 1e-6);
    }
    SECTION("round torus cancels exactly") {
        const auto ctx = make_ctx(torus2(2.0, 0.5), zero_section(2), NormalizationMode::calibrated, 64);
        CHECK(std::fabs(euler_integral(ctx, 0.0).chi) < 1e-8);
    }
    SECTION("flat torus is identically zero") {
        const auto ctx = make_ctx(flat_torus2(), zero_section(2), NormalizationMode::calibrated, 32);
        CHECK(euler_integral(ctx, 0.0).chi == 0.0);
    }
    SECTION("eqU and calibrated agree") {
        const auto a = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::eqU, 32);
        const auto b = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::calibrated, 32);
        CHECK(euler_integral(a, 0.0).chi == Catch::Approx(euler_integral(b, 0.0).chi).margin(1e-9));
    }
    SECTION("the raw reading misses the factor of two") {
        const auto ctx = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::eqU1, 64);
        CHECK(euler_integral(ctx, 0.0).chi == Catch::Approx(4.0).margin(1e-8));
    }
    SECTION("radius independence") {
        const auto ctx = make_ctx(sphere2(1.9), zero_section(2), NormalizationMode::calibrated, 64);
        CHECK(euler_integral(ctx, 0.0).chi == Catch::Approx(2.0).margin(1e-6));
    }
}

TEST_CASE("orientation handling") {
    SECTION("axis-swapped chart presents the same total") {
        // same round sphere with the chart axes listed in the opposite
        // order; the canonical frame realigns with the chart, so the
        // density and the total are presentation independent
        ChartManifold swapped;
        swapped.name = "sphere2_swapped";
        swapped.dim = 2;
        swapped.axes = {{0.0, 2.0 * pi, true}, {kPoleTrim, pi - kPoleTrim, false}};
        swapped.metric = [](const Vec& u) {
            Mat g = Mat::Zero(2, 2);
            const double s = std::sin(u(1));
            g(0, 0) = s * s;
            g(1, 1) = 1.0;
            return g;
        };
        swapped.metric_grad = [](const Vec& u) {
            std::vector<Mat> dg(2, Mat::Zero(2, 2));
            dg[1](0, 0) = 2.0 * std::sin(u(1)) * std::cos(u(1));
            return dg;
        };
        swapped.riemann = [metric = swapped.metric](const Vec& u) {
            return curvature_from_scalar(1.0, metric(u));
        };

        const auto standard =
            make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::calibrated, 48);
        const auto reordered = make_ctx(swapped, zero_section(2), NormalizationMode::calibrated, 48);
        for (double th : {0.5, 1.2, 2.8}) {
            const double a = mq_integrand(standard, point2(th, 1.0), 0.0);
            const double b = mq_integrand(reordered, point2(1.0, th), 0.0);
            CHECK(b == Catch::Approx(a).margin(1e-12));
        }
        CHECK(euler_integral(reordered, 0.0).chi ==
              Catch::Approx(euler_integral(standard, 0.0).chi).margin(1e-8));
    }
    SECTION("odd frame relabeling negates the form-valued pfaffian") {
        // an orientation-reversing frame change permutes the matrix labels
        // of the curvature form by an odd permutation; the extracted top
        // coefficient negates, so only |chi| is frame-orientation free
        using namespace susy::pfaffian;
        const auto m = sphere4(1.0);
        const int n = 4, N = 8;
        Vec u(4);
        u << 0.9, 1.3, 2.0, 0.7;
        const auto fd = orthonormal_frame(m, u);
        const auto curv = curvature_form(m, u);
        const int perm[4] = {1, 0, 2, 3};

        auto build = [&](bool relabel) {
            std::vector<GD> upper;
            for (int a = 0; a < n; ++a)
                for (int b = a + 1; b < n; ++b) {
                    const int aa = relabel ? perm[a] : a;
                    const int bb = relabel ? perm[b] : b;
                    std::vector<GD::term_type> terms;
                    for (int c = 0; c < n; ++c)
                        for (int d = c + 1; d < n; ++d) {
                            double val = 0.0;
                            for (int mu = 0; mu < n; ++mu)
                                for (int nu = 0; nu < n; ++nu)
                                    val += curv.omega(aa, bb, mu, nu) * fd.frame(mu, c) * fd.frame(nu, d);
                            if (val != 0.0) terms.emplace_back((1u << c) | (1u << d), val);
                        }
                    upper.push_back(GD::from_terms(N, std::move(terms)));
                }
            return SkewMatrix<GD>::from_upper(n, upper);
        };

        const MultiIndex eta(N, susy::superalg::full_mask(N) & ~susy::superalg::full_mask(n));
        const MultiIndex top_forms(N, susy::superalg::full_mask(n));
        const double plain = pfaffian_berezin(build(false), eta).coefficient(top_forms);
        const double flipped = pfaffian_berezin(build(true), eta).coefficient(top_forms);
        REQUIRE(plain != 0.0);
        REQUIRE(flipped == Catch::Approx(-plain).margin(1e-12));
    }
}

TEST_CASE("scale-family invariance") {
    SECTION("sphere with the height gradient section") {
        const auto m = sphere2(1.0);
        const auto ctx =
            make_ctx(m, builtin_section("height-gradient", m), NormalizationMode::calibrated, 64);
        const auto scan = thom_family_scan(ctx, {0.25, 0.5, 1.0, 2.0, 4.0});
        CHECK(scan.points.size() == 5);
        for (const auto& p : scan.points) CHECK(p.chi == Catch::Approx(2.0).margin(1e-4));
        CHECK(scan.max_pairwise_deviation < 1e-4);

        // switching the section off at t = 0 reproduces the curvature value
        const auto zero_ctx = make_ctx(m, zero_section(2), NormalizationMode::calibrated, 64);
        CHECK(euler_integral(ctx, 0.0).chi ==
              Catch::Approx(euler_integral(zero_ctx, 0.0).chi).margin(1e-12));
    }
    SECTION("flat torus with the sine section stays at zero") {
        const auto m = flat_torus2();
        const auto ctx = make_ctx(m, builtin_section("sines", m), NormalizationMode::calibrated, 48);
        const auto scan = thom_family_scan(ctx, {0.5, 1.0, 3.0});
        for (const auto& p : scan.points) CHECK(p.chi == Catch::Approx(0.0).margin(1e-8));
    }
    SECTION("input validation") {
        const auto ctx = make_ctx(flat_torus2(), zero_section(2), NormalizationMode::calibrated, 16);
        CHECK_THROWS_AS(thom_family_scan(ctx, {}), susy::ConfigError);
        CHECK_THROWS_AS(thom_family_scan(ctx, {-1.0}), susy::ConfigError);
    }
}

TEST_CASE("zero location and index assignment") {
    SECTION("height gradient on the sphere: both poles, index +1") {
        const auto m = sphere2(1.0);
        const auto ctx =
            make_ctx(m, builtin_section("height-gradient", m), NormalizationMode::calibrated, 16);
        const auto report = hopf_indices(ctx);
        REQUIRE(report.zeros.size() == 2);
        CHECK(report.total == 2);
        CHECK(report.zeros[0].index == 1);
        CHECK(report.zeros[1].index == 1);
        // clamped to the nearest interior points of the trimmed chart
        CHECK(report.zeros[0].point(0) == Catch::Approx(kPoleTrim));
        CHECK(report.zeros[1].point(0) == Catch::Approx(pi - kPoleTrim));
        CHECK(report.zeros[0].abs_det == Catch::Approx(1.0).epsilon(1e-6));
    }
    SECTION("sine section on the flat torus: four zeros, alternating signs") {
        const auto m = flat_torus2();
        const auto ctx = make_ctx(m, builtin_section("sines", m), NormalizationMode::calibrated, 16);
        const auto report = hopf_indices(ctx);
        REQUIRE(report.zeros.size() == 4);
        CHECK(report.total == 0);
        int plus = 0, minus = 0;
        for (const auto& z : report.zeros) (z.index > 0 ? plus : minus)++;
        CHECK(plus == 2);
        CHECK(minus == 2);
        // zeros at the half-period lattice
        for (const auto& z : report.zeros)
            for (int k = 0; k < 2; ++k) {
                const double frac = z.point(k);
                CHECK((std::fabs(frac) < 1e-8 || std::fabs(frac - 0.5) < 1e-8 ||
                       std::fabs(frac - 1.0) < 1e-8));
            }
    }
    SECTION("sine section on the round torus totals zero") {
        const auto m = torus2(2.0, 0.5);
        const auto ctx = make_ctx(m, builtin_section("sines", m), NormalizationMode::calibrated, 16);
        const auto report = hopf_indices(ctx);
        CHECK(report.zeros.size() == 4);
        CHECK(report.total == 0);
    }
    SECTION("identically zero section is degenerate") {
        const auto ctx = make_ctx(flat_torus2(), zero_section(2), NormalizationMode::calibrated, 16);
        CHECK_THROWS_AS(hopf_indices(ctx, 4), susy::DegenerateZeroError);
    }
}

TEST_CASE("zero totals match the integrals") {
    SECTION("sphere") {
        const auto m = sphere2(1.0);
        const auto ctx =
            make_ctx(m, builtin_section("height-gradient", m), NormalizationMode::calibrated, 128);
        const auto report = hopf_indices(ctx);
        const auto integral = euler_integral(ctx, 1.0);
        CHECK(std::fabs(static_cast<double>(report.total) - integral.chi) < 1e-6);
    }
    SECTION("flat torus") {
        const auto m = flat_torus2();
        const auto ctx = make_ctx(m, builtin_section("sines", m), NormalizationMode::calibrated, 64);
        const auto report = hopf_indices(ctx);
        const auto integral = euler_integral(ctx, 1.0);
        CHECK(std::fabs(static_cast<double>(report.total) - integral.chi) < 1e-6);
    }
    SECTION("round torus") {
        const auto m = torus2(2.0, 0.5);
        const auto ctx = make_ctx(m, builtin_section("sines", m), NormalizationMode::calibrated, 64);
        const auto report = hopf_indices(ctx);
        const auto integral = euler_integral(ctx, 1.0);
        CHECK(report.total == 0);
        CHECK(std::fabs(static_cast<double>(report.total) - integral.chi) < 1e-6);
    }
    SECTION("sections without chart zeros still reproduce the total") {
        const auto m = sphere2(1.0);
        const auto ctx =
            make_ctx(m, builtin_section("rotational", m), NormalizationMode::calibrated, 64);
        CHECK(euler_integral(ctx, 1.0).chi == Catch::Approx(2.0).margin(1e-4));
        CHECK(euler_integral(ctx, 0.25).chi == Catch::Approx(2.0).margin(1e-5));
    }
}

TEST_CASE("stalled seeds near a small residual raise a resolution warning") {
    // first component bounded away from zero by 5e-5: no true zeros, but
    // Newton stalls with a tiny residual near the sine lattice
    SectionField s;
    s.name = "near-miss";
    s.value = [](const Vec& u) {
        Vec v(2);
        const double a = std::sin(2.0 * pi * u(0));
        v << a * a + 5e-5, std::sin(2.0 * pi * u(1));
        return v;
    };
    const auto ctx = make_ctx(flat_torus2(), s, NormalizationMode::calibrated, 16);
    const auto report = hopf_indices(ctx, 16);
    CHECK(report.zeros.empty());
    REQUIRE_FALSE(report.warnings.empty());
    CHECK(report.warnings.front().find("resolution warning") != std::string::npos);
}

TEST_CASE("configuration errors") {
    auto ctx = make_ctx(sphere2(1.0), zero_section(2), NormalizationMode::calibrated, 16);
    ctx.nodes_per_axis = {4, 16};
    CHECK_THROWS_AS(euler_integral(ctx, 0.0), susy::ConfigError);
    ctx.nodes_per_axis = {16};
    CHECK_THROWS_AS(euler_integral(ctx, 0.0), susy::ConfigError);
}

TEST_CASE("non-finite sections surface as numeric errors") {
    SectionField bad;
    bad.name = "bad";
    bad.value = [](const Vec& u) {
        Vec v(2);
        v << std::sqrt(u(0) - 0.5), 0.0;  // NaN for u0 < 0.5
        return v;
    };
    bad.jacobian = [](const Vec&) { return Mat::Zero(2, 2).eval(); };
    const auto ctx = make_ctx(flat_torus2(), bad, NormalizationMode::calibrated, 8);
    CHECK_THROWS_AS(euler_integral(ctx, 1.0), susy::NumericError);
}

TEST_CASE("disk compression") {
    SECTION("fixed point and pinned values") {
        Vec zero = Vec::Zero(3);
        CHECK(disk_compress(zero).norm() == 0.0);
        Vec e(2);
        e << 1.0, 0.0;
        CHECK(disk_compress(e).norm() == Catch::Approx(1.0 / std::sqrt(2.0)));
    }
    SECTION("roundtrip within the binary64 bound") {
        std::mt19937_64 rng(43);
        std::uniform_real_distribution<double> comp(-1.0, 1.0);
        std::uniform_real_distribution<double> scl(0.0, 3.0);
        for (int rep = 0; rep < 2000; ++rep) {
            const int dim = 1 + static_cast<int>(rng() % 6);
            Vec x(dim);
            for (int i = 0; i < dim; ++i) x(i) = comp(rng);
            x *= std::pow(10.0, scl(rng));  // norms up to ~2.4e3
            const Vec y = disk_compress(x);
            REQUIRE(y.norm() < 1.0);
            const Vec back = disk_decompress(y);
            // binary64 propagation bound: the compressed point stores the
            // magnitude only to eps * (1 + |x|^2) relative accuracy
            const double tol = 2e-16 * (1.0 + x.squaredNorm()) * (1.0 + x.norm());
            REQUIRE((back - x).lpNorm<Eigen::Infinity>() <= tol);
        }
    }
    SECTION("radial monotonicity") {
        std::mt19937_64 rng(44);
        std::uniform_real_distribution<double> comp(-2.0, 2.0);
        for (int rep = 0; rep < 200; ++rep) {
            Vec x(3);
            for (int i = 0; i < 3; ++i) x(i) = comp(rng);
            if (x.norm() == 0.0) continue;
            CHECK(disk_compress(1.5 * x).norm() > disk_compress(x).norm());
        }
    }
    SECTION("points outside the ball cannot be decompressed") {
        Vec y(2);
        y << 0.8, 0.7;
        CHECK_THROWS_AS(disk_decompress(y), susy::DomainError);
    }
}
