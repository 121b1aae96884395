#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "pfscale/energy.hpp"
#include "pfscale/lifting.hpp"
#include "pfscale/reference.hpp"
#include "pfscale/samples.hpp"

using namespace pfscale;

namespace {

constexpr double pi = std::numbers::pi;

ScalarField1D f_of(double lo, double hi, int n, double (*fn)(double)) { return sample(fn, Grid1D(lo, hi, n)); }

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

DoubleWell zero_well() {
    return DoubleWell("zero", -1.0, 1.0, 1.0, [](double) { return 0.0; }, [](double) { return 0.0; });
}

std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo, double hi) {
    std::uniform_real_distribution<double> U(lo, hi);
    std::vector<double> v(n);
    for (double& x : v) x = U(rng);
    return v;
}

ScalarField2D sample2d(const Grid2D& g, double (*fn)(double, double)) {
    std::vector<double> v(g.node_count(), 0.0);
    for (int j = 0; j <= g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            if (g.masked(i, j)) v[g.index(i, j)] = fn(g.x(i), g.y(j));
        }
    }
    return ScalarField2D(g, std::move(v));
}

}  // namespace

// ---------------------------------------------------------------------------
// bending_energy

TEST(BendingEnergy, LinearIsZero) {
    EXPECT_NEAR(bending_energy(f_of(-1.0, 2.0, 16, [](double x) { return 3.0 * x - 1.0; })), 0.0, 1e-20);
}

TEST(BendingEnergy, HalfSquareIsOneOnAnyGrid) {
    for (int n : {4, 5, 8, 31, 256}) {
        EXPECT_NEAR(bending_energy(f_of(0.0, 1.0, n, [](double x) { return 0.5 * x * x; })), 1.0, 1e-9) << n;
    }
}

TEST(BendingEnergy, SineOnZeroPi) {
    const double e = bending_energy(f_of(0.0, pi, 512, [](double x) { return std::sin(x); }));
    EXPECT_LE(rel(e, pi / 2.0), 1e-4);
}

TEST(BendingEnergy, SecondOrderConvergenceForSine) {
    std::vector<double> err;
    for (int n : {64, 128, 256, 512}) {
        err.push_back(std::abs(bending_energy(f_of(0.0, pi, n, [](double x) { return std::sin(x); })) - pi / 2.0));
    }
    for (std::size_t k = 0; k + 1 < err.size(); ++k) EXPECT_GE(std::log2(err[k] / err[k + 1]), 1.7);
}

// ---------------------------------------------------------------------------
// potential_integral

TEST(PotentialIntegral, AtWellIsZero) {
    const auto w = quartic_well(-1.0, 1.0);
    EXPECT_EQ(potential_integral(f_of(0.0, 1.0, 8, [](double) { return -1.0; }), w), 0.0);
}

TEST(PotentialIntegral, IdentityUnitWells) {
    const double v = potential_integral(f_of(0.0, 1.0, 1024, [](double x) { return x; }), quartic_well(0.0, 1.0));
    EXPECT_NEAR(v, 1.0 / 30.0, 1e-6);
}

TEST(PotentialIntegral, IdentitySymmetricWells) {
    // int_0^1 (x^2 - 1)^2 dx = 8/15
    const double v = potential_integral(f_of(0.0, 1.0, 1024, [](double x) { return x; }), quartic_well(-1.0, 1.0));
    EXPECT_NEAR(v, 8.0 / 15.0, 1e-5);
}

// ---------------------------------------------------------------------------
// h12_seminorm and its full-line and derivative variants

TEST(H12Seminorm, ConstantIsZero) { EXPECT_EQ(h12_seminorm(f_of(0.0, 1.0, 32, [](double) { return 2.5; })), 0.0); }

TEST(H12Seminorm, Identity) {
    EXPECT_NEAR(h12_seminorm(f_of(0.0, 1.0, 256, [](double x) { return x; })), 1.0, 2e-2);
}

TEST(H12Seminorm, Square) {
    // |x^2 - y^2|^2 / |x - y|^2 = (x + y)^2 integrates to 7/6 over the unit square
    EXPECT_NEAR(h12_seminorm(f_of(0.0, 1.0, 256, [](double x) { return x * x; })), 7.0 / 6.0, 2e-2);
}

TEST(H12Seminorm, ShiftAndReflectionInvariant) {
    SampleSource src(5);
    const Grid1D g(-1.0, 1.0, 128);
    for (int k = 0; k < 5; ++k) {
        const auto f = src.smooth_trace(g);
        std::vector<double> shifted(f.size()), reflected(f.size());
        for (std::size_t i = 0; i < f.size(); ++i) {
            shifted[i] = f[i] + 3.25;
            reflected[i] = f[f.size() - 1 - i];
        }
        const double base = h12_seminorm(f);
        EXPECT_NEAR(h12_seminorm(ScalarField1D(g, shifted)), base, 1e-13 * base);
        EXPECT_NEAR(h12_seminorm(ScalarField1D(g, reflected)), base, 1e-13 * base);
    }
}

TEST(H12SeminormFullLine, ConstantIsZero) {
    EXPECT_EQ(h12_seminorm_fullline(f_of(0.0, 1.0, 32, [](double) { return -1.0; })), 0.0);
}

TEST(H12SeminormFullLine, AtLeastBoundedValue) {
    // bump with equal end values
    const auto g = f_of(0.0, 3.0, 96, [](double x) { return x > 1.0 && x < 2.0 ? std::pow(std::sin(pi * (x - 1.0)), 4) : 0.0; });
    EXPECT_GE(h12_seminorm_fullline(g), h12_seminorm(g));
}

TEST(H12SeminormFullLine, RejectsUnequalEnds) {
    EXPECT_THROW(h12_seminorm_fullline(f_of(0.0, 1.0, 32, [](double x) { return x; })), InvalidArgument);
}

TEST(DerivativeSeminorm, QuadraticGivesFour) {
    // (x^2)' = 2x; |2x - 2y|^2 / |x - y|^2 = 4
    EXPECT_NEAR(derivative_seminorm(f_of(0.0, 1.0, 256, [](double x) { return x * x; })), 4.0, 1e-9);
}

TEST(DerivativeSeminormFullLine, MiddleThirdSupportExceedsBounded) {
    const auto g = f_of(0.0, 3.0, 96, [](double x) {
        const double t = std::clamp(x - 1.0, 0.0, 1.0);
        return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    });
    const double bounded = derivative_seminorm(g);
    const double full = derivative_seminorm_fullline(g);
    EXPECT_GT(full, bounded);
    const auto s = g.values();
    EXPECT_NEAR(full - bounded, slope_tails(s, g.grid().h(), {}), 1e-12 * full);
}

TEST(DerivativeSeminormFullLine, TanhStepMatchesWideDomain) {
    auto step = [](double x) { return 0.5 * (1.0 + std::tanh(5.0 * std::clamp(x, -3.0, 3.0))); };
    const auto narrow = sample(step, Grid1D(-3.0, 3.0, 512));
    const auto wide = sample(step, Grid1D(-12.0, 12.0, 2048));
    const double a = derivative_seminorm_fullline(narrow);
    const double b = derivative_seminorm_fullline(wide);
    EXPECT_GT(a, derivative_seminorm(narrow));
    EXPECT_LE(rel(a, b), 1e-3);
}

TEST(DerivativeSeminormFullLine, RejectsSteepEnds) {
    EXPECT_THROW(derivative_seminorm_fullline(f_of(0.0, 1.0, 32, [](double x) { return x; })), InvalidArgument);
}

TEST(DerivativeSeminorm, ScalesWithSquaredDilation) {
    auto f = [](double x) { return std::tanh(2.0 * x) + 0.3 * std::sin(x); };
    const double base = derivative_seminorm(sample(f, Grid1D(-2.0, 2.0, 256)));
    for (double S : {2.0, 4.0}) {
        const auto fs = sample([&](double x) { return f(S * x); }, Grid1D(-2.0 / S, 2.0 / S, 256));
        EXPECT_LE(rel(derivative_seminorm(fs), S * S * base), 1e-3) << S;
    }
}

// ---------------------------------------------------------------------------
// h32_seminorm

TEST(H32Seminorm, LinearIsZero) {
    EXPECT_NEAR(h32_seminorm(f_of(0.0, 1.0, 64, [](double x) { return 2.0 - x; })), 0.0, 1e-20);
}

TEST(H32Seminorm, Square) {
    EXPECT_NEAR(h32_seminorm(f_of(0.0, 1.0, 256, [](double x) { return x * x; })), 0.25, 2e-2);
}

TEST(H32Seminorm, OddCellCountRejected) {
    EXPECT_THROW(h32_seminorm(f_of(0.0, 1.0, 33, [](double x) { return x; })), InvalidArgument);
}

TEST(H32Seminorm, BoundedByDerivativeSeminorm) {
    SampleSource src(11);
    const Grid1D g(0.0, 1.0, 256);
    for (int k = 0; k < 50; ++k) {
        const auto u = src.smooth_trace(g);
        EXPECT_LE(h32_seminorm(u), derivative_seminorm(u) / 8.0 + 5e-2) << k;
    }
}

// ---------------------------------------------------------------------------
// Second-order self-convergence of the energies without closed forms.

TEST(SelfConvergence, SlopeAtLeastOnePointSeven) {
    auto f = [](double x) { return std::exp(std::sin(2.0 * x)); };
    const auto w = quartic_well(-1.0, 1.0);
    using Fn = double (*)(const ScalarField1D&, const DoubleWell&);
    const std::vector<std::pair<const char*, Fn>> energies{
        {"bending", [](const ScalarField1D& u, const DoubleWell&) { return bending_energy(u); }},
        {"potential", [](const ScalarField1D& u, const DoubleWell& W) { return potential_integral(u, W); }},
        {"h12", [](const ScalarField1D& u, const DoubleWell&) { return h12_seminorm(u); }},
        {"derivative", [](const ScalarField1D& u, const DoubleWell&) { return derivative_seminorm(u); }},
        {"h32", [](const ScalarField1D& u, const DoubleWell&) { return h32_seminorm(u); }},
    };
    for (const auto& [name, fn] : energies) {
        std::vector<double> v;
        for (int n : {64, 128, 256, 512}) v.push_back(fn(sample(f, Grid1D(0.0, 1.0, n)), w));
        const double d1 = std::abs(v[1] - v[0]);
        const double d2 = std::abs(v[2] - v[1]);
        const double d3 = std::abs(v[3] - v[2]);
        EXPECT_GE(std::log2(d1 / d2), 1.7) << name;
        EXPECT_GE(std::log2(d2 / d3), 1.7) << name;
    }
}

// ---------------------------------------------------------------------------
// hessian_energy_2d

TEST(HessianEnergy2D, AffineIsZero) {
    for (const Grid2D& g : {make_rectangle_grid(0.0, 0.0, 2.0, 1.0, 16), make_triangle_grid(1.0, 32),
                            make_diamond_grid(1.0, 32)}) {
        EXPECT_NEAR(hessian_energy_2d(sample2d(g, [](double x, double y) { return 1.0 + 2.0 * x - y; })), 0.0,
                    1e-18);
    }
}

TEST(HessianEnergy2D, ParaboloidOnRectangle) {
    const Grid2D g = make_rectangle_grid(0.0, 0.0, 2.0, 1.0, 32);
    EXPECT_NEAR(hessian_energy_2d(sample2d(g, [](double x, double y) { return x * x + y * y; })), 16.0, 1e-6);
}

TEST(HessianEnergy2D, AveragingExtensionSelfConvergence) {
    double v[2];
    int k = 0;
    for (int n : {256, 512}) {
        const Grid1D tg(0.0, 1.0, n);
        v[k++] = hessian_energy_2d(average_extension(smoothstep_trace(tg), make_triangle_grid(1.0, n)));
    }
    EXPECT_LE(rel(v[0], v[1]), 1e-2);
}

// ---------------------------------------------------------------------------
// Assembled functionals

TEST(FEps, ConstantWellIsZero) {
    const auto b = f_eps(f_of(0.0, 1.0, 16, [](double) { return -1.0; }), quartic_well(-1.0, 1.0), 0.3);
    EXPECT_EQ(b.total, 0.0);
}

TEST(FEps, Identity) {
    const auto b = f_eps(f_of(0.0, 1.0, 1024, [](double x) { return x; }), quartic_well(-1.0, 1.0), 1.0);
    EXPECT_NEAR(b.bending, 0.0, 1e-18);
    EXPECT_NEAR(b.potential, 8.0 / 15.0, 1e-5);
    EXPECT_DOUBLE_EQ(b.total, b.bending + b.potential);
}

TEST(FEps, ScalesTerms) {
    const auto f = f_of(-1.0, 1.0, 64, [](double x) { return std::tanh(3.0 * x); });
    const auto w = quartic_well(-1.0, 1.0);
    const double eps = 0.2;
    const auto b = f_eps(f, w, eps);
    EXPECT_NEAR(b.bending, eps * eps * eps * bending_energy(f), 1e-14);
    EXPECT_NEAR(b.potential, potential_integral(f, w) / eps, 1e-12);
}

TEST(GEps, ConstantWellIsZero) {
    const auto b = g_eps(f_of(0.0, 1.0, 16, [](double) { return 0.0; }), quartic_well(0.0, 1.0), EpsLambda(0.1, 5.0));
    EXPECT_EQ(b.total, 0.0);
}

TEST(GEps, Identity) {
    const auto b = g_eps(f_of(0.0, 1.0, 1024, [](double x) { return x; }), quartic_well(0.0, 1.0), EpsLambda(1.0, 1.0));
    EXPECT_NEAR(b.fractional, 0.0, 1e-18);
    EXPECT_NEAR(b.boundary_potential, 1.0 / 30.0, 1e-6);
    EXPECT_EQ(b.bending, 0.0);
    EXPECT_EQ(b.potential, 0.0);
}

TEST(EpsLambda, CriticalCoupling) {
    const auto el = EpsLambda::critical(0.01, 2.0);
    EXPECT_NEAR(el.lambda(), std::pow(200.0, 1.5), 1e-9);
    EXPECT_NEAR(el.L(), 2.0, 1e-12);
    EXPECT_NEAR(el.rho(), 0.01 * std::pow(el.lambda(), -1.0 / 3.0), 1e-15);
    EXPECT_THROW(EpsLambda(0.0, 1.0), InvalidArgument);
    EXPECT_THROW(EpsLambda(1.0, -1.0), InvalidArgument);
}

TEST(FullEnergy2D, ConstantAtSharedWellIsZero) {
    const Grid2D g = make_rectangle_grid(0.0, 0.0, 2.0, 1.0, 16);
    const auto u = sample2d(g, [](double, double) { return -1.0; });
    const auto b = full_energy_2d(u, quartic_well(-1.0, 1.0), quartic_well(-1.0, 1.0), EpsLambda(0.1, 10.0), Edge::Bottom);
    EXPECT_EQ(b.total, 0.0);
}

TEST(FullEnergy2D, ConstantOffBoundaryWell) {
    const Grid2D g = make_rectangle_grid(0.0, 0.0, 2.0, 1.0, 16);
    const auto u = sample2d(g, [](double, double) { return -1.0; });
    const auto V = quartic_well(0.0, 1.0);
    const double lambda = 7.0;
    const auto b = full_energy_2d(u, quartic_well(-1.0, 1.0), V, EpsLambda(0.1, lambda), Edge::Bottom);
    EXPECT_NEAR(b.boundary_potential, lambda * V(-1.0) * 2.0, 1e-12);
    EXPECT_EQ(b.bending, 0.0);
    EXPECT_EQ(b.potential, 0.0);
}

TEST(FullEnergy2D, RejectsNonRectangle) {
    const Grid2D g = make_triangle_grid(1.0, 16);
    const ScalarField2D u(g, std::vector<double>(g.node_count(), 0.0));
    EXPECT_THROW(full_energy_2d(u, quartic_well(-1.0, 1.0), quartic_well(-1.0, 1.0), EpsLambda(0.1, 1.0), Edge::Bottom),
                 InvalidArgument);
}

TEST(Breakdown, TermsNonnegative) {
    std::mt19937_64 rng(1);
    const Grid1D g(-1.0, 1.0, 40);
    const auto W = quartic_well(-1.0, 1.0);
    for (int k = 0; k < 20; ++k) {
        const ScalarField1D f(g, random_vector(rng, g.nodes(), -2.0, 2.0));
        for (const auto& b : {f_eps(f, W, 0.3), g_eps(f, W, EpsLambda(0.3, 2.0))}) {
            EXPECT_GE(b.bending, 0.0);
            EXPECT_GE(b.potential, 0.0);
            EXPECT_GE(b.fractional, 0.0);
            EXPECT_GE(b.boundary_potential, 0.0);
            EXPECT_NEAR(b.total, b.bending + b.potential + b.fractional + b.boundary_potential, 1e-12 * b.total);
        }
    }
}

// ---------------------------------------------------------------------------
// Oracle equivalence with the serial reference at n <= 64.

class OracleEquivalence : public ::testing::TestWithParam<int> {};

TEST_P(OracleEquivalence, OneDimensional) {
    const int n = GetParam();
    std::mt19937_64 rng(100 + n);
    const Grid1D g(-1.5, 2.0, n);
    const auto W = quartic_well(-1.0, 1.0, 1.3);
    const auto V = quartic_well(0.0, 1.0, 0.7);
    for (int k = 0; k < 5; ++k) {
        auto v = random_vector(rng, g.nodes(), -1.5, 1.5);
        const ScalarField1D f(g, v);
        EXPECT_LE(rel(bending_energy(f), reference::bending_energy(f)), 1e-8);
        EXPECT_LE(rel(potential_integral(f, W), reference::potential_integral(f, W)), 1e-8);
        EXPECT_LE(rel(h12_seminorm(f), reference::h12_seminorm(f)), 1e-8);
        EXPECT_LE(rel(derivative_seminorm(f), reference::derivative_seminorm(f)), 1e-8);
        if (n % 2 == 0) EXPECT_LE(rel(h32_seminorm(f), reference::h32_seminorm(f)), 1e-8);

        const auto fe = f_eps(f, W, 0.37);
        const auto fr = reference::f_eps(f, W, 0.37);
        EXPECT_LE(rel(fe.total, fr.total), 1e-8);
        const EpsLambda el(0.21, 13.0);
        const auto ge = g_eps(f, V, el);
        const auto gr = reference::g_eps(f, V, el);
        EXPECT_LE(rel(ge.fractional, gr.fractional), 1e-8);
        EXPECT_LE(rel(ge.boundary_potential, gr.boundary_potential), 1e-8);

        // equal end values for the full-line seminorm of g
        v.back() = v.front();
        const ScalarField1D fl(g, v);
        EXPECT_LE(rel(h12_seminorm_fullline(fl), reference::h12_seminorm_fullline(fl)), 1e-8);

        // flat ends for the full-line seminorm of g'
        std::vector<double> flat(g.nodes());
        for (std::size_t i = 0; i < flat.size(); ++i) {
            const double t = static_cast<double>(i) / n;
            flat[i] = t * t * (3.0 - 2.0 * t) + 0.05 * std::pow(std::sin(pi * t), 2) * v[i];
        }
        flat[1] = flat[0];
        flat[flat.size() - 2] = flat.back();
        const ScalarField1D ff(g, flat);
        EXPECT_LE(rel(derivative_seminorm_fullline(ff), reference::derivative_seminorm_fullline(ff)), 1e-8);
    }
}

TEST_P(OracleEquivalence, TwoDimensional) {
    const int n = GetParam() - GetParam() % 2;
    std::mt19937_64 rng(200 + n);
    const auto W = quartic_well(-1.0, 1.0);
    const auto V = quartic_well(-0.5, 1.0);
    for (const Grid2D& g : {make_rectangle_grid(0.0, 0.0, 1.0, 0.5, n), make_triangle_grid(1.0, n),
                            make_diamond_grid(1.0, n)}) {
        auto v = random_vector(rng, g.node_count(), -1.0, 1.0);
        for (std::size_t k = 0; k < v.size(); ++k) {
            if (!g.masked(k)) v[k] = 0.0;
        }
        const ScalarField2D u(g, v);
        EXPECT_LE(rel(hessian_energy_2d(u), reference::hessian_energy_2d(u)), 1e-8);
        if (g.shape() == DomainShape::Rectangle) {
            const EpsLambda el(0.2, 9.0);
            for (Edge e : {Edge::Bottom, Edge::Left}) {
                const auto a = full_energy_2d(u, W, V, el, e);
                const auto b = reference::full_energy_2d(u, W, V, el, e);
                EXPECT_LE(rel(a.bending, b.bending), 1e-8);
                EXPECT_LE(rel(a.potential, b.potential), 1e-8);
                EXPECT_LE(rel(a.boundary_potential, b.boundary_potential), 1e-8);
            }
        }
    }
}

INSTANTIATE_TEST_SUITE_P(SmallGrids, OracleEquivalence, ::testing::Values(8, 13, 32, 64));

// ---------------------------------------------------------------------------
// Exact gradients of the minimizer-facing energies.

namespace {

void expect_gradient_matches(const Objective& e, const std::vector<double>& x, std::mt19937_64& rng) {
    std::vector<double> g(x.size());
    const double E = e.evaluate(x, g);
    const double delta = 1e-6;
    for (int k = 0; k < 20; ++k) {
        const auto phi = random_vector(rng, x.size(), -1.0, 1.0);
        std::vector<double> xp(x), xm(x);
        double an = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            xp[i] += delta * phi[i];
            xm[i] -= delta * phi[i];
            an += g[i] * phi[i];
        }
        const double fd = (e.evaluate(xp, {}) - e.evaluate(xm, {})) / (2.0 * delta);
        EXPECT_NEAR(fd, an, 1e-6 * std::max(std::abs(an), 1e-3 * std::abs(E))) << k;
    }
}

}  // namespace

TEST(Gradient, BulkProfileEnergy) {
    std::mt19937_64 rng(7);
    const BulkProfileEnergy e(Grid1D(-2.0, 2.0, 48), quartic_well(-1.0, 1.0), 0.3, 2.0);
    expect_gradient_matches(e, random_vector(rng, e.size(), -1.2, 1.2), rng);
}

TEST(Gradient, BoundaryProfileEnergyBounded) {
    std::mt19937_64 rng(8);
    const BoundaryProfileEnergy e(Grid1D(-2.0, 2.0, 48), quartic_well(0.0, 1.0), 0.125, 3.0,
                                  FractionalDomain::Bounded);
    expect_gradient_matches(e, random_vector(rng, e.size(), -0.2, 1.2), rng);
}

TEST(Gradient, BoundaryProfileEnergyFullLine) {
    std::mt19937_64 rng(9);
    const BoundaryProfileEnergy e(Grid1D(-2.0, 2.0, 48), quartic_well(0.0, 1.0), 0.4375, 1.0,
                                  FractionalDomain::FullLine);
    expect_gradient_matches(e, random_vector(rng, e.size(), -0.2, 1.2), rng);
}

TEST(Gradient, FullEnergy2D) {
    std::mt19937_64 rng(10);
    const FullEnergy2D e(make_rectangle_grid(0.0, 0.0, 1.0, 0.5, 16), quartic_well(-1.0, 1.0),
                         quartic_well(-1.0, 1.0), EpsLambda(0.2, 5.0), Edge::Bottom);
    expect_gradient_matches(e, random_vector(rng, e.size(), -1.2, 1.2), rng);
}

TEST(Gradient, VanishesAtConstantWell) {
    const BulkProfileEnergy bulk(Grid1D(0.0, 1.0, 16), quartic_well(-1.0, 1.0), 1.0, 1.0);
    std::vector<double> x(bulk.size(), 1.0), g(bulk.size());
    bulk.evaluate(x, g);
    for (double v : g) EXPECT_EQ(v, 0.0);
    const BoundaryProfileEnergy bdy(Grid1D(0.0, 1.0, 16), quartic_well(-1.0, 1.0), 0.125, 1.0,
                                    FractionalDomain::FullLine);
    bdy.evaluate(x, g);
    for (double v : g) EXPECT_EQ(v, 0.0);
}

TEST(HessianModel, ExactForQuadraticEnergies) {
    std::mt19937_64 rng(12);
    const Grid1D grid(-1.0, 1.0, 24);
    const BulkProfileEnergy bulk(grid, zero_well(), 0.7, 1.0);
    const BoundaryProfileEnergy bdy(grid, zero_well(), 0.4375, 1.0, FractionalDomain::FullLine);
    for (const Objective* e : {static_cast<const Objective*>(&bulk), static_cast<const Objective*>(&bdy)}) {
        const auto model = e->hessian_model();
        ASSERT_TRUE(model.has_value());
        const auto x = random_vector(rng, e->size(), -1.0, 1.0);
        const auto v = random_vector(rng, e->size(), -1.0, 1.0);
        std::vector<double> xv(x), g0(x.size()), g1(x.size());
        for (std::size_t i = 0; i < x.size(); ++i) xv[i] += v[i];
        e->evaluate(x, g0);
        e->evaluate(xv, g1);
        const Eigen::Map<const Eigen::VectorXd> vv(v.data(), static_cast<Eigen::Index>(v.size()));
        const Eigen::VectorXd hv = model->is_dense() ? Eigen::VectorXd(model->dense * vv)
                                                     : Eigen::VectorXd(model->sparse * vv);
        for (std::size_t i = 0; i < x.size(); ++i) {
            EXPECT_NEAR(hv[static_cast<Eigen::Index>(i)], g1[i] - g0[i], 1e-8 * (1.0 + std::abs(hv[i])));
        }
    }
}

TEST(GEps, RescaledProfileGivesLTimesEnergy) {
    // v(x) = f(x / rho) on (-rho R, rho R) with rho = eps lambda^{-1/3}
    const auto V = quartic_well(-1.0, 1.0);
    const auto f = f_of(-3.0, 3.0, 256, [](double x) { return std::tanh(x); });
    const auto el = EpsLambda::critical(1e-2, 1.0);
    const double rho = el.rho();
    const ScalarField1D v(Grid1D(-3.0 * rho, 3.0 * rho, 256), std::vector<double>(f.values().begin(), f.values().end()));
    const double unit = derivative_seminorm(f) / 8.0 + potential_integral(f, V);
    EXPECT_LE(rel(g_eps(v, V, el).total, el.L() * unit), 1e-10);
}
