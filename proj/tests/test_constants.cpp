#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "pfscale/constants.hpp"

using namespace pfscale;

namespace {

EstimateOptions raw() {
    EstimateOptions o;
    o.extrapolate = false;
    return o;
}

double rel(double a, double b) { return std::abs(a - b) / std::abs(b); }

double bulk_energy(const ScalarField1D& f, const DoubleWell& W) {
    return bending_energy(f) + potential_integral(f, W);
}

// Golden-section search on a unimodal function.
double golden_min(const std::function<double(double)>& fn, double a, double b) {
    const double r = (std::sqrt(5.0) - 1.0) / 2.0;
    double c = b - r * (b - a), d = a + r * (b - a);
    double fc = fn(c), fd = fn(d);
    for (int k = 0; k < 200 && b - a > 1e-14 * (1.0 + std::abs(a)); ++k) {
        if (fc < fd) {
            b = d;
            d = c;
            fd = fc;
            c = b - r * (b - a);
            fc = fn(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + r * (b - a);
            fd = fn(d);
        }
    }
    return fn(0.5 * (a + b));
}

DoubleWell duplicated_well(double a) {
    return DoubleWell("duplicated", a, a, 1.0, [a](double t) { return std::pow(t - a, 4); },
                      [a](double t) { return 4.0 * std::pow(t - a, 3); });
}

DoubleWell zero_well() {
    return DoubleWell("zero", -1.0, 1.0, 1.0, [](double) { return 0.0; }, [](double) { return 0.0; });
}

}  // namespace

TEST(ConstantKind, RoundTrip) {
    for (auto k : {ConstantKind::M, ConstantKind::Sigma, ConstantKind::CUnder, ConstantKind::COver,
                   ConstantKind::CDelta}) {
        EXPECT_EQ(parse_constant_kind(to_string(k)), k);
    }
    EXPECT_THROW(parse_constant_kind("zeta"), InvalidArgument);
}

// ---------------------------------------------------------------------------
// m

TEST(ComputeM, RefinementOracle) {
    const auto W = quartic_well(-1.0, 1.0);
    const auto a = compute_m(W, 5.0, 512, raw());
    const auto b = compute_m(W, 8.0, 1024, raw());
    ASSERT_TRUE(a.converged);
    ASSERT_TRUE(b.converged);
    EXPECT_LE(rel(a.value, b.value), 1e-2);
}

TEST(ComputeM, NestedInR) {
    const auto W = quartic_well(-1.0, 1.0);
    // same spacing on both intervals
    const auto r4 = compute_m(W, 4.0, 256, raw());
    const auto r6 = compute_m(W, 6.0, 384, raw());
    EXPECT_LE(r6.value, r4.value + 1e-9);
}

TEST(ComputeM, ZeroPotentialRelaxesToZero) {
    // With W = 0 only the bending cost of the a -> b transition remains: the
    // cubic between the pinned pairs costs 12 (b - a)^2 / (2R - 2h)^3.
    const auto W = zero_well();
    double prev = INFINITY;
    for (double R : {2.0, 4.0, 8.0}) {
        const int n = static_cast<int>(32 * R);
        const double len = 2.0 * R - 4.0 * R / n;
        const auto e = compute_m(W, R, n, raw());
        EXPECT_LT(e.value, prev);
        EXPECT_LE(rel(e.value, 12.0 * 4.0 / std::pow(len, 3)), 0.05) << R;
        prev = e.value;
    }
    EXPECT_LT(prev, 0.025);
}

TEST(ComputeM, ValueIsReEvaluatedEnergy) {
    const auto W = quartic_well(-1.0, 1.0);
    const auto e = compute_m(W, 4.0, 128);
    EXPECT_NEAR(e.value, bulk_energy(e.profile, W), 1e-12);
    EXPECT_GE(e.value, 0.0);
    EXPECT_NE(e.extrapolated, e.value);
    EXPECT_EQ(e.profile[0], -1.0);
    EXPECT_EQ(e.profile[1], -1.0);
    EXPECT_EQ(e.profile[127], 1.0);
    EXPECT_EQ(e.profile[128], 1.0);
}

TEST(ComputeM, ReflectionSymmetry) {
    const auto W = quartic_well(-1.0, 1.0);
    const auto e = compute_m(W, 4.0, 128, raw());
    const auto v = e.profile.values();
    std::vector<double> r(v.size());
    for (std::size_t i = 0; i < v.size(); ++i) r[i] = -v[v.size() - 1 - i];
    const ScalarField1D refl(e.profile.grid(), r);
    EXPECT_NEAR(bulk_energy(refl, W), bulk_energy(e.profile, W), 1e-12);
}

TEST(ComputeM, Rejections) {
    const auto W = quartic_well(-1.0, 1.0);
    EXPECT_THROW(compute_m(W, 0.0, 64), InvalidArgument);
    EXPECT_THROW(compute_m(W, 1.0, 4), InvalidArgument);
}

// ---------------------------------------------------------------------------
// sigma

TEST(ComputeSigma, WellToSameWellIsZero) {
    const auto W = quartic_well(-1.0, 1.0);
    EXPECT_EQ(compute_sigma(W, 1.0, 1.0, 4.0, 64, raw()).value, 0.0);
}

TEST(ComputeSigma, CrossingIsPositive) {
    const auto W = quartic_well(-1.0, 1.0);
    const auto s = compute_sigma(W, -1.0, 1.0, 5.0, 256, raw());
    EXPECT_TRUE(s.converged);
    EXPECT_GT(s.value, 0.1);
    EXPECT_EQ(s.profile[0], 1.0);
}

TEST(ComputeSigma, StableInR) {
    const auto W = quartic_well(-1.0, 1.0);
    const auto a = compute_sigma(W, -1.0, 0.0, 5.0, 256, raw());
    const auto b = compute_sigma(W, -1.0, 0.0, 8.0, 410, raw());
    EXPECT_LE(rel(a.value, b.value), 1e-2);
    EXPECT_LE(b.value, a.value + 1e-6);
}

// ---------------------------------------------------------------------------
// c_under, c_over, c_delta

TEST(ComputeCUnder, DuplicatedWellIsZero) {
    EXPECT_EQ(compute_c_under(duplicated_well(0.5), 3.0, 64, raw()).value, 0.0);
    EXPECT_EQ(compute_c_over(duplicated_well(0.5), 3.0, 64, raw()).value, 0.0);
}

TEST(ComputeCUnder, PositiveAndStableInN) {
    const auto V = quartic_well(0.0, 1.0);
    const auto a = compute_c_under(V, 3.0, 256, raw());
    const auto b = compute_c_under(V, 3.0, 512, raw());
    ASSERT_TRUE(a.converged);
    EXPECT_GT(a.value, 0.0);
    EXPECT_LE(rel(a.value, b.value), 2e-2);
    EXPECT_NEAR(a.value, derivative_seminorm(a.profile) / 8.0 + potential_integral(a.profile, V), 1e-12);
}

TEST(ComputeCOver, DominatesCUnder) {
    for (const auto& V : {quartic_well(0.0, 1.0), quartic_well(-1.0, 1.0), quartic_well(0.0, 1.0, 3.0)}) {
        const auto lo = compute_c_under(V, 3.0, 128, raw());
        const auto hi = compute_c_over(V, 3.0, 128, raw());
        EXPECT_LE(lo.value, hi.value + 1e-9);
        EXPECT_GT(lo.value, 0.0);
    }
}

TEST(ComputeCOver, StableInR) {
    const auto V = quartic_well(0.0, 1.0);
    const auto a = compute_c_over(V, 5.0, 256, raw());
    const auto b = compute_c_over(V, 8.0, 410, raw());
    ASSERT_TRUE(a.converged);
    ASSERT_TRUE(b.converged);
    EXPECT_LE(rel(a.value, b.value), 2e-2);
    EXPECT_NEAR(a.value,
                7.0 / 16.0 * derivative_seminorm_fullline(a.profile) + potential_integral(a.profile, V), 1e-12);
}

TEST(ComputeCDelta, SmallDeltaRecoversCUnder) {
    const auto V = quartic_well(0.0, 1.0);
    const auto u = compute_c_under(V, 3.0, 256, raw());
    const auto d = compute_c_delta(V, 1e-3, 3.0, 256, raw());
    EXPECT_LE(rel(d.value, u.value), 2e-2);
    ASSERT_TRUE(d.range_ok.has_value());
}

TEST(ComputeCDelta, PositiveNearMidpoint) {
    const auto V = quartic_well(0.0, 1.0);
    const auto d = compute_c_delta(V, 0.49, 3.0, 128, raw());
    EXPECT_GT(d.value, 0.0);
    EXPECT_TRUE(d.range_ok.has_value());
}

TEST(ComputeCDelta, NonIncreasingInDelta) {
    const auto V = quartic_well(0.0, 1.0);
    double prev = INFINITY;
    for (double delta : {0.05, 0.1, 0.2}) {
        const double v = compute_c_delta(V, delta, 3.0, 256, raw()).value;
        EXPECT_LE(v, prev + 1e-6) << delta;
        prev = v;
    }
}

TEST(ComputeCDelta, RejectsDeltaOutOfRange) {
    const auto V = quartic_well(0.0, 1.0);
    EXPECT_THROW(compute_c_delta(V, 0.0, 3.0, 64), InvalidArgument);
    EXPECT_THROW(compute_c_delta(V, 0.5, 3.0, 64), InvalidArgument);
}

// ---------------------------------------------------------------------------
// Closed-form scale reduction

TEST(ScaleOptimalValue, PublishedConstants) {
    EXPECT_NEAR(scale_optimal_value(1.0, 1.0, 1.0 / 8.0).value, 3.0 / std::pow(2.0, 5.0 / 3.0), 1e-9);
    EXPECT_NEAR(scale_optimal_value(1.0, 1.0, 1.0 / 8.0).value, 0.944941, 1e-6);
    EXPECT_NEAR(scale_optimal_value(1.0, 1.0, 7.0 / 16.0).value, 3.0 * std::cbrt(7.0) / 4.0, 1e-9);
    EXPECT_NEAR(scale_optimal_value(1.0, 1.0, 7.0 / 16.0).value, 1.434698, 1e-6);
}

TEST(ScaleOptimalValue, MatchesGoldenSection) {
    std::mt19937_64 rng(3);
    std::uniform_real_distribution<double> U(0.05, 5.0);
    for (int k = 0; k < 50; ++k) {
        const double A = U(rng), B = U(rng), kappa = U(rng) / 5.0;
        const auto s = scale_optimal_value(A, B, kappa);
        auto fn = [&](double S) { return kappa * A / (S * S) + S * B; };
        EXPECT_NEAR(golden_min(fn, 1e-3, 50.0), s.value, 1e-9 * s.value);
        EXPECT_NEAR(fn(s.S_star), s.value, 1e-12 * s.value);
    }
}

TEST(ScaleOptimalValue, CubeRootHomogeneity) {
    const auto a = scale_optimal_value(1.7, 0.3, 0.2);
    const auto b = scale_optimal_value(8.0 * 1.7, 0.3, 0.2);
    EXPECT_NEAR(b.value, 2.0 * a.value, 1e-12);
    EXPECT_THROW(scale_optimal_value(0.0, 1.0, 1.0), InvalidArgument);
    EXPECT_THROW(scale_optimal_value(1.0, -1.0, 1.0), InvalidArgument);
    EXPECT_THROW(scale_optimal_value(1.0, 1.0, 0.0), InvalidArgument);
}

TEST(Characterize, MatchesDirectEstimates) {
    const auto V = quartic_well(0.0, 1.0);
    const auto sel = select_R_scale([&](double R) { return compute_c_under(V, R, 256, raw()); }, V,
                                    1.0 / 8.0, 3.0);
    ASSERT_TRUE(sel.settled);
    const auto& u = sel.estimate;
    EXPECT_LE(rel(characterize(u, V, 1.0 / 8.0), u.value), 3e-2);
    const auto o = compute_c_over(V, 8.0, 512, raw());
    EXPECT_LE(rel(characterize(o, V, 7.0 / 16.0), o.value), 3e-2);
}

TEST(Characterize, LowerBoundsUnscaledEnergy) {
    const auto V = quartic_well(0.0, 1.0);
    for (double width : {0.3, 1.0, 2.5}) {
        ConstantEstimate e;
        e.kind = ConstantKind::CUnder;
        e.profile = sample([&](double x) { return 0.5 * (1.0 + std::tanh(x / width)); }, Grid1D(-4.0, 4.0, 256));
        const double direct = derivative_seminorm(e.profile) / 8.0 + potential_integral(e.profile, V);
        EXPECT_LE(characterize(e, V, 1.0 / 8.0), direct + 1e-9) << width;
    }
}

// ---------------------------------------------------------------------------
// R selection

TEST(SelectR, DoublingSettles) {
    int calls = 0;
    auto solve_at = [&](double R) {
        ++calls;
        ConstantEstimate e;
        e.value = 1.0 + 1.0 / (R * R * R);
        e.R = R;
        return e;
    };
    const auto s = select_R_doubling(solve_at, 1.0, 5e-3, 6);
    EXPECT_TRUE(s.settled);
    // |1/8^3 - 1/16^3| is the first change below 5e-3
    EXPECT_EQ(s.R_history, (std::vector<double>{1.0, 2.0, 4.0, 8.0, 16.0}));
    EXPECT_EQ(calls, 5);
    EXPECT_EQ(s.estimate.R, 16.0);
}

TEST(SelectR, ScaleIterationSettlesForCUnder) {
    const auto V = quartic_well(0.0, 1.0);
    auto solve_at = [&](double R) { return compute_c_under(V, R, 128, raw()); };
    const auto s = select_R_scale(solve_at, V, 1.0 / 8.0, 2.0, 2e-2, 10);
    EXPECT_TRUE(s.settled);
    EXPECT_GT(s.estimate.value, 0.0);
    EXPECT_EQ(s.R_history.size(), s.value_history.size());
}

// ---------------------------------------------------------------------------
// Cubic matching

TEST(CubicMatch, ConstantWhenAlreadyAtWell) {
    for (Side side : {Side::Left, Side::Right}) {
        const Cubic p = cubic_match(side, 0.25, 0.25, 0.0, 3.0);
        for (double x : {2.0, 2.3, 2.9, 3.0, 3.5, 4.0}) EXPECT_EQ(p(x), 0.25);
    }
}

TEST(CubicMatch, EndpointConditions) {
    std::mt19937_64 rng(4);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    for (int k = 0; k < 100; ++k) {
        const double well = U(rng), w = U(rng), z = U(rng), c = 3.0 * U(rng);
        const Cubic l = cubic_match(Side::Left, well, w, z, c);
        EXPECT_NEAR(l(c - 1.0), well, 1e-14);
        EXPECT_NEAR(l.deriv(c - 1.0), 0.0, 1e-14);
        EXPECT_NEAR(l(c), w, 1e-14);
        EXPECT_NEAR(l.deriv(c), z, 1e-14);
        const Cubic r = cubic_match(Side::Right, well, w, z, c);
        EXPECT_NEAR(r(c + 1.0), well, 1e-14);
        EXPECT_NEAR(r.deriv(c + 1.0), 0.0, 1e-14);
        EXPECT_NEAR(r(c), w, 1e-14);
        EXPECT_NEAR(r.deriv(c), z, 1e-14);
    }
    EXPECT_THROW(cubic_match(Side::Left, 0.0, 0.0, 0.0, 0.0, 0.0), InvalidArgument);
}

TEST(CubicMatch, PotentialQuadraticInCloseness) {
    const auto V = quartic_well(0.0, 1.0);
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> U(-0.05, 0.05);
    double C = 0.0;
    for (int k = 0; k < 100; ++k) {
        const double w = U(rng), z = U(rng);
        const Cubic p = cubic_match(Side::Left, 0.0, w, z, 0.0);
        const auto f = sample([&](double x) { return p(x); }, Grid1D(-1.0, 0.0, 400));
        const double q = std::abs(z) + std::abs(w);
        C = std::max(C, potential_integral(f, V) / (q * q));
    }
    EXPECT_TRUE(std::isfinite(C));
    EXPECT_LT(C, 10.0);
}

TEST(ExtendProfile, ConstantStaysConstant) {
    const auto f = sample([](double) { return 1.0; }, Grid1D(-2.0, 2.0, 40));
    const auto e = extend_profile(f, {1.0, 1.0});
    EXPECT_EQ(e.grid().lo(), -3.0);
    EXPECT_EQ(e.grid().hi(), 3.0);
    EXPECT_EQ(e.size(), 61u);
    for (double v : e.values()) EXPECT_NEAR(v, 1.0, 1e-15);
}

TEST(ExtendProfile, LandsFlatOnWells) {
    const auto f = sample([](double x) { return 0.5 * (1.0 + std::tanh(x)); }, Grid1D(-3.0, 3.0, 120));
    const auto e = extend_profile(f, {0.0, 1.0});
    EXPECT_EQ(e[0], 0.0);
    EXPECT_EQ(e[e.size() - 1], 1.0);
    EXPECT_NO_THROW(derivative_seminorm_fullline(e));
    EXPECT_THROW(extend_profile(f, {0.0, 1.0}, 0.07), InvalidArgument);
    EXPECT_THROW(extend_profile(f, {-1.5, 1.0}), InvalidArgument);
}

TEST(ExtendProfile, EnergyInflationControlledByCloseness) {
    // Inflation of the extended energy over the interval-restricted energy,
    // measured against the same quantity for an exactly flat base profile.
    const auto V = quartic_well(0.0, 1.0);
    const Grid1D g(-3.0, 3.0, 120);
    auto full = [&](const ScalarField1D& f) {
        return 7.0 / 16.0 * derivative_seminorm_fullline(f) + potential_integral(f, V);
    };
    auto restricted = [&](const ScalarField1D& f) {
        return 7.0 / 16.0 * derivative_seminorm(f) + potential_integral(f, V);
    };
    auto base = [](double x) {
        const double t = (x + 3.0) / 6.0;
        return t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    };
    const auto f0 = sample(base, g);
    const double inflation0 = full(extend_profile(f0, {0.0, 1.0})) - restricted(f0);
    std::mt19937_64 rng(6);
    std::uniform_real_distribution<double> U(-1.0, 1.0);
    double C = 0.0;
    for (int k = 0; k < 50; ++k) {
        const double t = 0.02 * (1.0 + U(rng));
        const double a1 = U(rng), a2 = U(rng);
        const auto f = sample(
            [&](double x) {
                return base(x) + t * (a1 * std::exp(-4.0 * (x + 3.0)) + a2 * std::exp(-4.0 * (3.0 - x)));
            },
            g);
        const auto df = derivative_field(f);
        const double close = std::abs(df[0]) + std::abs(df[120]) + std::abs(f[0]) + std::abs(f[120] - 1.0);
        const double inflation = full(extend_profile(f, {0.0, 1.0})) - restricted(f);
        C = std::max(C, std::abs(inflation - inflation0) / close);
    }
    EXPECT_TRUE(std::isfinite(C));
    EXPECT_LT(C, 10.0);
}
