#include "pfscale/suites.hpp"

#include <algorithm>

#include "pfscale/lifting.hpp"
#include "pfscale/samples.hpp"

namespace pfscale {

int SuiteResult::failures() const {
    return static_cast<int>(std::count_if(cases.begin(), cases.end(), [](const CaseResult& c) { return !c.pass; }));
}

SuiteResult hardy_suite(std::uint64_t seed, int count, int n) {
    SuiteResult s{"hardy", {}};
    SampleSource src(seed);
    const Grid1D g(0.0, 1.0, n);
    for (int k = 0; k < count; ++k) {
        const double r = k % 2 == 0 ? 1.5 : 3.0;
        const HardyResult h = hardy_check(src.nonnegative(g), r, 1e-3);
        s.cases.push_back({"u" + std::to_string(k) + " r=" + (k % 2 == 0 ? "1.5" : "3"), h.lhs, h.rhs, h.pass});
    }
    return s;
}

SuiteResult seminorm_suite(std::uint64_t seed, int count, int n) {
    SuiteResult s{"seminorm", {}};
    SampleSource src(seed);
    const Grid1D g(0.0, 1.0, n);
    for (int k = 0; k < count; ++k) {
        const SeminormComparison c = seminorm_comparison_check(src.smooth_trace(g), 5e-2);
        s.cases.push_back({"u" + std::to_string(k), c.h32, c.bound, c.pass});
    }
    return s;
}

SuiteResult lifting_suite(std::uint64_t seed, int count, int n) {
    constexpr double lo = 0.125 - 0.03;
    constexpr double hi = 0.4375 + 0.03;
    SuiteResult s{"lifting", {}};
    SampleSource src(seed);
    const Grid1D g(0.0, 1.0, n);
    const ZetaSolver solver(make_triangle_grid(1.0, n));
    for (int k = 0; k < count; ++k) {
        const ScalarField1D trace = src.smooth_trace(g);
        const LiftReport ex = lifting_ratio_explicit(trace);
        const LiftReport zeta = solver.solve(trace);
        const std::string id = "g" + std::to_string(k);
        const double den = ex.denominator;
        s.cases.push_back({id + " explicit in bracket", ex.ratio, hi, lo <= ex.ratio && ex.ratio <= hi});
        s.cases.push_back({id + " zeta in bracket", zeta.ratio, hi, lo <= zeta.ratio && zeta.ratio <= hi});
        s.cases.push_back({id + " zeta <= explicit", zeta.ratio, ex.ratio + 1e-9, zeta.ratio <= ex.ratio + 1e-9});
        s.cases.push_back({id + " xx <= 1/4", ex.xx / den, 0.25 + 0.03, ex.xx / den <= 0.25 + 0.03});
        s.cases.push_back({id + " xy <= 1/16", ex.xy / den, 0.0625 + 0.03, ex.xy / den <= 0.0625 + 0.03});
        s.cases.push_back({id + " yy <= 1/16", ex.yy / den, 0.0625 + 0.03, ex.yy / den <= 0.0625 + 0.03});
    }
    return s;
}

}  // namespace pfscale
