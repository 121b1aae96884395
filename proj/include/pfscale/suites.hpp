#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pfscale {

/// One randomized case of a property suite.
struct CaseResult {
    std::string label;
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

struct SuiteResult {
    std::string name;
    std::vector<CaseResult> cases;
    int failures() const;
    bool pass() const { return failures() == 0; }
};

/// Hardy inequality on `count` random nonnegative u over (0, 1), r alternating
/// between 1.5 and 3, relative slack 1e-3.
SuiteResult hardy_suite(std::uint64_t seed, int count, int n);

/// |u|^2_{H^{3/2}} <= (1/8)|u'|^2_{H^{1/2}} + 5e-2 on `count` random smooth u with max |u| = 1.
SuiteResult seminorm_suite(std::uint64_t seed, int count, int n);

/// Random traces on (0, 1): both lifting estimates inside [1/8 - 0.03, 7/16 + 0.03],
/// the quadratic minimum below the explicit ratio (+1e-9), and the explicit
/// extension's per-derivative shares below 1/4, 1/16, 1/16 (+0.03).
SuiteResult lifting_suite(std::uint64_t seed, int count, int n);

}  // namespace pfscale
