#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace pfscale {

/// Nonnegative two-well potential. The canonical instance is
/// scale * (t - lo)^2 (t - hi)^2; arbitrary callables can be wrapped for testing.
class DoubleWell {
public:
    using Fn = std::function<double(double)>;

    DoubleWell(std::string kind, double well_lo, double well_hi, double scale, Fn eval, Fn deriv);

    const std::string& kind() const { return kind_; }
    double well_lo() const { return well_lo_; }
    double well_hi() const { return well_hi_; }
    double scale() const { return scale_; }

    double operator()(double t) const { return eval_(t); }
    double eval(double t) const { return eval_(t); }
    double deriv(double t) const { return deriv_(t); }

private:
    std::string kind_;
    double well_lo_;
    double well_hi_;
    double scale_;
    Fn eval_;
    Fn deriv_;
};

DoubleWell quartic_well(double lo, double hi, double scale = 1.0);

/// Outcome of the sampled hypothesis checks on a potential.
struct HypothesisReport {
    // Wells are zeros and the potential is positive elsewhere.
    bool zero_set = false;
    std::vector<double> zero_set_witnesses;

    // Quadratic growth W(t) >= C t^2 - 1/C. C is the largest value for which the
    // sampled inequality holds; a potential with no growth only reaches the
    // trivial level 1/max|t|, so the check requires twice that.
    bool growth = false;
    double growth_constant = 0.0;

    // Quadratic nondegeneracy near the wells on (well - rho, well + rho).
    bool nondegenerate = false;
    double nondegeneracy_constant = 0.0;
    double rho = 0.0;
    std::vector<double> nondegeneracy_witnesses;

    // deriv agrees with centered differences of eval and is itself continuous.
    bool smooth = false;
    std::vector<double> smoothness_witnesses;

    bool all_pass() const { return zero_set && growth && nondegenerate && smooth; }
};

HypothesisReport check_hypotheses(const DoubleWell& w, int samples);

}  // namespace pfscale
