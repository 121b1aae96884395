#include "pfscale/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "pfscale/grid.hpp"

namespace pfscale {

DoubleWell::DoubleWell(std::string kind, double well_lo, double well_hi, double scale, Fn eval,
                       Fn deriv)
    : kind_(std::move(kind)),
      well_lo_(well_lo),
      well_hi_(well_hi),
      scale_(scale),
      eval_(std::move(eval)),
      deriv_(std::move(deriv)) {
    if (!(well_lo <= well_hi)) {
        throw InvalidArgument("DoubleWell: require well_lo <= well_hi");
    }
    if (!eval_ || !deriv_) {
        throw InvalidArgument("DoubleWell: eval and deriv must be callable");
    }
}

DoubleWell quartic_well(double lo, double hi, double scale) {
    if (!(lo < hi)) {
        throw InvalidArgument("quartic_well: require lo < hi");
    }
    if (!(scale > 0.0)) {
        throw InvalidArgument("quartic_well: scale must be positive");
    }
    auto eval = [=](double t) {
        const double p = (t - lo) * (t - hi);
        return scale * p * p;
    };
    auto deriv = [=](double t) {
        const double p = (t - lo) * (t - hi);
        return 2.0 * scale * p * (2.0 * t - lo - hi);
    };
    return DoubleWell("quartic", lo, hi, scale, eval, deriv);
}

HypothesisReport check_hypotheses(const DoubleWell& w, int samples) {
    if (samples < 100) {
        throw InvalidArgument("check_hypotheses: need at least 100 samples");
    }
    HypothesisReport rep;
    const double a = w.well_lo();
    const double b = w.well_hi();
    const double span = std::max(b - a, 1.0);
    const double t_lo = a - 2.0 * span;
    const double t_hi = b + 2.0 * span;

    std::vector<double> ts;
    ts.reserve(static_cast<std::size_t>(samples) + 2);
    for (int k = 0; k < samples; ++k) {
        ts.push_back(t_lo + (t_hi - t_lo) * k / (samples - 1));
    }
    ts.push_back(a);
    ts.push_back(b);
    std::sort(ts.begin(), ts.end());

    const double zero_tol = 1e-12;
    auto near_well = [&](double t) { return std::abs(t - a) <= zero_tol || std::abs(t - b) <= zero_tol; };

    rep.zero_set = true;
    for (double well : {a, b}) {
        if (std::abs(w(well)) > zero_tol) {
            rep.zero_set = false;
            rep.zero_set_witnesses.push_back(well);
        }
    }
    for (double t : ts) {
        if (!near_well(t) && !(w(t) > 0.0)) {
            rep.zero_set = false;
            rep.zero_set_witnesses.push_back(t);
        }
    }

    // Largest C with C t^2 - 1/C <= W(t): positive root of C^2 t^2 - W C - 1 = 0.
    double c_growth = std::numeric_limits<double>::infinity();
    double t_max = 0.0;
    for (double t : ts) {
        t_max = std::max(t_max, std::abs(t));
        if (t == 0.0) continue;
        const double wt = std::max(w(t), 0.0);
        const double c = (wt + std::sqrt(wt * wt + 4.0 * t * t)) / (2.0 * t * t);
        c_growth = std::min(c_growth, c);
    }
    rep.growth_constant = c_growth;
    rep.growth = c_growth >= 2.0 / t_max;

    rep.rho = 0.25 * (b - a);
    double c_nd = 0.0;
    rep.nondegenerate = rep.rho > 0.0;
    for (double t : ts) {
        const double d = std::min(std::abs(t - a), std::abs(t - b));
        if (d >= rep.rho || d <= zero_tol) continue;
        const double wt = w(t);
        if (!(wt > 0.0)) {
            rep.nondegenerate = false;
            rep.nondegeneracy_witnesses.push_back(t);
            continue;
        }
        c_nd = std::max(c_nd, d * d / wt);
    }
    rep.nondegeneracy_constant = c_nd;
    if (c_nd > 1e6) {
        rep.nondegenerate = false;
    }

    rep.smooth = true;
    for (double t : ts) {
        const double delta = 1e-5 * std::max(1.0, std::abs(t));
        const double fd = (w(t + delta) - w(t - delta)) / (2.0 * delta);
        const double d0 = w.deriv(t);
        const bool slope_ok = std::abs(fd - d0) <= 1e-4 * (1.0 + std::abs(fd) + std::abs(d0));
        const double d2_left = (d0 - w.deriv(t - delta)) / delta;
        const double d2_right = (w.deriv(t + delta) - d0) / delta;
        const bool curvature_ok =
            std::abs(d2_right - d2_left) <= 1e-3 * (1.0 + std::abs(d2_left) + std::abs(d2_right));
        if (!slope_ok || !curvature_ok) {
            rep.smooth = false;
            rep.smoothness_witnesses.push_back(t);
        }
    }
    return rep;
}

}  // namespace pfscale
