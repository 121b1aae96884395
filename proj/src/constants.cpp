#include "pfscale/constants.hpp"

#include <algorithm>
#include <cmath>

namespace pfscale {

std::string to_string(ConstantKind kind) {
    switch (kind) {
        case ConstantKind::M: return "m";
        case ConstantKind::Sigma: return "sigma";
        case ConstantKind::CUnder: return "c_under";
        case ConstantKind::COver: return "c_over";
        case ConstantKind::CDelta: return "c_delta";
    }
    return "?";
}

ConstantKind parse_constant_kind(const std::string& name) {
    if (name == "m") return ConstantKind::M;
    if (name == "sigma") return ConstantKind::Sigma;
    if (name == "c_under") return ConstantKind::CUnder;
    if (name == "c_over") return ConstantKind::COver;
    if (name == "c_delta") return ConstantKind::CDelta;
    throw InvalidArgument("unknown constant '" + name +
                          "' (expected m, sigma, c_under, c_over or c_delta)");
}

namespace {

void check_R_n(double R, int n, const char* who) {
    if (!(R > 0.0) || !std::isfinite(R)) throw InvalidArgument(std::string(who) + ": R must be positive");
    if (n < 8) throw InvalidArgument(std::string(who) + ": n must be at least 8");
}

struct Pins {
    std::vector<std::size_t> nodes;
    std::vector<double> values;
};

std::vector<double> apply_pins(std::vector<double> x, const Pins& p) {
    for (std::size_t k = 0; k < p.nodes.size(); ++k) x[p.nodes[k]] = p.values[k];
    return x;
}

// Linear interpolation between the innermost pinned nodes on each side.
std::vector<double> linear_init(const Grid1D& g, std::size_t il, double vl, std::size_t ir,
                                double vr, const Pins& p) {
    std::vector<double> x(g.nodes());
    for (std::size_t i = 0; i < x.size(); ++i) {
        const double t = std::clamp((static_cast<double>(i) - static_cast<double>(il)) /
                                        (static_cast<double>(ir) - static_cast<double>(il)),
                                    0.0, 1.0);
        x[i] = vl + (vr - vl) * t;
    }
    return apply_pins(std::move(x), p);
}

std::vector<double> tanh_init(const Grid1D& g, double center, double vl, double vr, double width,
                              const Pins& p) {
    std::vector<double> x(g.nodes());
    for (std::size_t i = 0; i < x.size(); ++i) {
        x[i] = vl + (vr - vl) * 0.5 * (1.0 + std::tanh((g.node(i) - center) / width));
    }
    return apply_pins(std::move(x), p);
}

template <class Energy>
ConstantEstimate solve(ConstantKind kind, const Energy& energy, double R, int n,
                       const std::vector<std::vector<double>>& inits, const Pins& pins,
                       const OptimizeOptions& opt) {
    std::vector<Constraint> cons{Constraint::dirichlet(pins.nodes, pins.values)};
    OptimizeResult r = minimize_multistart(energy, inits, cons, opt);
    ConstantEstimate est;
    est.kind = kind;
    est.R = R;
    est.n = n;
    est.breakdown = energy.breakdown(r.x);
    est.value = est.breakdown.total;
    est.extrapolated = est.value;
    est.converged = r.converged;
    est.iterations = r.iterations;
    est.grad_norm = r.grad_norm;
    est.profile = ScalarField1D(energy.grid(), std::move(r.x));
    return est;
}

// Order-2 Richardson using a half-resolution solve.
template <class Fn>
void richardson(ConstantEstimate& est, int n, const EstimateOptions& opt, Fn&& at_n) {
    if (!opt.extrapolate || n % 2 != 0 || n / 2 < 8) return;
    EstimateOptions half = opt;
    half.extrapolate = false;
    const ConstantEstimate coarse = at_n(n / 2, half);
    est.extrapolated = est.value + (est.value - coarse.value) / 3.0;
}

Pins two_node_pins(std::size_t nodes, double left, double right) {
    const std::size_t last = nodes - 1;
    return {{0, 1, last - 1, last}, {left, left, right, right}};
}

ConstantEstimate boundary_estimate(ConstantKind kind, const DoubleWell& V, double kappa,
                                   FractionalDomain domain, double left, double right,
                                   bool two_nodes, double R, int n, const EstimateOptions& opt) {
    const Grid1D g(-R, R, n);
    const std::size_t last = g.nodes() - 1;
    const Pins pins = two_nodes ? two_node_pins(g.nodes(), left, right)
                                : Pins{{0, last}, {left, right}};
    const std::size_t il = two_nodes ? 1 : 0;
    const std::size_t ir = two_nodes ? last - 1 : last;
    BoundaryProfileEnergy energy(g, V, kappa, 1.0, domain);
    const std::vector<std::vector<double>> inits{
        linear_init(g, il, left, ir, right, pins),
        tanh_init(g, 0.0, left, right, std::min(1.0, 0.25 * R), pins)};
    return solve(kind, energy, R, n, inits, pins, opt.optimize);
}

}  // namespace

ConstantEstimate compute_m(const DoubleWell& W, double R, int n, const EstimateOptions& opt) {
    check_R_n(R, n, "compute_m");
    const Grid1D g(-R, R, n);
    const double a = W.well_lo();
    const double b = W.well_hi();
    const Pins pins = two_node_pins(g.nodes(), a, b);
    BulkProfileEnergy energy(g, W, 1.0, 1.0);
    const std::vector<std::vector<double>> inits{
        linear_init(g, 1, a, g.nodes() - 2, b, pins),
        tanh_init(g, 0.0, a, b, std::min(1.0, 0.25 * R), pins)};
    ConstantEstimate est = solve(ConstantKind::M, energy, R, n, inits, pins, opt.optimize);
    richardson(est, n, opt, [&](int m, const EstimateOptions& o) { return compute_m(W, R, m, o); });
    return est;
}

ConstantEstimate compute_sigma(const DoubleWell& W, double z, double xi, double R, int n,
                               const EstimateOptions& opt) {
    check_R_n(R, n, "compute_sigma");
    if (!std::isfinite(z) || !std::isfinite(xi)) {
        throw InvalidArgument("compute_sigma: z and xi must be finite");
    }
    const Grid1D g(0.0, R, n);
    const std::size_t last = g.nodes() - 1;
    const Pins pins{{0, last - 1, last}, {xi, z, z}};
    BulkProfileEnergy energy(g, W, 1.0, 1.0);
    std::vector<double> decay(g.nodes());
    for (std::size_t i = 0; i < decay.size(); ++i) {
        decay[i] = z + (xi - z) * (1.0 - std::tanh(g.node(i)));
    }
    const std::vector<std::vector<double>> inits{linear_init(g, 0, xi, last - 1, z, pins),
                                                 apply_pins(std::move(decay), pins)};
    ConstantEstimate est = solve(ConstantKind::Sigma, energy, R, n, inits, pins, opt.optimize);
    richardson(est, n, opt,
               [&](int m, const EstimateOptions& o) { return compute_sigma(W, z, xi, R, m, o); });
    return est;
}

ConstantEstimate compute_c_under(const DoubleWell& V, double R, int n, const EstimateOptions& opt) {
    check_R_n(R, n, "compute_c_under");
    ConstantEstimate est =
        boundary_estimate(ConstantKind::CUnder, V, 1.0 / 8.0, FractionalDomain::Bounded,
                          V.well_lo(), V.well_hi(), true, R, n, opt);
    richardson(est, n, opt,
               [&](int m, const EstimateOptions& o) { return compute_c_under(V, R, m, o); });
    return est;
}

ConstantEstimate compute_c_over(const DoubleWell& V, double R, int n, const EstimateOptions& opt) {
    check_R_n(R, n, "compute_c_over");
    ConstantEstimate est =
        boundary_estimate(ConstantKind::COver, V, 7.0 / 16.0, FractionalDomain::FullLine,
                          V.well_lo(), V.well_hi(), true, R, n, opt);
    richardson(est, n, opt,
               [&](int m, const EstimateOptions& o) { return compute_c_over(V, R, m, o); });
    return est;
}

ConstantEstimate compute_c_delta(const DoubleWell& V, double delta, double R, int n,
                                 const EstimateOptions& opt) {
    check_R_n(R, n, "compute_c_delta");
    const double alpha = V.well_lo();
    const double beta = V.well_hi();
    if (!(delta > 0.0) || !(delta < 0.5 * (beta - alpha))) {
        throw InvalidArgument("compute_c_delta: delta must lie in (0, (beta - alpha)/2)");
    }
    const double lo = alpha + delta;
    const double hi = beta - delta;
    ConstantEstimate est = boundary_estimate(ConstantKind::CDelta, V, 1.0 / 8.0,
                                             FractionalDomain::Bounded, lo, hi, false, R, n, opt);
    const auto v = est.profile.values();
    const double slack = 1e-6 * (beta - alpha);
    const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
    est.range_ok = *mn >= lo - slack && *mx <= hi + slack;
    richardson(est, n, opt, [&](int m, const EstimateOptions& o) {
        return compute_c_delta(V, delta, R, m, o);
    });
    return est;
}

// ---------------------------------------------------------------------------

RSelection select_R_doubling(const EstimateAtR& solve_at, double R0, double rel_tol,
                             int max_doublings) {
    if (!(R0 > 0.0)) throw InvalidArgument("select_R_doubling: R0 must be positive");
    RSelection sel;
    double R = R0;
    ConstantEstimate cur = solve_at(R);
    sel.R_history.push_back(R);
    sel.value_history.push_back(cur.value);
    for (int k = 0; k < max_doublings; ++k) {
        R *= 2.0;
        ConstantEstimate next = solve_at(R);
        sel.R_history.push_back(R);
        sel.value_history.push_back(next.value);
        const double change = std::abs(next.value - cur.value);
        cur = std::move(next);
        if (change <= rel_tol * std::max(std::abs(cur.value), 1e-300)) {
            sel.settled = true;
            break;
        }
    }
    sel.estimate = std::move(cur);
    return sel;
}

RSelection select_R_scale(const EstimateAtR& solve_at, const DoubleWell& V, double kappa,
                          double R0, double rel_tol, int max_steps) {
    if (!(R0 > 0.0)) throw InvalidArgument("select_R_scale: R0 must be positive");
    RSelection sel;
    double R = R0;
    ConstantEstimate cur = solve_at(R);
    sel.R_history.push_back(R);
    sel.value_history.push_back(cur.value);
    for (int k = 0; k < max_steps; ++k) {
        const double S = characterize_scale(cur, V, kappa);
        if (!(S > 0.0) || !std::isfinite(S)) break;
        if (std::abs(S - R) <= rel_tol * R) {
            sel.settled = true;
            break;
        }
        R = S;
        ConstantEstimate next = solve_at(R);
        sel.R_history.push_back(R);
        sel.value_history.push_back(next.value);
        cur = std::move(next);
    }
    sel.estimate = std::move(cur);
    return sel;
}

ScaleOptimum scale_optimal_value(double A, double B, double kappa) {
    if (!(A > 0.0) || !(B > 0.0) || !(kappa > 0.0) || !std::isfinite(A) || !std::isfinite(B) ||
        !std::isfinite(kappa)) {
        throw InvalidArgument("scale_optimal_value: A, B and kappa must be positive and finite");
    }
    ScaleOptimum s;
    s.S_star = std::cbrt(2.0 * kappa * A / B);
    s.value = 3.0 * std::pow(2.0, -2.0 / 3.0) * std::cbrt(kappa * A) * std::cbrt(B * B);
    return s;
}

namespace {

std::pair<double, double> rescaled_AB(const ConstantEstimate& est, const DoubleWell& V) {
    const auto& g0 = est.profile.grid();
    const Grid1D unit(-1.0, 1.0, g0.cells());
    const std::vector<double> vals(est.profile.values().begin(), est.profile.values().end());
    const ScalarField1D g(unit, vals);
    const double A = est.kind == ConstantKind::COver ? derivative_seminorm_fullline(g)
                                                     : derivative_seminorm(g);
    return {A, potential_integral(g, V)};
}

}  // namespace

double characterize(const ConstantEstimate& est, const DoubleWell& V, double kappa) {
    const auto [A, B] = rescaled_AB(est, V);
    if (!(A > 0.0) || !(B > 0.0)) return 0.0;
    return scale_optimal_value(A, B, kappa).value;
}

double characterize_scale(const ConstantEstimate& est, const DoubleWell& V, double kappa) {
    const auto [A, B] = rescaled_AB(est, V);
    if (!(A > 0.0) || !(B > 0.0)) return 0.0;
    return scale_optimal_value(A, B, kappa).S_star;
}

// ---------------------------------------------------------------------------

double Cubic::operator()(double x) const {
    const double t = side == Side::Left ? (x - origin) / length : (origin - x) / length;
    return c0 + t * t * (c2 + c3 * t);
}

double Cubic::deriv(double x) const {
    const double t = side == Side::Left ? (x - origin) / length : (origin - x) / length;
    const double sgn = side == Side::Left ? 1.0 : -1.0;
    return sgn * t * (2.0 * c2 + 3.0 * c3 * t) / length;
}

Cubic cubic_match(Side side, double well, double w, double z, double anchor, double length) {
    if (!(length > 0.0)) throw InvalidArgument("cubic_match: length must be positive");
    Cubic p;
    p.side = side;
    p.length = length;
    p.c0 = well;
    const double zl = z * length;
    if (side == Side::Left) {
        p.origin = anchor - length;
        p.c2 = 3.0 * w - 3.0 * well - zl;
        p.c3 = zl + 2.0 * well - 2.0 * w;
    } else {
        p.origin = anchor + length;
        p.c2 = 3.0 * w - 3.0 * well + zl;
        p.c3 = 2.0 * well - 2.0 * w - zl;
    }
    return p;
}

ScalarField1D extend_profile(const ScalarField1D& f, std::pair<double, double> wells,
                             double length) {
    const Grid1D& g = f.grid();
    const double h = g.h();
    const long k = std::lround(length / h);
    if (k < 1 || std::abs(static_cast<double>(k) * h - length) > 1e-9 * length) {
        throw InvalidArgument("extend_profile: length must be a positive multiple of the spacing");
    }
    const ScalarField1D df = derivative_field(f);
    const std::size_t last = f.size() - 1;
    const double w1 = f[0], z1 = df[0];
    const double w2 = f[last], z2 = df[last];
    if (std::abs(z1) + std::abs(w1 - wells.first) > 1.0 ||
        std::abs(z2) + std::abs(w2 - wells.second) > 1.0) {
        throw InvalidArgument(
            "extend_profile: endpoint values/slopes are not within 1 of the target wells");
    }
    const Cubic left = cubic_match(Side::Left, wells.first, w1, z1, g.lo(), length);
    const Cubic right = cubic_match(Side::Right, wells.second, w2, z2, g.hi(), length);
    const int cells = g.cells() + 2 * static_cast<int>(k);
    const Grid1D ext(g.lo() - static_cast<double>(k) * h, g.hi() + static_cast<double>(k) * h, cells);
    std::vector<double> v(ext.nodes());
    const std::size_t kk = static_cast<std::size_t>(k);
    for (std::size_t i = 0; i < kk; ++i) {
        v[i] = left(g.lo() - static_cast<double>(kk - i) * h);
        v[kk + last + 1 + i] = right(g.hi() + static_cast<double>(i + 1) * h);
    }
    for (std::size_t i = 0; i <= last; ++i) v[kk + i] = f[i];
    v.front() = wells.first;
    v.back() = wells.second;
    return ScalarField1D(ext, std::move(v));
}

}  // namespace pfscale
