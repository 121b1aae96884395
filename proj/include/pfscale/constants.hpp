#pragma once

#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "pfscale/energy.hpp"
#include "pfscale/grid.hpp"
#include "pfscale/optimize.hpp"
#include "pfscale/potentials.hpp"

namespace pfscale {

enum class ConstantKind { M, Sigma, CUnder, COver, CDelta };

std::string to_string(ConstantKind kind);
/// Accepts m, sigma, c_under, c_over, c_delta.
ConstantKind parse_constant_kind(const std::string& name);

/// A constrained profile minimum on a truncated interval.
struct ConstantEstimate {
    ConstantKind kind = ConstantKind::M;
    double value = 0.0;          // energy of profile
    double R = 0.0;
    int n = 0;
    double extrapolated = 0.0;   // order-2 Richardson over n, n/2 (= value when unavailable)
    ScalarField1D profile{Grid1D(-1.0, 1.0, 4), std::vector<double>(5, 0.0)};
    EnergyBreakdown breakdown;
    bool converged = false;
    int iterations = 0;
    double grad_norm = 0.0;
    /// c_delta only: the profile stays within [alpha + delta, beta - delta].
    std::optional<bool> range_ok;
};

struct EstimateOptions {
    OptimizeOptions optimize;
    bool extrapolate = true;
};

/// int (|f''|^2 + W(f)) on (-R, R); two nodes pinned to a on the left, b on the right.
ConstantEstimate compute_m(const DoubleWell& W, double R, int n, const EstimateOptions& opt = {});

/// int (|f''|^2 + W(f)) on (0, R); f(0) = xi, two right-end nodes pinned to z.
ConstantEstimate compute_sigma(const DoubleWell& W, double z, double xi, double R, int n,
                               const EstimateOptions& opt = {});

/// (1/8) |f'|^2_{H^{1/2}(-R,R)} + int V(f); two nodes pinned to alpha / beta at each end.
ConstantEstimate compute_c_under(const DoubleWell& V, double R, int n,
                                 const EstimateOptions& opt = {});

/// (7/16) |f'|^2_{H^{1/2}(R)} + int V(f) for f extended by constants.
ConstantEstimate compute_c_over(const DoubleWell& V, double R, int n,
                                const EstimateOptions& opt = {});

/// c_under-type energy with single end nodes pinned to alpha + delta and beta - delta.
/// The range condition is audited on the result (range_ok), not imposed.
ConstantEstimate compute_c_delta(const DoubleWell& V, double delta, double R, int n,
                                 const EstimateOptions& opt = {});

/// Result of an R-selection loop.
struct RSelection {
    ConstantEstimate estimate;
    std::vector<double> R_history;
    std::vector<double> value_history;
    bool settled = false;
};

using EstimateAtR = std::function<ConstantEstimate(double R)>;

/// Doubles R from R0 until the value changes by less than rel_tol (relative).
/// Suitable for the nested problems (m, sigma, c_over).
RSelection select_R_doubling(const EstimateAtR& solve, double R0, double rel_tol = 5e-3,
                             int max_doublings = 4);

/// Iterates R <- S*, the optimal scale of the current profile, until R moves by
/// less than rel_tol. Used for c_under and c_delta, whose truncated values are
/// not monotone in R.
RSelection select_R_scale(const EstimateAtR& solve, const DoubleWell& V, double kappa, double R0,
                          double rel_tol = 5e-3, int max_steps = 8);

struct ScaleOptimum {
    double S_star = 0.0;
    double value = 0.0;
};

/// Minimizes S -> kappa A / S^2 + S B over S > 0 in closed form.
ScaleOptimum scale_optimal_value(double A, double B, double kappa);

/// Rescales the profile to (-1, 1) and evaluates the scale-optimal value with
/// A = |g'|^2_{H^{1/2}} (full-line for COver estimates) and B = int V(g).
double characterize(const ConstantEstimate& estimate, const DoubleWell& V, double kappa);
/// The optimal scale S* of the same rescaled profile.
double characterize_scale(const ConstantEstimate& estimate, const DoubleWell& V, double kappa);

enum class Side { Left, Right };

/// Cubic matching polynomial over a window of length `length` next to `anchor`.
/// Left:  p(anchor - length) = well, p'(anchor - length) = 0, p(anchor) = w, p'(anchor) = z.
/// Right: p(anchor + length) = well, p'(anchor + length) = 0, p(anchor) = w, p'(anchor) = z.
struct Cubic {
    Side side = Side::Left;
    double origin = 0.0;  // the node where p = well
    double length = 1.0;
    double c0 = 0.0;
    double c2 = 0.0;
    double c3 = 0.0;

    double operator()(double x) const;
    double deriv(double x) const;
};

Cubic cubic_match(Side side, double well, double w, double z, double anchor, double length = 1.0);

/// Extends f by `length` on each side with cubic_match, landing on the wells with
/// zero slope. length must be a multiple of the grid spacing. Requires
/// |f'(end)| + |f(end) - well| <= 1 at both ends.
ScalarField1D extend_profile(const ScalarField1D& f, std::pair<double, double> wells,
                             double length = 1.0);

}  // namespace pfscale
