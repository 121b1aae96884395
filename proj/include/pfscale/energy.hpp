#pragma once

#include <memory>
#include <optional>
#include <span>
#include <vector>

#include "pfscale/grid.hpp"
#include "pfscale/hessian2d.hpp"
#include "pfscale/objective.hpp"
#include "pfscale/potentials.hpp"

namespace pfscale {

/// Per-term energy values. Terms that do not apply stay 0.
struct EnergyBreakdown {
    double bending = 0.0;
    double potential = 0.0;
    double fractional = 0.0;
    double boundary_potential = 0.0;
    double total = 0.0;

    static EnergyBreakdown sum_of(double bending, double potential, double fractional,
                                  double boundary_potential);
};

/// Interface thickness eps and boundary-potential weight lambda; L = eps lambda^{2/3}.
class EpsLambda {
public:
    EpsLambda(double eps, double lambda);
    /// lambda = (L / eps)^{3/2}, so that eps lambda^{2/3} = L.
    static EpsLambda critical(double eps, double L);

    double eps() const { return eps_; }
    double lambda() const { return lambda_; }
    double L() const;
    /// Boundary-layer length eps lambda^{-1/3}.
    double rho() const;

private:
    double eps_;
    double lambda_;
};

// ---------------------------------------------------------------------------
// Field-level energies.

/// Trapezoid integral of |f''|^2; centered second differences inside,
/// four-point one-sided second differences at the endpoints.
double bending_energy(const ScalarField1D& f);

/// Trapezoid integral of W(f).
double potential_integral(const ScalarField1D& f, const DoubleWell& w);

/// |g|^2_{H^{1/2}} of a nodal field: trapezoid-weighted double sum with the
/// diagonal filled by the limit |g'|^2 of the integrand.
double h12_seminorm(const ScalarField1D& g);

/// Full-line |g|^2_{H^{1/2}} of a field extended by the common constant
/// g(lo) = g(hi) outside [lo, hi]: the bounded sum plus the exact tails
/// 2 int (g - c)^2 [1/(hi - x) + 1/(x - lo)] dx.
/// Rejects fields whose end values differ (the full-line seminorm is then infinite).
double h12_seminorm_fullline(const ScalarField1D& g);

/// |f'|^2_{H^{1/2}} over [lo, hi]. f' is represented by the cell slopes
/// (f_{k+1} - f_k)/h at cell midpoints and integrated with the midpoint rule.
double derivative_seminorm(const ScalarField1D& f);

/// Full-line |f'|^2_{H^{1/2}} for f constant outside [lo, hi] (f' = 0 there).
/// Rejects f whose first or last cell slope exceeds 5% of the largest slope
/// (the continuous seminorm diverges unless f' vanishes at the ends).
double derivative_seminorm_fullline(const ScalarField1D& f);

/// Nodal derivative field: centered differences inside, second-order one-sided at the ends.
ScalarField1D derivative_field(const ScalarField1D& f);

/// |u|^2_{H^{3/2}} on node pairs whose midpoint is a node (cell count must be even).
double h32_seminorm(const ScalarField1D& u);

/// Area-weighted sum of u_xx^2 + 2 u_xy^2 + u_yy^2 over the mask.
double hessian_energy_2d(const ScalarField2D& u);

/// eps^3 int |u''|^2 + (1/eps) int W(u).
EnergyBreakdown f_eps(const ScalarField1D& f, const DoubleWell& w, double eps);

/// (eps^3 / 8) |v'|^2_{H^{1/2}(J)} + lambda int V(v).
EnergyBreakdown g_eps(const ScalarField1D& v, const DoubleWell& V, const EpsLambda& el);

/// eps^3 int |D^2 u|^2 + (1/eps) int W(u) + lambda int_edge V(u). Rectangle grids only.
EnergyBreakdown full_energy_2d(const ScalarField2D& u, const DoubleWell& W, const DoubleWell& V,
                               const EpsLambda& el, Edge boundary_edge);

// ---------------------------------------------------------------------------
// Span-level discrete energies with exact gradients (grad may be empty).

double bending_sum(std::span<const double> f, double h, std::span<double> grad);
double potential_sum(std::span<const double> f, std::span<const double> weights,
                     const DoubleWell& w, std::span<double> grad);
double slope_seminorm(std::span<const double> f, double h, std::span<double> grad);
/// Exact full-line tails of the slope field: 2 sum_k h s_k^2 [1/(hi - x_k) + 1/(x_k - lo)].
double slope_tails(std::span<const double> f, double h, std::span<double> grad);

// ---------------------------------------------------------------------------
// Energy specifications usable by the minimizer.

/// c_bend * int |f''|^2 + c_pot * int W(f) on a 1-D grid.
class BulkProfileEnergy final : public Objective {
public:
    BulkProfileEnergy(Grid1D grid, DoubleWell w, double bending_coeff, double potential_coeff);
    std::size_t size() const override { return grid_.nodes(); }
    double evaluate(std::span<const double> x, std::span<double> grad) const override;
    std::optional<HessianModel> hessian_model() const override;
    EnergyBreakdown breakdown(std::span<const double> x) const;
    const Grid1D& grid() const { return grid_; }

private:
    Grid1D grid_;
    DoubleWell w_;
    double bend_;
    double pot_;
    std::vector<double> weights_;
};

enum class FractionalDomain { Bounded, FullLine };

/// c_frac * |f'|^2_{H^{1/2}} + c_pot * int V(f) on a 1-D grid.
class BoundaryProfileEnergy final : public Objective {
public:
    BoundaryProfileEnergy(Grid1D grid, DoubleWell v, double fractional_coeff,
                          double potential_coeff, FractionalDomain domain);
    std::size_t size() const override { return grid_.nodes(); }
    double evaluate(std::span<const double> x, std::span<double> grad) const override;
    std::optional<HessianModel> hessian_model() const override;
    EnergyBreakdown breakdown(std::span<const double> x) const;
    const Grid1D& grid() const { return grid_; }
    FractionalDomain domain() const { return domain_; }

private:
    Grid1D grid_;
    DoubleWell v_;
    double frac_;
    double pot_;
    FractionalDomain domain_;
    std::vector<double> weights_;
};

/// The 2-D functional on a rectangle, with the boundary potential on one edge.
class FullEnergy2D final : public Objective {
public:
    FullEnergy2D(const Grid2D& grid, DoubleWell W, DoubleWell V, EpsLambda el, Edge edge);
    std::size_t size() const override { return hess_->grid().node_count(); }
    double evaluate(std::span<const double> x, std::span<double> grad) const override;
    std::optional<HessianModel> hessian_model() const override;
    EnergyBreakdown breakdown(std::span<const double> x) const;
    const Grid2D& grid() const { return hess_->grid(); }
    const std::vector<std::size_t>& edge() const { return edge_nodes_; }
    const std::vector<double>& edge_weights() const { return edge_weights_; }

private:
    std::shared_ptr<const HessianOperator> hess_;
    DoubleWell W_;
    DoubleWell V_;
    EpsLambda el_;
    std::vector<std::size_t> edge_nodes_;
    std::vector<double> edge_weights_;
};

}  // namespace pfscale
