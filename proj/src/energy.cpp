#include "pfscale/energy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "pfscale/kernels.hpp"

namespace pfscale {

EnergyBreakdown EnergyBreakdown::sum_of(double bending, double potential, double fractional,
                                        double boundary_potential) {
    EnergyBreakdown b;
    b.bending = bending;
    b.potential = potential;
    b.fractional = fractional;
    b.boundary_potential = boundary_potential;
    b.total = bending + potential + fractional + boundary_potential;
    return b;
}

EpsLambda::EpsLambda(double eps, double lambda) : eps_(eps), lambda_(lambda) {
    if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidArgument("EpsLambda: eps must be positive");
    if (!(lambda > 0.0) || !std::isfinite(lambda)) {
        throw InvalidArgument("EpsLambda: lambda must be positive");
    }
}

EpsLambda EpsLambda::critical(double eps, double L) {
    if (!(L > 0.0)) throw InvalidArgument("EpsLambda: L must be positive");
    if (!(eps > 0.0)) throw InvalidArgument("EpsLambda: eps must be positive");
    return EpsLambda(eps, std::pow(L / eps, 1.5));
}

double EpsLambda::L() const { return eps_ * std::cbrt(lambda_ * lambda_); }

double EpsLambda::rho() const { return eps_ / std::cbrt(lambda_); }

// ---------------------------------------------------------------------------

namespace {

std::vector<double> trapezoid(std::size_t nodes, double h) {
    std::vector<double> w(nodes, h);
    w.front() = 0.5 * h;
    w.back() = 0.5 * h;
    return w;
}

void add_scaled(std::span<double> out, std::span<const double> in, double s) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] += s * in[i];
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

// Largest second derivative of the potential at its wells (0 if none is positive).
double well_curvature(const DoubleWell& w) {
    double mu = 0.0;
    for (double t : {w.well_lo(), w.well_hi()}) {
        const double d = 1e-5 * std::max(1.0, std::abs(t));
        mu = std::max(mu, (w.deriv(t + d) - w.deriv(t - d)) / (2.0 * d));
    }
    return std::isfinite(mu) ? mu : 0.0;
}

using Trip = Eigen::Triplet<double>;

// Hessian of sum_k h^2-weighted slope double sum (plus tails) with respect to nodal values.
Eigen::MatrixXd slope_form_hessian(std::size_t cells, double h, bool tails) {
    const std::size_t m = cells;
    Eigen::MatrixXd H = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(m));
    for (std::size_t k = 0; k < m; ++k) {
        double diag = 0.0;
        for (std::size_t l = 0; l < m; ++l) {
            if (l == k) continue;
            const double d = static_cast<double>(k) - static_cast<double>(l);
            const double c = 4.0 / (d * d);
            H(k, l) -= c;
            diag += c;
        }
        H(k, k) += diag;
        if (tails) {
            H(k, k) += 4.0 * (1.0 / (static_cast<double>(k) + 0.5) +
                              1.0 / (static_cast<double>(m - k) - 0.5));
        }
    }
    // Diagonal band h^2 (D s)_k^2 with D the second-order slope stencil.
    auto add_row = [&](std::initializer_list<std::pair<std::size_t, double>> row) {
        for (const auto& [a, ca] : row) {
            for (const auto& [b, cb] : row) H(a, b) += 2.0 * h * h * ca * cb;
        }
    };
    const double q = 1.0 / (2.0 * h);
    add_row({{0, -3.0 * q}, {1, 4.0 * q}, {2, -q}});
    add_row({{m - 1, 3.0 * q}, {m - 2, -4.0 * q}, {m - 3, q}});
    for (std::size_t k = 1; k + 1 < m; ++k) add_row({{k - 1, -q}, {k + 1, q}});

    // Pull back through the slope map s_k = (f_{k+1} - f_k)/h.
    const std::size_t n = m + 1;
    Eigen::MatrixXd F(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
    auto at = [&](std::ptrdiff_t a, std::ptrdiff_t b) {
        if (a < 0 || b < 0 || a >= static_cast<std::ptrdiff_t>(m) || b >= static_cast<std::ptrdiff_t>(m)) return 0.0;
        return H(a, b);
    };
    for (std::ptrdiff_t i = 0; i < static_cast<std::ptrdiff_t>(n); ++i) {
        for (std::ptrdiff_t j = 0; j < static_cast<std::ptrdiff_t>(n); ++j) {
            F(i, j) = (at(i - 1, j - 1) - at(i - 1, j) - at(i, j - 1) + at(i, j)) / (h * h);
        }
    }
    return F;
}

}  // namespace

double bending_sum(std::span<const double> f, double h, std::span<double> grad) {
    const std::size_t m = f.size();
    const std::size_t n = m - 1;
    const double inv = 1.0 / (h * h);
    std::vector<double> d(m);
    d[0] = (2.0 * f[0] - 5.0 * f[1] + 4.0 * f[2] - f[3]) * inv;
    d[n] = (2.0 * f[n] - 5.0 * f[n - 1] + 4.0 * f[n - 2] - f[n - 3]) * inv;
    for (std::size_t i = 1; i < n; ++i) d[i] = (f[i + 1] - 2.0 * f[i] + f[i - 1]) * inv;

    const auto w = trapezoid(m, h);
    std::vector<double> terms(m);
    for (std::size_t i = 0; i < m; ++i) terms[i] = w[i] * d[i] * d[i];

    if (!grad.empty()) {
        std::fill(grad.begin(), grad.end(), 0.0);
        auto c = [&](std::size_t i) { return 2.0 * w[i] * d[i] * inv; };
        const double c0 = c(0);
        grad[0] += 2.0 * c0;
        grad[1] += -5.0 * c0;
        grad[2] += 4.0 * c0;
        grad[3] += -1.0 * c0;
        const double cn = c(n);
        grad[n] += 2.0 * cn;
        grad[n - 1] += -5.0 * cn;
        grad[n - 2] += 4.0 * cn;
        grad[n - 3] += -1.0 * cn;
        for (std::size_t i = 1; i < n; ++i) {
            const double ci = c(i);
            grad[i - 1] += ci;
            grad[i] -= 2.0 * ci;
            grad[i + 1] += ci;
        }
    }
    return kernels::pairwise_sum(terms);
}

double potential_sum(std::span<const double> f, std::span<const double> weights,
                     const DoubleWell& w, std::span<double> grad) {
    std::vector<double> terms(f.size());
    for (std::size_t i = 0; i < f.size(); ++i) {
        terms[i] = weights[i] * w(f[i]);
        if (!grad.empty()) grad[i] = weights[i] * w.deriv(f[i]);
    }
    return kernels::pairwise_sum(terms);
}

namespace {

std::vector<double> slopes_of(std::span<const double> f, double h) {
    std::vector<double> s(f.size() - 1);
    for (std::size_t k = 0; k + 1 < f.size(); ++k) s[k] = (f[k + 1] - f[k]) / h;
    return s;
}

// grad_f = S^T grad_s for the slope map S.
void pull_back_slopes(std::span<const double> grad_s, double h, std::span<double> grad_f) {
    const std::size_t n = grad_s.size();
    std::fill(grad_f.begin(), grad_f.end(), 0.0);
    for (std::size_t k = 0; k < n; ++k) {
        grad_f[k] -= grad_s[k] / h;
        grad_f[k + 1] += grad_s[k] / h;
    }
}

}  // namespace

double slope_seminorm(std::span<const double> f, double h, std::span<double> grad) {
    const auto s = slopes_of(f, h);
    const std::vector<double> w(s.size(), h);
    if (grad.empty()) {
        return kernels::frac_double_sum(s, w, h, {});
    }
    std::vector<double> gs(s.size());
    const double e = kernels::frac_double_sum(s, w, h, gs);
    pull_back_slopes(gs, h, grad);
    return e;
}

double slope_tails(std::span<const double> f, double h, std::span<double> grad) {
    const auto s = slopes_of(f, h);
    const std::size_t n = s.size();
    std::vector<double> terms(n);
    std::vector<double> gs(grad.empty() ? 0 : n);
    for (std::size_t k = 0; k < n; ++k) {
        const double left = static_cast<double>(k) + 0.5;
        const double right = static_cast<double>(n - k) - 0.5;
        const double kern = 1.0 / left + 1.0 / right;
        terms[k] = 2.0 * s[k] * s[k] * kern;
        if (!gs.empty()) gs[k] = 4.0 * s[k] * kern;
    }
    if (!grad.empty()) pull_back_slopes(gs, h, grad);
    return kernels::pairwise_sum(terms);
}

// ---------------------------------------------------------------------------

double bending_energy(const ScalarField1D& f) {
    return bending_sum(f.values(), f.grid().h(), {});
}

double potential_integral(const ScalarField1D& f, const DoubleWell& w) {
    const auto wt = f.grid().trapezoid_weights();
    return potential_sum(f.values(), wt, w, {});
}

double h12_seminorm(const ScalarField1D& g) {
    const auto w = g.grid().trapezoid_weights();
    return kernels::frac_double_sum(g.values(), w, g.grid().h(), {});
}

double h12_seminorm_fullline(const ScalarField1D& g) {
    const auto v = g.values();
    const std::size_t n = v.size() - 1;
    const double c = v[0];
    double spread = 0.0;
    for (double x : v) spread = std::max(spread, std::abs(x - c));
    if (spread == 0.0) return 0.0;
    if (std::abs(v[n] - v[0]) > 1e-8 * spread) {
        throw InvalidArgument(
            "h12_seminorm_fullline: end values differ, so the full-line seminorm is infinite");
    }
    const auto& grid = g.grid();
    const auto w = grid.trapezoid_weights();
    std::vector<double> tails(n + 1, 0.0);
    for (std::size_t k = 1; k < n; ++k) {
        const double x = grid.node(k);
        const double d = v[k] - c;
        tails[k] = 2.0 * w[k] * d * d * (1.0 / (grid.hi() - x) + 1.0 / (x - grid.lo()));
    }
    return kernels::frac_double_sum(v, w, grid.h(), {}) + kernels::pairwise_sum(tails);
}

double derivative_seminorm(const ScalarField1D& f) {
    return slope_seminorm(f.values(), f.grid().h(), {});
}

double derivative_seminorm_fullline(const ScalarField1D& f) {
    const auto s = slopes_of(f.values(), f.grid().h());
    const double smax = max_abs(s);
    if (smax == 0.0) return 0.0;
    if (std::abs(s.front()) > 0.05 * smax || std::abs(s.back()) > 0.05 * smax) {
        throw InvalidArgument(
            "derivative_seminorm_fullline: derivative must vanish on the outermost cells");
    }
    const double h = f.grid().h();
    return slope_seminorm(f.values(), h, {}) + slope_tails(f.values(), h, {});
}

ScalarField1D derivative_field(const ScalarField1D& f) {
    const auto v = f.values();
    const std::size_t n = v.size() - 1;
    const double h = f.grid().h();
    std::vector<double> d(n + 1);
    d[0] = (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
    d[n] = (3.0 * v[n] - 4.0 * v[n - 1] + v[n - 2]) / (2.0 * h);
    for (std::size_t i = 1; i < n; ++i) d[i] = (v[i + 1] - v[i - 1]) / (2.0 * h);
    return ScalarField1D(f.grid(), std::move(d));
}

double h32_seminorm(const ScalarField1D& u) {
    if (u.grid().cells() % 2 != 0) {
        throw InvalidArgument("h32_seminorm: cell count must be even so midpoints are nodes");
    }
    const auto w = u.grid().trapezoid_weights();
    return kernels::h32_double_sum(u.values(), w, u.grid().h());
}

double hessian_energy_2d(const ScalarField2D& u) {
    HessianOperator op(u.grid());
    return op.energy(u.values());
}

EnergyBreakdown f_eps(const ScalarField1D& f, const DoubleWell& w, double eps) {
    if (!(eps > 0.0)) throw InvalidArgument("f_eps: eps must be positive");
    return EnergyBreakdown::sum_of(eps * eps * eps * bending_energy(f),
                                   potential_integral(f, w) / eps, 0.0, 0.0);
}

EnergyBreakdown g_eps(const ScalarField1D& v, const DoubleWell& V, const EpsLambda& el) {
    const double e = el.eps();
    return EnergyBreakdown::sum_of(0.0, 0.0, e * e * e / 8.0 * derivative_seminorm(v),
                                   el.lambda() * potential_integral(v, V));
}

EnergyBreakdown full_energy_2d(const ScalarField2D& u, const DoubleWell& W, const DoubleWell& V,
                               const EpsLambda& el, Edge boundary_edge) {
    if (u.grid().shape() != DomainShape::Rectangle) {
        throw InvalidArgument("full_energy_2d: rectangle grids only");
    }
    FullEnergy2D energy(u.grid(), W, V, el, boundary_edge);
    return energy.breakdown(u.values());
}

// ---------------------------------------------------------------------------

BulkProfileEnergy::BulkProfileEnergy(Grid1D grid, DoubleWell w, double bending_coeff,
                                     double potential_coeff)
    : grid_(grid),
      w_(std::move(w)),
      bend_(bending_coeff),
      pot_(potential_coeff),
      weights_(grid.trapezoid_weights()) {}

double BulkProfileEnergy::evaluate(std::span<const double> x, std::span<double> grad) const {
    const double h = grid_.h();
    if (grad.empty()) {
        return bend_ * bending_sum(x, h, {}) + pot_ * potential_sum(x, weights_, w_, {});
    }
    std::vector<double> gp(x.size());
    const double eb = bending_sum(x, h, grad);
    const double ep = potential_sum(x, weights_, w_, gp);
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = bend_ * grad[i] + pot_ * gp[i];
    return bend_ * eb + pot_ * ep;
}

std::optional<HessianModel> BulkProfileEnergy::hessian_model() const {
    const std::size_t m = grid_.nodes();
    const std::size_t n = m - 1;
    const double h = grid_.h();
    const double inv = 1.0 / (h * h);
    std::vector<Trip> t;
    auto row = [&](std::size_t r, std::initializer_list<std::pair<std::size_t, double>> cols) {
        for (const auto& [c, v] : cols) t.emplace_back(static_cast<int>(r), static_cast<int>(c), v * inv);
    };
    row(0, {{0, 2.0}, {1, -5.0}, {2, 4.0}, {3, -1.0}});
    row(n, {{n, 2.0}, {n - 1, -5.0}, {n - 2, 4.0}, {n - 3, -1.0}});
    for (std::size_t i = 1; i < n; ++i) row(i, {{i - 1, 1.0}, {i, -2.0}, {i + 1, 1.0}});
    const auto N = static_cast<Eigen::Index>(m);
    Eigen::SparseMatrix<double> D(N, N);
    D.setFromTriplets(t.begin(), t.end());
    Eigen::VectorXd w(N);
    for (std::size_t i = 0; i < m; ++i) w[static_cast<Eigen::Index>(i)] = weights_[i];
    HessianModel model;
    Eigen::SparseMatrix<double> WD = w.asDiagonal() * D;
    model.sparse = Eigen::SparseMatrix<double>(D.transpose() * WD) * (2.0 * bend_);
    const double mu = pot_ * well_curvature(w_);
    for (std::size_t i = 0; i < m; ++i) {
        model.sparse.coeffRef(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += mu * weights_[i];
    }
    model.sparse.makeCompressed();
    return model;
}

EnergyBreakdown BulkProfileEnergy::breakdown(std::span<const double> x) const {
    return EnergyBreakdown::sum_of(bend_ * bending_sum(x, grid_.h(), {}),
                                   pot_ * potential_sum(x, weights_, w_, {}), 0.0, 0.0);
}

BoundaryProfileEnergy::BoundaryProfileEnergy(Grid1D grid, DoubleWell v, double fractional_coeff,
                                             double potential_coeff, FractionalDomain domain)
    : grid_(grid),
      v_(std::move(v)),
      frac_(fractional_coeff),
      pot_(potential_coeff),
      domain_(domain),
      weights_(grid.trapezoid_weights()) {}

double BoundaryProfileEnergy::evaluate(std::span<const double> x, std::span<double> grad) const {
    const double h = grid_.h();
    const bool full = domain_ == FractionalDomain::FullLine;
    if (grad.empty()) {
        double ef = slope_seminorm(x, h, {});
        if (full) ef += slope_tails(x, h, {});
        return frac_ * ef + pot_ * potential_sum(x, weights_, v_, {});
    }
    std::vector<double> gt(x.size());
    std::vector<double> gp(x.size());
    double ef = slope_seminorm(x, h, grad);
    if (full) {
        ef += slope_tails(x, h, gt);
        add_scaled(grad, gt, 1.0);
    }
    const double ep = potential_sum(x, weights_, v_, gp);
    for (std::size_t i = 0; i < x.size(); ++i) grad[i] = frac_ * grad[i] + pot_ * gp[i];
    return frac_ * ef + pot_ * ep;
}

std::optional<HessianModel> BoundaryProfileEnergy::hessian_model() const {
    HessianModel model;
    model.dense = frac_ * slope_form_hessian(static_cast<std::size_t>(grid_.cells()), grid_.h(),
                                             domain_ == FractionalDomain::FullLine);
    const double mu = pot_ * well_curvature(v_);
    for (std::size_t i = 0; i < weights_.size(); ++i) {
        model.dense(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(i)) += mu * weights_[i];
    }
    return model;
}

EnergyBreakdown BoundaryProfileEnergy::breakdown(std::span<const double> x) const {
    const double h = grid_.h();
    double ef = slope_seminorm(x, h, {});
    if (domain_ == FractionalDomain::FullLine) ef += slope_tails(x, h, {});
    return EnergyBreakdown::sum_of(0.0, 0.0, frac_ * ef, pot_ * potential_sum(x, weights_, v_, {}));
}

FullEnergy2D::FullEnergy2D(const Grid2D& grid, DoubleWell W, DoubleWell V, EpsLambda el, Edge edge)
    : hess_(std::make_shared<HessianOperator>(grid)),
      W_(std::move(W)),
      V_(std::move(V)),
      el_(el),
      edge_nodes_(edge_nodes(grid, edge)) {
    if (grid.shape() != DomainShape::Rectangle) {
        throw InvalidArgument("FullEnergy2D: rectangle grids only");
    }
    edge_weights_ = trapezoid(edge_nodes_.size(), grid.h());
}

double FullEnergy2D::evaluate(std::span<const double> x, std::span<double> grad) const {
    const double e = el_.eps();
    const double e3 = e * e * e;
    const auto& area = hess_->grid().area_weights();
    if (grad.empty()) {
        return breakdown(x).total;
    }
    hess_->gradient(x, grad);
    const double bend = hess_->energy(x);
    std::vector<double> terms(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) {
        terms[k] = area[k] * W_(x[k]);
        grad[k] = e3 * grad[k] + area[k] * W_.deriv(x[k]) / e;
    }
    std::vector<double> bterms(edge_nodes_.size());
    for (std::size_t q = 0; q < edge_nodes_.size(); ++q) {
        const std::size_t k = edge_nodes_[q];
        bterms[q] = edge_weights_[q] * V_(x[k]);
        grad[k] += el_.lambda() * edge_weights_[q] * V_.deriv(x[k]);
    }
    return e3 * bend + kernels::pairwise_sum(terms) / e + el_.lambda() * kernels::pairwise_sum(bterms);
}

std::optional<HessianModel> FullEnergy2D::hessian_model() const {
    const double e = el_.eps();
    HessianModel model;
    model.sparse = Eigen::SparseMatrix<double>(hess_->quadratic_form()) * (2.0 * e * e * e);
    const auto& area = hess_->grid().area_weights();
    const double muW = well_curvature(W_) / e;
    const double muV = el_.lambda() * well_curvature(V_);
    for (std::size_t k = 0; k < area.size(); ++k) {
        if (area[k] > 0.0) {
            model.sparse.coeffRef(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(k)) += muW * area[k];
        }
    }
    for (std::size_t q = 0; q < edge_nodes_.size(); ++q) {
        const auto k = static_cast<Eigen::Index>(edge_nodes_[q]);
        model.sparse.coeffRef(k, k) += muV * edge_weights_[q];
    }
    model.sparse.makeCompressed();
    return model;
}

EnergyBreakdown FullEnergy2D::breakdown(std::span<const double> x) const {
    const double e = el_.eps();
    const auto& area = hess_->grid().area_weights();
    std::vector<double> terms(x.size());
    for (std::size_t k = 0; k < x.size(); ++k) terms[k] = area[k] * W_(x[k]);
    std::vector<double> bterms(edge_nodes_.size());
    for (std::size_t q = 0; q < edge_nodes_.size(); ++q) {
        bterms[q] = edge_weights_[q] * V_(x[edge_nodes_[q]]);
    }
    return EnergyBreakdown::sum_of(e * e * e * hess_->energy(x), kernels::pairwise_sum(terms) / e,
                                   0.0, el_.lambda() * kernels::pairwise_sum(bterms));
}

}  // namespace pfscale
