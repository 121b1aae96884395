#pragma once

#include <Eigen/SparseCore>
#include <span>

#include "pfscale/grid.hpp"

namespace pfscale {

using RowSparse = Eigen::SparseMatrix<double, Eigen::RowMajor, int>;

/// Discrete Hessian energy on a masked grid:
///
///   E(u) = sum_nodes omega_n (u_xx^2 + 2 u_xy^2 + u_yy^2)
///
/// with omega the grid area weights. Second derivatives use centered stencils
/// where the mask allows, second-order one-sided stencils otherwise, and at the
/// few nodes where neither fits (acute corners) the stencil of the nearest node
/// that has one. All stencils are exact on quadratics.
class HessianOperator {
public:
    explicit HessianOperator(const Grid2D& grid);

    struct Parts {
        double xx = 0.0;  // sum omega u_xx^2
        double xy = 0.0;  // sum omega u_xy^2 (counted once)
        double yy = 0.0;  // sum omega u_yy^2
        double total() const { return xx + 2.0 * xy + yy; }
    };

    const Grid2D& grid() const { return grid_; }
    Parts parts(std::span<const double> u) const;
    double energy(std::span<const double> u) const { return parts(u).total(); }
    /// Gradient 2 A u of the quadratic form.
    void gradient(std::span<const double> u, std::span<double> grad) const;
    /// Symmetric positive semidefinite matrix A with E(u) = u^T A u.
    const RowSparse& quadratic_form() const { return form_; }

    const RowSparse& dxx() const { return dxx_; }
    const RowSparse& dxy() const { return dxy_; }
    const RowSparse& dyy() const { return dyy_; }

private:
    Grid2D grid_;
    RowSparse dxx_;
    RowSparse dxy_;
    RowSparse dyy_;
    RowSparse form_;
};

}  // namespace pfscale
