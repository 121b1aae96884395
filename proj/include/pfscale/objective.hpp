#pragma once

#include <Eigen/Dense>
#include <Eigen/SparseCore>
#include <cstddef>
#include <optional>
#include <span>

namespace pfscale {

/// Symmetric positive semidefinite approximation of an energy's Hessian.
/// Exactly one of the two representations is filled.
struct HessianModel {
    Eigen::SparseMatrix<double> sparse;
    Eigen::MatrixXd dense;
    bool is_dense() const { return dense.size() > 0; }
};

/// A smooth discrete energy over a flat vector of nodal values.
class Objective {
public:
    virtual ~Objective() = default;
    virtual std::size_t size() const = 0;
    /// Returns E(x); writes dE/dx into grad when grad is non-empty.
    virtual double evaluate(std::span<const double> x, std::span<double> grad) const = 0;
    /// Optional preconditioner for the minimizer.
    virtual std::optional<HessianModel> hessian_model() const { return std::nullopt; }
};

}  // namespace pfscale
