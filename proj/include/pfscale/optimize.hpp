#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "pfscale/objective.hpp"

namespace pfscale {

/// Either a set of frozen nodal values or a weighted-average (mass) equality.
struct Constraint {
    enum class Kind { DirichletNodes, MassAverage };

    Kind kind = Kind::DirichletNodes;
    std::vector<std::size_t> nodes;   // DirichletNodes
    std::vector<double> values;       // DirichletNodes
    std::vector<double> weights;      // MassAverage, one per unknown (0 = not involved)
    double target = 0.0;              // MassAverage
    std::pair<double, double> band;   // MassAverage, admissible open interval for target

    static Constraint dirichlet(std::vector<std::size_t> nodes, std::vector<double> values);
    /// sum(weights * x) / sum(weights) == target, with target strictly inside band.
    static Constraint mass_average(std::vector<double> weights, double target,
                                   std::pair<double, double> band);

    /// Weighted average of x under a MassAverage constraint.
    double average(std::span<const double> x) const;
};

/// Energy or gradient became NaN/Inf during minimization.
class NonFiniteError : public std::runtime_error {
public:
    NonFiniteError(const std::string& what, int iteration)
        : std::runtime_error(what + " (iteration " + std::to_string(iteration) + ")"),
          iteration_(iteration) {}
    int iteration() const { return iteration_; }

private:
    int iteration_;
};

struct OptimizeOptions {
    double tol = 1e-8;     // max-norm of the projected gradient
    int max_iter = 20000;
    int memory = 20;       // L-BFGS pairs
    bool precondition = true;  // use the energy's Hessian model when it has one
    /// Called with (iteration, energy) after the initial evaluation and every accepted step.
    std::function<void(int, double)> on_iterate;
};

struct OptimizeResult {
    std::vector<double> x;
    double energy = 0.0;
    int iterations = 0;
    double grad_norm = 0.0;
    bool converged = false;
};

/// Gradient of the objective with frozen nodes zeroed and, when mass constraints
/// are present, projected onto their tangent space.
std::vector<double> projected_gradient(const Objective& energy, std::span<const double> x,
                                       const std::vector<Constraint>& constraints);

/// Projected L-BFGS with a backtracking (Armijo, halving) line search.
/// init must already carry the Dirichlet values; it is projected onto the mass
/// constraints before the first step.
OptimizeResult minimize(const Objective& energy, std::vector<double> init,
                        const std::vector<Constraint>& constraints,
                        const OptimizeOptions& options = {});

/// Runs minimize from every initial point and returns the lowest-energy result.
/// Ties go to the earliest start.
OptimizeResult minimize_multistart(const Objective& energy,
                                   const std::vector<std::vector<double>>& inits,
                                   const std::vector<Constraint>& constraints,
                                   const OptimizeOptions& options = {});

}  // namespace pfscale
