#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "pfscale/energy.hpp"
#include "pfscale/grid.hpp"
#include "pfscale/hessian2d.hpp"

namespace pfscale {

/// The trace has (numerically) zero |g'|_{H^{1/2}}; the lifting ratio is undefined.
class DegenerateTrace : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// The linear solve did not reach the requested residual.
class NoConvergence : public std::runtime_error {
public:
    NoConvergence(const std::string& what, double residual)
        : std::runtime_error(what), residual_(residual) {}
    double residual() const { return residual_; }

private:
    double residual_;
};

/// Window averages (1/2y) int_{x-y}^{x+y} g of a sampled trace.
///
/// The cumulative integral G of g is built cell by cell with a four-point rule
/// that is exact for cubic g, and evaluated between nodes by cubic Hermite
/// interpolation with G' = g. Averages are therefore exact for quadratic g at
/// any (x, y). Outside the sampled interval g is continued by its end values.
class TraceAverager {
public:
    explicit TraceAverager(const ScalarField1D& g);

    double cumulative(double t) const;
    /// Value at (x, y); y = 0 returns g(x) (linear interpolation between nodes).
    double operator()(double x, double y) const;
    double trace(double x) const;

private:
    Grid1D grid_;
    std::vector<double> g_;
    std::vector<double> G_;
};

/// Averaging extension on a TriangleTPlus (or Diamond, using |y|) grid whose
/// radius equals the trace length. The y = 0 row is g itself.
ScalarField2D average_extension(const ScalarField1D& g, const Grid2D& grid);

enum class LiftMethod { ExplicitAverage, QuadraticMinimum };

struct LiftReport {
    double numerator = 0.0;    // discrete Hessian energy of the lift
    double denominator = 0.0;  // |g'|^2_{H^{1/2}(0,R)}
    double ratio = 0.0;
    LiftMethod method = LiftMethod::ExplicitAverage;
    double xx = 0.0;  // sum omega u_xx^2
    double xy = 0.0;  // sum omega u_xy^2
    double yy = 0.0;  // sum omega u_yy^2
};

std::string to_string(LiftMethod m);

/// Ratio of the Hessian energy of the averaging extension to |g'|^2_{H^{1/2}}.
/// The triangle grid uses the trace's cell count (which must be even).
LiftReport lifting_ratio_explicit(const ScalarField1D& g);
LiftReport lifting_ratio_explicit(const ScalarField1D& g, ScalarField2D* extension);

/// Minimum Hessian energy over fields on a TriangleTPlus grid whose bottom row
/// equals the trace. The quadratic problem is factored once and can be solved
/// for many traces on the same grid.
class ZetaSolver {
public:
    explicit ZetaSolver(const Grid2D& grid);
    ~ZetaSolver();
    ZetaSolver(ZetaSolver&&) noexcept;
    ZetaSolver& operator=(ZetaSolver&&) noexcept;

    /// g must live on [0, R] with the grid's cell count.
    /// Throws DegenerateTrace or NoConvergence.
    LiftReport solve(const ScalarField1D& g, double tol = 1e-10, ScalarField2D* minimizer = nullptr) const;
    const Grid2D& grid() const;

private:
    struct Impl;
    std::unique_ptr<Impl> impl_;
};

LiftReport estimate_zeta(const ScalarField1D& g, const Grid2D& grid, double tol = 1e-10);

struct HardyResult {
    double lhs = 0.0;
    double rhs = 0.0;
    bool pass = false;
};

/// lhs = int_a^b (x-a)^{-r} int_a^x u,  rhs = 1/(r-1) int_a^b u(x) (x-a)^{1-r},
/// both integrated exactly for the piecewise-linear interpolant of u.
/// Divergent integrals are reported as +inf. pass iff lhs <= rhs (1 + slack).
HardyResult hardy_check(const ScalarField1D& u, double r, double slack = 1e-12);

struct SeminormComparison {
    double h32 = 0.0;
    double bound = 0.0;
    bool pass = false;
};

/// h32 = |u|^2_{H^{3/2}}, bound = (1/8) |u'|^2_{H^{1/2}}; pass iff h32 <= bound + slack.
SeminormComparison seminorm_comparison_check(const ScalarField1D& u, double slack = 0.0);

}  // namespace pfscale
