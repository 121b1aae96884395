#pragma once

// Serial reference implementations of the discrete energies.
//
// Written directly from the quadrature definitions with plain loops and no
// shared code with the parallel kernels (mask, area weights and Hessian
// stencil selection are recomputed here from the grid indices). Used as the
// oracle in tests and as the baseline in the benchmark.

#include "pfscale/energy.hpp"

namespace pfscale::reference {

double bending_energy(const ScalarField1D& f);
double potential_integral(const ScalarField1D& f, const DoubleWell& w);
double h12_seminorm(const ScalarField1D& g);
double h12_seminorm_fullline(const ScalarField1D& g);
double derivative_seminorm(const ScalarField1D& f);
double derivative_seminorm_fullline(const ScalarField1D& f);
double h32_seminorm(const ScalarField1D& u);

struct HessianParts {
    double xx = 0.0;
    double xy = 0.0;
    double yy = 0.0;
    double total() const { return xx + 2.0 * xy + yy; }
};
HessianParts hessian_parts_2d(const ScalarField2D& u);
double hessian_energy_2d(const ScalarField2D& u);

EnergyBreakdown f_eps(const ScalarField1D& f, const DoubleWell& w, double eps);
EnergyBreakdown g_eps(const ScalarField1D& v, const DoubleWell& V, const EpsLambda& el);
EnergyBreakdown full_energy_2d(const ScalarField2D& u, const DoubleWell& W, const DoubleWell& V,
                               const EpsLambda& el, Edge boundary_edge);

}  // namespace pfscale::reference
