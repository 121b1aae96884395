#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "pfscale/energy.hpp"
#include "pfscale/grid.hpp"
#include "pfscale/optimize.hpp"
#include "pfscale/potentials.hpp"

namespace pfscale {

enum class InitKind { LinearInterp, ProfileAnsatz, BoundaryLayerAnsatz };

struct SweepConfig {
    double L = 1.0;                   // target eps * lambda^{2/3}
    std::vector<double> eps_list;     // strictly decreasing
    DoubleWell W = quartic_well(-1.0, 1.0);
    DoubleWell V = quartic_well(-1.0, 1.0);

    // 1-D domain (f1d, g1d)
    double lo = -1.0;
    double hi = 1.0;
    int n = 256;              // cells (1-D) or cells along x (2-D)
    int cells_per_layer = 0;  // 1-D only: raise n so the layer (eps or rho) spans this many cells
    int max_n = 4096;

    // 2-D rectangle [0, width] x [0, height]; the boundary potential acts on the bottom edge.
    double width = 2.0;
    double height = 1.0;

    bool mass_constraint = true;           // 1-D, and the area average in 2-D
    bool boundary_mass_constraint = true;  // 2-D bottom-edge average
    std::optional<double> mass_target;           // default: midpoint of the W wells
    std::optional<double> boundary_mass_target;  // 2-D, default: midpoint of the V wells

    InitKind init = InitKind::ProfileAnsatz;
    std::optional<double> fixed_lambda;  // replaces (L/eps)^{3/2} when set

    // Optimal profiles for the ansatz initializers; computed when absent.
    std::optional<ScalarField1D> m_profile;
    std::optional<ScalarField1D> c_profile;

    OptimizeOptions optimize;
    bool timing = false;  // wall_ms stays 0 unless set
};

struct SweepRecord {
    double eps = 0.0;
    double lambda = 0.0;
    double L = 0.0;
    double min_energy = 0.0;
    EnergyBreakdown breakdown;
    bool converged = false;
    std::int64_t wall_ms = 0;
    int n = 0;
    int iterations = 0;
    double grad_norm = 0.0;
    double init_energy = 0.0;     // lowest initializer energy (after mass projection)
    bool under_resolved = false;  // boundary layer thinner than 4 cells
    std::optional<ScalarField1D> field;  // 1-D minimizer
};

/// m_profile((x - jump_at)/eps) inside the eps-scaled window, its end values outside.
ScalarField1D profile_ansatz_1d(const ScalarField1D& m_profile, double eps, double jump_at,
                                const Grid1D& grid);

/// Averaging extension of the rho-rescaled boundary profile (centered at
/// center_x) up to height rho*R, then a cubic in y over the next max(rho*R, 4 eps)
/// reaching interior(x) (or the nearest boundary well) with zero slope; constant above.
ScalarField2D boundary_layer_ansatz_2d(const ScalarField1D& c_profile, const EpsLambda& el,
                                       const Grid2D& grid, double center_x,
                                       const std::function<double(double)>& interior = {});

std::vector<SweepRecord> sweep_f1d(const SweepConfig& cfg);
std::vector<SweepRecord> sweep_g1d(const SweepConfig& cfg);
std::vector<SweepRecord> sweep_full2d(const SweepConfig& cfg);

struct PlateauReport {
    double last = 0.0;
    double previous = 0.0;
    double rel_change = 0.0;
    bool plateau = false;
};

/// Relative change of min_energy between the last two records (needs >= 4 records).
PlateauReport plateau(const std::vector<SweepRecord>& records, double rel_tol = 0.05);

}  // namespace pfscale
