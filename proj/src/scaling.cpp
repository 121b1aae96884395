#include "pfscale/scaling.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <exception>
#include <limits>

#include "pfscale/constants.hpp"
#include "pfscale/lifting.hpp"

namespace pfscale {

namespace {

double interp(const ScalarField1D& p, double s) {
    const Grid1D& g = p.grid();
    if (s <= g.lo()) return p[0];
    if (s >= g.hi()) return p[p.size() - 1];
    const double pos = (s - g.lo()) / g.h();
    const std::size_t k = std::min(static_cast<std::size_t>(pos), p.size() - 2);
    const double t = pos - static_cast<double>(k);
    return (1.0 - t) * p[k] + t * p[k + 1];
}

void validate(const SweepConfig& cfg) {
    if (cfg.eps_list.empty()) throw InvalidArgument("sweep: eps_list is empty");
    for (std::size_t k = 0; k < cfg.eps_list.size(); ++k) {
        if (!(cfg.eps_list[k] > 0.0)) throw InvalidArgument("sweep: eps values must be positive");
        if (k > 0 && !(cfg.eps_list[k] < cfg.eps_list[k - 1])) {
            throw InvalidArgument("sweep: eps_list must be strictly decreasing");
        }
    }
    if (!(cfg.L > 0.0)) throw InvalidArgument("sweep: L must be positive");
    if (cfg.fixed_lambda && !(*cfg.fixed_lambda > 0.0)) {
        throw InvalidArgument("sweep: fixed lambda must be positive");
    }
}

EpsLambda coupling(const SweepConfig& cfg, double eps) {
    return cfg.fixed_lambda ? EpsLambda(eps, *cfg.fixed_lambda) : EpsLambda::critical(eps, cfg.L);
}

int resolve_cells(const SweepConfig& cfg, double layer) {
    int n = cfg.n;
    if (cfg.cells_per_layer > 0) {
        const double want = std::ceil(cfg.cells_per_layer * (cfg.hi - cfg.lo) / layer);
        n = static_cast<int>(std::min<double>(std::max<double>(n, want), cfg.max_n));
    }
    if (n % 2 != 0) ++n;
    return n;
}

// Position of a single a -> b step whose average is `target`.
double step_position(double lo, double hi, double a, double b, double target) {
    const double c = (b * hi - a * lo - target * (hi - lo)) / (b - a);
    return std::clamp(c, lo + 0.01 * (hi - lo), hi - 0.01 * (hi - lo));
}

struct Run {
    OptimizeResult result;
    double init_energy = std::numeric_limits<double>::infinity();
};

Run run_starts(const Objective& energy, const std::vector<std::vector<double>>& inits,
               const std::vector<Constraint>& cons, const OptimizeOptions& base) {
    Run best;
    bool have = false;
    for (const auto& init : inits) {
        double e0 = 0.0;
        OptimizeOptions opt = base;
        opt.on_iterate = [&](int it, double e) {
            if (it == 0) e0 = e;
            if (base.on_iterate) base.on_iterate(it, e);
        };
        OptimizeResult r = minimize(energy, init, cons, opt);
        best.init_energy = std::min(best.init_energy, e0);
        if (!have || r.energy < best.result.energy) {
            best.result = std::move(r);
            have = true;
        }
    }
    return best;
}

template <class Fn>
std::vector<SweepRecord> for_each_eps(const SweepConfig& cfg, Fn&& one) {
    const int count = static_cast<int>(cfg.eps_list.size());
    std::vector<SweepRecord> out(cfg.eps_list.size());
    std::vector<std::exception_ptr> errors(cfg.eps_list.size());
#pragma omp parallel for schedule(dynamic, 1)
    for (int k = 0; k < count; ++k) {
        try {
            const auto t0 = std::chrono::steady_clock::now();
            out[k] = one(cfg.eps_list[k]);
            if (cfg.timing) {
                out[k].wall_ms = std::chrono::duration_cast<std::chrono::milliseconds>(
                                     std::chrono::steady_clock::now() - t0)
                                     .count();
            }
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& e : errors) {
        if (e) std::rethrow_exception(e);
    }
    return out;
}

SweepRecord finish(double eps, const EpsLambda& el, int n, const Run& run, EnergyBreakdown b) {
    SweepRecord rec;
    rec.eps = eps;
    rec.lambda = el.lambda();
    rec.L = el.L();
    rec.breakdown = b;
    rec.min_energy = b.total;
    rec.converged = run.result.converged;
    rec.n = n;
    rec.iterations = run.result.iterations;
    rec.grad_norm = run.result.grad_norm;
    rec.init_energy = run.init_energy;
    return rec;
}

ScalarField1D default_m_profile(const DoubleWell& W) {
    EstimateOptions o;
    o.extrapolate = false;
    return compute_m(W, 5.0, 256, o).profile;
}

ScalarField1D default_c_profile(const DoubleWell& V) {
    EstimateOptions o;
    o.extrapolate = false;
    return compute_c_over(V, 4.0, 128, o).profile;
}

std::vector<std::vector<double>> one_d_inits(const SweepConfig& cfg, const Grid1D& g, double a,
                                             double b, const ScalarField1D* profile, double scale) {
    std::vector<std::vector<double>> inits;
    std::vector<double> lin(g.nodes());
    for (std::size_t i = 0; i < lin.size(); ++i) {
        lin[i] = a + (b - a) * (g.node(i) - g.lo()) / g.length();
    }
    inits.push_back(std::move(lin));
    if (cfg.init != InitKind::LinearInterp && profile) {
        const double target = cfg.mass_target.value_or(0.5 * (a + b));
        const double c = step_position(g.lo(), g.hi(), a, b, target);
        try {
            auto f = profile_ansatz_1d(*profile, scale, c, g);
            inits.emplace_back(f.values().begin(), f.values().end());
        } catch (const InvalidArgument&) {
            // window does not fit at this eps; the linear start remains
        }
    }
    if (!cfg.mass_constraint) {
        inits.emplace_back(g.nodes(), a);
        inits.emplace_back(g.nodes(), b);
    }
    return inits;
}

std::vector<Constraint> one_d_mass(const SweepConfig& cfg, const Grid1D& g, double a, double b) {
    if (!cfg.mass_constraint) return {};
    const double target = cfg.mass_target.value_or(0.5 * (a + b));
    return {Constraint::mass_average(g.trapezoid_weights(), target, {std::min(a, b), std::max(a, b)})};
}

}  // namespace

ScalarField1D profile_ansatz_1d(const ScalarField1D& m_profile, double eps, double jump_at,
                                const Grid1D& grid) {
    if (!(eps > 0.0)) throw InvalidArgument("profile_ansatz_1d: eps must be positive");
    if (!(jump_at > grid.lo() && jump_at < grid.hi())) {
        throw InvalidArgument("profile_ansatz_1d: jump_at must be interior to the grid");
    }
    const double wlo = jump_at + eps * m_profile.grid().lo();
    const double whi = jump_at + eps * m_profile.grid().hi();
    const double tol = 1e-12 * grid.length();
    if (wlo < grid.lo() - tol || whi > grid.hi() + tol) {
        throw InvalidArgument("profile_ansatz_1d: the eps-scaled window exceeds the domain");
    }
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = interp(m_profile, (grid.node(i) - jump_at) / eps);
    return ScalarField1D(grid, std::move(v));
}

ScalarField2D boundary_layer_ansatz_2d(const ScalarField1D& c_profile, const EpsLambda& el,
                                       const Grid2D& grid, double center_x,
                                       const std::function<double(double)>& interior) {
    if (grid.shape() != DomainShape::Rectangle) {
        throw InvalidArgument("boundary_layer_ansatz_2d: rectangle grids only");
    }
    const double rho = el.rho();
    const double R = std::max(std::abs(c_profile.grid().lo()), std::abs(c_profile.grid().hi()));
    const double Y = rho * R;
    const double height = grid.ny() * grid.h();
    if (Y > 0.5 * height) {
        throw InvalidArgument("boundary_layer_ansatz_2d: rho*R exceeds half the domain height");
    }
    const double ell = std::min(std::max(Y, 4.0 * el.eps()), height - Y);
    const double alpha = c_profile[0];
    const double beta = c_profile[c_profile.size() - 1];

    const Grid1D tg(grid.x(0), grid.x(grid.nx()), grid.nx());
    std::vector<double> tv(tg.nodes());
    for (std::size_t i = 0; i < tv.size(); ++i) tv[i] = interp(c_profile, (tg.node(i) - center_x) / rho);
    const ScalarField1D trace(tg, tv);
    const TraceAverager avg(trace);

    std::vector<double> u(grid.node_count());
    for (int i = 0; i <= grid.nx(); ++i) {
        const double x = grid.x(i);
        const double target =
            interior ? interior(x) : (tv[static_cast<std::size_t>(i)] < 0.5 * (alpha + beta) ? alpha : beta);
        const double w = avg(x, Y);
        const double z = (avg.trace(x + Y) + avg.trace(x - Y)) / (2.0 * Y) - w / Y;
        const Cubic p = cubic_match(Side::Right, target, w, z, Y, ell);
        for (int j = 0; j <= grid.ny(); ++j) {
            const double y = j * grid.h();
            double v;
            if (j == 0) {
                v = tv[static_cast<std::size_t>(i)];
            } else if (y <= Y) {
                v = avg(x, y);
            } else if (y < Y + ell) {
                v = p(y);
            } else {
                v = target;
            }
            u[grid.index(i, j)] = v;
        }
    }
    return ScalarField2D(grid, std::move(u));
}

std::vector<SweepRecord> sweep_f1d(const SweepConfig& cfg) {
    validate(cfg);
    const double a = cfg.W.well_lo();
    const double b = cfg.W.well_hi();
    std::optional<ScalarField1D> prof = cfg.m_profile;
    if (!prof && cfg.init != InitKind::LinearInterp) prof = default_m_profile(cfg.W);
    return for_each_eps(cfg, [&](double eps) {
        const EpsLambda el = coupling(cfg, eps);
        const int n = resolve_cells(cfg, eps);
        const Grid1D g(cfg.lo, cfg.hi, n);
        BulkProfileEnergy energy(g, cfg.W, eps * eps * eps, 1.0 / eps);
        const auto inits = one_d_inits(cfg, g, a, b, prof ? &*prof : nullptr, eps);
        const Run run = run_starts(energy, inits, one_d_mass(cfg, g, a, b), cfg.optimize);
        SweepRecord rec = finish(eps, el, n, run, energy.breakdown(run.result.x));
        rec.field = ScalarField1D(g, run.result.x);
        return rec;
    });
}

std::vector<SweepRecord> sweep_g1d(const SweepConfig& cfg) {
    validate(cfg);
    const double a = cfg.V.well_lo();
    const double b = cfg.V.well_hi();
    std::optional<ScalarField1D> prof = cfg.c_profile;
    if (!prof && cfg.init != InitKind::LinearInterp) prof = default_c_profile(cfg.V);
    return for_each_eps(cfg, [&](double eps) {
        const EpsLambda el = coupling(cfg, eps);
        const int n = resolve_cells(cfg, el.rho());
        const Grid1D g(cfg.lo, cfg.hi, n);
        BoundaryProfileEnergy energy(g, cfg.V, eps * eps * eps / 8.0, el.lambda(),
                                     FractionalDomain::Bounded);
        const auto inits = one_d_inits(cfg, g, a, b, prof ? &*prof : nullptr, el.rho());
        const Run run = run_starts(energy, inits, one_d_mass(cfg, g, a, b), cfg.optimize);
        SweepRecord rec = finish(eps, el, n, run, energy.breakdown(run.result.x));
        rec.under_resolved = el.rho() / g.h() < 4.0;
        rec.field = ScalarField1D(g, run.result.x);
        return rec;
    });
}

std::vector<SweepRecord> sweep_full2d(const SweepConfig& cfg) {
    validate(cfg);
    if (cfg.n > 192) throw InvalidArgument("sweep_full2d: n is capped at 192 cells per axis");
    if (cfg.eps_list.back() < 1.0 / 48.0 - 1e-12) {
        throw InvalidArgument("sweep_full2d: eps must be at least 1/48");
    }
    const Grid2D grid = make_rectangle_grid(0.0, 0.0, cfg.width, cfg.height, cfg.n);
    const double a = cfg.W.well_lo();
    const double b = cfg.W.well_hi();
    const double alpha = cfg.V.well_lo();
    const double beta = cfg.V.well_hi();
    const double target = cfg.mass_target.value_or(0.5 * (a + b));
    const double btarget = cfg.boundary_mass_target.value_or(0.5 * (alpha + beta));

    std::vector<Constraint> cons;
    const auto bottom = edge_nodes(grid, Edge::Bottom);
    if (cfg.mass_constraint) {
        cons.push_back(Constraint::mass_average(grid.area_weights(), target,
                                                {std::min(a, b), std::max(a, b)}));
    }
    if (cfg.boundary_mass_constraint) {
        std::vector<double> bw(grid.node_count(), 0.0);
        for (std::size_t q = 0; q < bottom.size(); ++q) {
            bw[bottom[q]] = (q == 0 || q + 1 == bottom.size()) ? 0.5 * grid.h() : grid.h();
        }
        cons.push_back(Constraint::mass_average(std::move(bw), btarget,
                                                {std::min(alpha, beta), std::max(alpha, beta)}));
    }

    std::optional<ScalarField1D> mprof = cfg.m_profile;
    std::optional<ScalarField1D> cprof = cfg.c_profile;
    if (cfg.init != InitKind::LinearInterp) {
        if (!mprof) mprof = default_m_profile(cfg.W);
        if (!cprof) cprof = default_c_profile(cfg.V);
    }
    const double cx = step_position(0.0, cfg.width, a, b, target);
    const double cxb = step_position(0.0, cfg.width, alpha, beta, btarget);

    return for_each_eps(cfg, [&](double eps) {
        const EpsLambda el = coupling(cfg, eps);
        FullEnergy2D energy(grid, cfg.W, cfg.V, el, Edge::Bottom);

        std::vector<std::vector<double>> inits;
        if (cfg.init == InitKind::LinearInterp) {
            std::vector<double> lin(grid.node_count());
            for (int j = 0; j <= grid.ny(); ++j) {
                for (int i = 0; i <= grid.nx(); ++i) {
                    lin[grid.index(i, j)] = a + (b - a) * grid.x(i) / cfg.width;
                }
            }
            inits.push_back(std::move(lin));
        } else {
            const ScalarField1D& mp = *mprof;
            auto interior = [&](double x) { return cfg.mass_constraint ? interp(mp, (x - cx) / eps) : a; };
            std::vector<double> u;
            try {
                const ScalarField2D bl = boundary_layer_ansatz_2d(*cprof, el, grid, cxb, interior);
                u.assign(bl.values().begin(), bl.values().end());
            } catch (const InvalidArgument&) {
                u.resize(grid.node_count());
                for (int j = 0; j <= grid.ny(); ++j) {
                    for (int i = 0; i <= grid.nx(); ++i) u[grid.index(i, j)] = interior(grid.x(i));
                }
            }
            inits.push_back(std::move(u));
        }
        const Run run = run_starts(energy, inits, cons, cfg.optimize);
        SweepRecord rec = finish(eps, el, cfg.n, run, energy.breakdown(run.result.x));
        rec.under_resolved = el.rho() / grid.h() < 4.0;
        return rec;
    });
}

PlateauReport plateau(const std::vector<SweepRecord>& records, double rel_tol) {
    if (records.size() < 4) throw InvalidArgument("plateau: need at least 4 records");
    PlateauReport p;
    p.last = records.back().min_energy;
    p.previous = records[records.size() - 2].min_energy;
    p.rel_change = std::abs(p.last - p.previous) / std::max(std::abs(p.last), 1e-300);
    p.plateau = p.rel_change <= rel_tol;
    return p;
}

}  // namespace pfscale
