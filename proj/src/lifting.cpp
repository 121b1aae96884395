#include "pfscale/lifting.hpp"

#include <Eigen/SparseCholesky>
#include <algorithm>
#include <cmath>
#include <limits>

namespace pfscale {

TraceAverager::TraceAverager(const ScalarField1D& g)
    : grid_(g.grid()), g_(g.values().begin(), g.values().end()), G_(g.size(), 0.0) {
    const std::size_t n = g_.size() - 1;
    const double h = grid_.h();
    const double c = h / 24.0;
    for (std::size_t k = 0; k < n; ++k) {
        double cell;
        if (k == 0) {
            cell = c * (9.0 * g_[0] + 19.0 * g_[1] - 5.0 * g_[2] + g_[3]);
        } else if (k == n - 1) {
            cell = c * (9.0 * g_[n] + 19.0 * g_[n - 1] - 5.0 * g_[n - 2] + g_[n - 3]);
        } else {
            cell = c * (-g_[k - 1] + 13.0 * g_[k] + 13.0 * g_[k + 1] - g_[k + 2]);
        }
        G_[k + 1] = G_[k] + cell;
    }
}

double TraceAverager::cumulative(double t) const {
    const std::size_t n = g_.size() - 1;
    if (t <= grid_.lo()) return G_[0] + g_[0] * (t - grid_.lo());
    if (t >= grid_.hi()) return G_[n] + g_[n] * (t - grid_.hi());
    const double h = grid_.h();
    const double pos = (t - grid_.lo()) / h;
    const std::size_t k = std::min(static_cast<std::size_t>(pos), n - 1);
    const double s = pos - static_cast<double>(k);
    const double s2 = s * s;
    const double s3 = s2 * s;
    const double h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
    const double h10 = s3 - 2.0 * s2 + s;
    const double h01 = -2.0 * s3 + 3.0 * s2;
    const double h11 = s3 - s2;
    return h00 * G_[k] + h10 * h * g_[k] + h01 * G_[k + 1] + h11 * h * g_[k + 1];
}

double TraceAverager::trace(double x) const {
    const std::size_t n = g_.size() - 1;
    if (x <= grid_.lo()) return g_[0];
    if (x >= grid_.hi()) return g_[n];
    const double pos = (x - grid_.lo()) / grid_.h();
    const std::size_t k = std::min(static_cast<std::size_t>(pos), n - 1);
    const double s = pos - static_cast<double>(k);
    return (1.0 - s) * g_[k] + s * g_[k + 1];
}

double TraceAverager::operator()(double x, double y) const {
    if (y == 0.0) return trace(x);
    return (cumulative(x + y) - cumulative(x - y)) / (2.0 * y);
}

ScalarField2D average_extension(const ScalarField1D& g, const Grid2D& grid) {
    if (grid.shape() == DomainShape::Rectangle) {
        throw InvalidArgument("average_extension: expects a TriangleTPlus or Diamond grid");
    }
    const double len = g.grid().length();
    if (std::abs(grid.radius() - len) > 1e-12 * len) {
        throw InvalidArgument("average_extension: grid radius must equal the trace length");
    }
    const TraceAverager avg(g);
    const bool same_nodes = grid.nx() == g.grid().cells();
    const double shift = g.grid().lo() - grid.x0();
    const int mid = grid.shape() == DomainShape::Diamond ? grid.nx() / 2 : 0;
    std::vector<double> u(grid.node_count(), 0.0);
    for (int j = 0; j <= grid.ny(); ++j) {
        const int dj = std::abs(j - mid);
        const double y = static_cast<double>(dj) * grid.h();
        for (int i = 0; i <= grid.nx(); ++i) {
            if (!grid.masked(i, j)) continue;
            const double x = grid.x(i) + shift;
            double v;
            if (dj == 0) {
                v = same_nodes ? g[static_cast<std::size_t>(i)] : avg.trace(x);
            } else {
                v = avg(x, y);
            }
            u[grid.index(i, j)] = v;
        }
    }
    return ScalarField2D(grid, std::move(u));
}

std::string to_string(LiftMethod m) {
    return m == LiftMethod::ExplicitAverage ? "explicit_average" : "quadratic_minimum";
}

namespace {

double trace_denominator(const ScalarField1D& g) {
    const double den = derivative_seminorm(g);
    double scale = 0.0;
    const double h = g.grid().h();
    for (std::size_t k = 0; k + 1 < g.size(); ++k) {
        const double s = (g[k + 1] - g[k]) / h;
        scale += h * s * s;
    }
    if (!(den > 1e-12 * std::max(1.0, scale))) {
        throw DegenerateTrace("lifting: trace is affine (|g'|_{H^{1/2}} vanishes); ratio undefined");
    }
    return den;
}

LiftReport make_report(const HessianOperator& op, std::span<const double> u, double den,
                       LiftMethod method) {
    const auto p = op.parts(u);
    LiftReport r;
    r.numerator = p.total();
    r.denominator = den;
    r.ratio = r.numerator / den;
    r.method = method;
    r.xx = p.xx;
    r.xy = p.xy;
    r.yy = p.yy;
    return r;
}

Grid2D triangle_for(const ScalarField1D& g) {
    const int n = g.grid().cells();
    if (n % 2 != 0) throw InvalidArgument("lifting: trace cell count must be even");
    return make_triangle_grid(g.grid().length(), n);
}

}  // namespace

LiftReport lifting_ratio_explicit(const ScalarField1D& g) { return lifting_ratio_explicit(g, nullptr); }

LiftReport lifting_ratio_explicit(const ScalarField1D& g, ScalarField2D* extension) {
    const double den = trace_denominator(g);
    const Grid2D grid = triangle_for(g);
    ScalarField2D u = average_extension(g, grid);
    HessianOperator op(grid);
    LiftReport r = make_report(op, u.values(), den, LiftMethod::ExplicitAverage);
    if (extension) *extension = std::move(u);
    return r;
}

// ---------------------------------------------------------------------------

using ColSparse = Eigen::SparseMatrix<double, Eigen::ColMajor, int>;

struct ZetaSolver::Impl {
    explicit Impl(const Grid2D& g) : grid(g), op(g) {}

    Grid2D grid;
    HessianOperator op;
    std::vector<int> unknown;         // node -> unknown index or -1
    std::vector<std::size_t> known;   // nodes with prescribed values
    std::vector<std::size_t> bottom;  // bottom-row nodes, by i
    ColSparse Aff;
    ColSparse Afk;
    Eigen::SimplicialLDLT<ColSparse> ldlt;
};

ZetaSolver::ZetaSolver(const Grid2D& grid) : impl_(std::make_unique<Impl>(grid)) {
    if (grid.shape() != DomainShape::TriangleTPlus) {
        throw InvalidArgument("ZetaSolver: expects a TriangleTPlus grid");
    }
    Impl& m = *impl_;
    const RowSparse& A = m.op.quadratic_form();
    const std::size_t N = grid.node_count();

    // Nodes that enter no stencil have an empty row and do not affect the energy.
    std::vector<unsigned char> active(N, 0);
    for (int r = 0; r < A.outerSize(); ++r) {
        for (RowSparse::InnerIterator it(A, r); it; ++it) {
            if (it.value() != 0.0) active[static_cast<std::size_t>(r)] = 1;
        }
    }
    // One interior node is pinned: u -> u + c*y leaves the energy unchanged.
    const std::size_t pinned = grid.index(grid.nx() / 2, 1);

    m.unknown.assign(N, -1);
    int count = 0;
    for (int j = 0; j <= grid.ny(); ++j) {
        for (int i = 0; i <= grid.nx(); ++i) {
            if (!grid.masked(i, j)) continue;
            const std::size_t k = grid.index(i, j);
            if (j == 0) m.bottom.push_back(k);
            if (j == 0 || k == pinned || !active[k]) {
                m.known.push_back(k);
            } else {
                m.unknown[k] = count++;
            }
        }
    }
    std::vector<int> known_pos(N, -1);
    for (std::size_t q = 0; q < m.known.size(); ++q) known_pos[m.known[q]] = static_cast<int>(q);

    std::vector<Eigen::Triplet<double, int>> tff, tfk;
    for (int r = 0; r < A.outerSize(); ++r) {
        const int ur = m.unknown[static_cast<std::size_t>(r)];
        if (ur < 0) continue;
        for (RowSparse::InnerIterator it(A, r); it; ++it) {
            const std::size_t c = static_cast<std::size_t>(it.col());
            if (m.unknown[c] >= 0) {
                tff.emplace_back(ur, m.unknown[c], it.value());
            } else if (known_pos[c] >= 0) {
                tfk.emplace_back(ur, known_pos[c], it.value());
            }
        }
    }
    m.Aff.resize(count, count);
    m.Aff.setFromTriplets(tff.begin(), tff.end());
    m.Afk.resize(count, static_cast<int>(m.known.size()));
    m.Afk.setFromTriplets(tfk.begin(), tfk.end());
    m.ldlt.compute(m.Aff);
    if (m.ldlt.info() != Eigen::Success) {
        throw NoConvergence("ZetaSolver: factorization failed", std::numeric_limits<double>::infinity());
    }
}

ZetaSolver::~ZetaSolver() = default;
ZetaSolver::ZetaSolver(ZetaSolver&&) noexcept = default;
ZetaSolver& ZetaSolver::operator=(ZetaSolver&&) noexcept = default;

const Grid2D& ZetaSolver::grid() const { return impl_->grid; }

LiftReport ZetaSolver::solve(const ScalarField1D& g, double tol, ScalarField2D* minimizer) const {
    const Impl& m = *impl_;
    if (g.grid().cells() != m.grid.nx() ||
        std::abs(g.grid().length() - m.grid.radius()) > 1e-12 * m.grid.radius()) {
        throw InvalidArgument("ZetaSolver: trace grid does not match the triangle grid");
    }
    if (!(tol > 0.0)) throw InvalidArgument("ZetaSolver: tol must be positive");
    const double den = trace_denominator(g);

    // Known values: trace on the bottom row, the explicit extension elsewhere.
    ScalarField2D start = average_extension(g, m.grid);
    std::vector<double> u(start.values().begin(), start.values().end());

    Eigen::VectorXd uk(static_cast<Eigen::Index>(m.known.size()));
    for (std::size_t q = 0; q < m.known.size(); ++q) uk[static_cast<Eigen::Index>(q)] = u[m.known[q]];
    const Eigen::VectorXd b = -(m.Afk * uk);

    Eigen::VectorXd x = m.ldlt.solve(b);
    const double bnorm = b.norm();
    double rel = 0.0;
    for (int pass = 0; pass < 10; ++pass) {
        const Eigen::VectorXd r = b - m.Aff * x;
        rel = bnorm > 0.0 ? r.norm() / bnorm : r.norm();
        if (!std::isfinite(rel)) break;
        if (rel <= tol) break;
        x += m.ldlt.solve(r);
    }
    if (!(rel <= tol)) {
        throw NoConvergence("ZetaSolver: relative residual " + std::to_string(rel) +
                                " above tolerance",
                            rel);
    }
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (m.unknown[k] >= 0) u[k] = x[m.unknown[k]];
    }
    LiftReport rep = make_report(m.op, u, den, LiftMethod::QuadraticMinimum);
    if (minimizer) *minimizer = ScalarField2D(m.grid, std::move(u));
    return rep;
}

LiftReport estimate_zeta(const ScalarField1D& g, const Grid2D& grid, double tol) {
    return ZetaSolver(grid).solve(g, tol);
}

// ---------------------------------------------------------------------------

namespace {

// int_{t0}^{t1} t^e dt, +inf when divergent at t0 = 0.
double power_integral(double t0, double t1, double e) {
    if (t0 == 0.0) {
        if (e + 1.0 <= 0.0) return std::numeric_limits<double>::infinity();
        return std::pow(t1, e + 1.0) / (e + 1.0);
    }
    if (std::abs(e + 1.0) < 1e-14) return std::log(t1 / t0);
    return (std::pow(t1, e + 1.0) - std::pow(t0, e + 1.0)) / (e + 1.0);
}

double poly_power(const double* c, int terms, double t0, double t1, double shift) {
    double s = 0.0;
    for (int p = 0; p < terms; ++p) {
        if (c[p] == 0.0) continue;
        s += c[p] * power_integral(t0, t1, p + shift);
    }
    return s;
}

}  // namespace

HardyResult hardy_check(const ScalarField1D& u, double r, double slack) {
    if (!(r > 1.0)) throw InvalidArgument("hardy_check: r must exceed 1");
    for (std::size_t k = 0; k < u.size(); ++k) {
        if (u[k] < 0.0) throw InvalidArgument("hardy_check: u must be nonnegative");
    }
    const double h = u.grid().h();
    const std::size_t n = u.size() - 1;
    double lhs = 0.0;
    double rhs = 0.0;
    double U = 0.0;
    for (std::size_t k = 0; k < n; ++k) {
        const double t0 = static_cast<double>(k) * h;
        const double t1 = static_cast<double>(k + 1) * h;
        const double d = (u[k + 1] - u[k]) / h;
        const double cu[2] = {u[k] - d * t0, d};
        const double cU[3] = {U - u[k] * t0 + 0.5 * d * t0 * t0, u[k] - d * t0, 0.5 * d};
        lhs += poly_power(cU, 3, t0, t1, -r);
        rhs += poly_power(cu, 2, t0, t1, 1.0 - r);
        U += 0.5 * h * (u[k] + u[k + 1]);
    }
    rhs /= (r - 1.0);
    HardyResult res;
    res.lhs = lhs;
    res.rhs = rhs;
    res.pass = std::isinf(rhs) || lhs <= rhs * (1.0 + slack);
    return res;
}

SeminormComparison seminorm_comparison_check(const ScalarField1D& u, double slack) {
    SeminormComparison c;
    c.h32 = h32_seminorm(u);
    c.bound = derivative_seminorm(u) / 8.0;
    c.pass = c.h32 <= c.bound + slack;
    return c;
}

}  // namespace pfscale
