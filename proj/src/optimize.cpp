#include "pfscale/optimize.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <exception>
#include <numeric>
#include <optional>

#include <Eigen/SparseCholesky>

#include "pfscale/grid.hpp"

namespace pfscale {

Constraint Constraint::dirichlet(std::vector<std::size_t> nodes, std::vector<double> values) {
    if (nodes.size() != values.size()) {
        throw InvalidArgument("Constraint::dirichlet: nodes and values differ in length");
    }
    for (double v : values) {
        if (!std::isfinite(v)) throw InvalidArgument("Constraint::dirichlet: non-finite value");
    }
    Constraint c;
    c.kind = Kind::DirichletNodes;
    c.nodes = std::move(nodes);
    c.values = std::move(values);
    return c;
}

Constraint Constraint::mass_average(std::vector<double> weights, double target,
                                    std::pair<double, double> band) {
    if (!(band.first < target && target < band.second)) {
        throw InvalidArgument("Constraint::mass_average: target must lie strictly inside the band");
    }
    double total = 0.0;
    for (double w : weights) {
        if (!(w >= 0.0) || !std::isfinite(w)) {
            throw InvalidArgument("Constraint::mass_average: weights must be finite and nonnegative");
        }
        total += w;
    }
    if (!(total > 0.0)) throw InvalidArgument("Constraint::mass_average: weights sum to zero");
    Constraint c;
    c.kind = Kind::MassAverage;
    c.weights = std::move(weights);
    c.target = target;
    c.band = band;
    return c;
}

double Constraint::average(std::span<const double> x) const {
    double num = 0.0;
    double den = 0.0;
    for (std::size_t i = 0; i < weights.size(); ++i) {
        num += weights[i] * x[i];
        den += weights[i];
    }
    return num / den;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double max_norm(std::span<const double> a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::abs(v));
    return m;
}

bool all_finite(std::span<const double> a) {
    return std::all_of(a.begin(), a.end(), [](double v) { return std::isfinite(v); });
}

// Projection onto {frozen entries zero} intersected with {C d = 0}.
class Projector {
public:
    Projector(std::size_t n, const std::vector<Constraint>& constraints) : free_(n, 1) {
        for (const auto& c : constraints) {
            if (c.kind != Constraint::Kind::DirichletNodes) continue;
            for (std::size_t k = 0; k < c.nodes.size(); ++k) {
                if (c.nodes[k] >= n) throw InvalidArgument("minimize: Dirichlet node out of range");
                free_[c.nodes[k]] = 0;
            }
        }
        for (const auto& c : constraints) {
            if (c.kind != Constraint::Kind::MassAverage) continue;
            if (c.weights.size() != n) {
                throw InvalidArgument("minimize: mass weights must match the unknown count");
            }
            const double total = std::accumulate(c.weights.begin(), c.weights.end(), 0.0);
            std::vector<double> row(n);
            for (std::size_t i = 0; i < n; ++i) row[i] = c.weights[i] / total;
            rows_.push_back(std::move(row));
            targets_.push_back(c.target);
        }
        const std::size_t m = rows_.size();
        gram_.assign(m * m, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) {
                double s = 0.0;
                for (std::size_t i = 0; i < n; ++i) {
                    if (free_[i]) s += rows_[a][i] * rows_[b][i];
                }
                gram_[a * m + b] = s;
            }
        }
        if (m > 0) invert_gram();
    }

    void project(std::span<double> v) const {
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!free_[i]) v[i] = 0.0;
        }
        const std::size_t m = rows_.size();
        if (m == 0) return;
        std::vector<double> cv(m);
        for (std::size_t a = 0; a < m; ++a) cv[a] = dot(rows_[a], v);
        apply_correction(v, cv, -1.0);
    }

    // Moves free entries of x so that every mass constraint holds.
    void restore_mass(std::span<double> x) const {
        const std::size_t m = rows_.size();
        if (m == 0) return;
        std::vector<double> r(m);
        for (std::size_t a = 0; a < m; ++a) r[a] = targets_[a] - dot(rows_[a], x);
        apply_correction(x, r, 1.0);
    }

    bool is_free(std::size_t i) const { return free_[i] != 0; }
    const std::vector<std::vector<double>>& mass_rows() const { return rows_; }

private:
    void invert_gram() {
        const std::size_t m = rows_.size();
        inv_.assign(m * m, 0.0);
        for (std::size_t a = 0; a < m; ++a) inv_[a * m + a] = 1.0;
        std::vector<double> a = gram_;
        for (std::size_t col = 0; col < m; ++col) {
            std::size_t piv = col;
            for (std::size_t r = col + 1; r < m; ++r) {
                if (std::abs(a[r * m + col]) > std::abs(a[piv * m + col])) piv = r;
            }
            if (!(std::abs(a[piv * m + col]) > 1e-300)) {
                throw InvalidArgument("minimize: mass constraints are degenerate on the free nodes");
            }
            for (std::size_t k = 0; k < m; ++k) {
                std::swap(a[col * m + k], a[piv * m + k]);
                std::swap(inv_[col * m + k], inv_[piv * m + k]);
            }
            const double p = a[col * m + col];
            for (std::size_t k = 0; k < m; ++k) {
                a[col * m + k] /= p;
                inv_[col * m + k] /= p;
            }
            for (std::size_t r = 0; r < m; ++r) {
                if (r == col) continue;
                const double f = a[r * m + col];
                for (std::size_t k = 0; k < m; ++k) {
                    a[r * m + k] -= f * a[col * m + k];
                    inv_[r * m + k] -= f * inv_[col * m + k];
                }
            }
        }
    }

    // v += sign * C_free^T G^{-1} r
    void apply_correction(std::span<double> v, const std::vector<double>& r, double sign) const {
        const std::size_t m = rows_.size();
        std::vector<double> lam(m, 0.0);
        for (std::size_t a = 0; a < m; ++a) {
            for (std::size_t b = 0; b < m; ++b) lam[a] += inv_[a * m + b] * r[b];
        }
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!free_[i]) continue;
            double s = 0.0;
            for (std::size_t a = 0; a < m; ++a) s += rows_[a][i] * lam[a];
            v[i] += sign * s;
        }
    }

    std::vector<unsigned char> free_;
    std::vector<std::vector<double>> rows_;
    std::vector<double> targets_;
    std::vector<double> gram_;
    std::vector<double> inv_;
};

// Inverse of the energy's Hessian model restricted to the feasible directions:
// H q = P^{-1} q - Z M^{-1} C P^{-1} q with Z = P^{-1} C^T, M = C Z on the free nodes.
class Preconditioner {
public:
    Preconditioner(const Objective& energy, const Projector& proj, std::size_t n) : n_(n) {
        auto model = energy.hessian_model();
        if (!model) return;
        std::vector<Eigen::Index> slot(n, -1);
        for (std::size_t i = 0; i < n; ++i) {
            if (proj.is_free(i)) {
                slot[i] = static_cast<Eigen::Index>(free_.size());
                free_.push_back(i);
            }
        }
        const auto nf = static_cast<Eigen::Index>(free_.size());
        if (nf == 0) return;
        if (model->is_dense()) {
            if (model->dense.rows() != static_cast<Eigen::Index>(n)) return;
            Eigen::MatrixXd A(nf, nf);
            for (Eigen::Index a = 0; a < nf; ++a) {
                for (Eigen::Index b = 0; b < nf; ++b) A(a, b) = model->dense(free_[a], free_[b]);
            }
            const double ridge = 1e-10 * std::max(A.diagonal().cwiseAbs().maxCoeff(), 1e-300);
            A.diagonal().array() += ridge;
            dense_.compute(A);
            if (dense_.info() != Eigen::Success) return;
            use_dense_ = true;
        } else {
            const auto& S = model->sparse;
            if (S.rows() != static_cast<Eigen::Index>(n)) return;
            std::vector<Eigen::Triplet<double>> t;
            double dmax = 0.0;
            for (Eigen::Index k = 0; k < S.outerSize(); ++k) {
                for (Eigen::SparseMatrix<double>::InnerIterator it(S, k); it; ++it) {
                    const auto r = slot[it.row()];
                    const auto c = slot[it.col()];
                    if (r < 0 || c < 0) continue;
                    t.emplace_back(r, c, it.value());
                    if (r == c) dmax = std::max(dmax, std::abs(it.value()));
                }
            }
            const double ridge = 1e-10 * std::max(dmax, 1e-300);
            for (Eigen::Index a = 0; a < nf; ++a) t.emplace_back(a, a, ridge);
            Eigen::SparseMatrix<double> A(nf, nf);
            A.setFromTriplets(t.begin(), t.end());
            sparse_.compute(A);
            if (sparse_.info() != Eigen::Success || (sparse_.vectorD().array() <= 0.0).any()) return;
        }
        const auto& rows = proj.mass_rows();
        const auto m = static_cast<Eigen::Index>(rows.size());
        if (m > 0) {
            C_.resize(m, nf);
            for (Eigen::Index a = 0; a < m; ++a) {
                for (Eigen::Index b = 0; b < nf; ++b) C_(a, b) = rows[a][free_[b]];
            }
            Z_ = solve(Eigen::MatrixXd(C_.transpose()));
            Eigen::MatrixXd M = C_ * Z_;
            Minv_ = M.ldlt().solve(Eigen::MatrixXd::Identity(m, m));
            if (!Minv_.allFinite()) return;
        }
        active_ = true;
    }

    bool active() const { return active_; }

    std::vector<double> apply(const std::vector<double>& q) const {
        const auto nf = static_cast<Eigen::Index>(free_.size());
        Eigen::VectorXd qf(nf);
        for (Eigen::Index a = 0; a < nf; ++a) qf[a] = q[free_[a]];
        Eigen::VectorXd r = solve(qf);
        if (C_.rows() > 0) r -= Z_ * (Minv_ * (C_ * r));
        std::vector<double> out(n_, 0.0);
        for (Eigen::Index a = 0; a < nf; ++a) out[free_[a]] = r[a];
        return out;
    }

private:
    template <typename M>
    M solve(const M& b) const {
        if (use_dense_) return dense_.solve(b);
        return sparse_.solve(b);
    }

    std::size_t n_;
    std::vector<std::size_t> free_;
    bool active_ = false;
    bool use_dense_ = false;
    Eigen::LLT<Eigen::MatrixXd> dense_;
    Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> sparse_;
    Eigen::MatrixXd C_, Z_, Minv_;
};

struct Pair {
    std::vector<double> s;
    std::vector<double> y;
    double rho;
};

std::vector<double> lbfgs_direction(const std::vector<double>& g, const std::deque<Pair>& mem,
                                    const Preconditioner* pre) {
    std::vector<double> q = g;
    std::vector<double> alpha(mem.size());
    for (std::size_t k = mem.size(); k-- > 0;) {
        alpha[k] = mem[k].rho * dot(mem[k].s, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] -= alpha[k] * mem[k].y[i];
    }
    double gamma = 1.0;
    if (pre) {
        if (!mem.empty()) {
            const auto& last = mem.back();
            const double yhy = dot(last.y, pre->apply(last.y));
            if (yhy > 0.0) gamma = dot(last.s, last.y) / yhy;
        }
        q = pre->apply(q);
    } else if (!mem.empty()) {
        const auto& last = mem.back();
        gamma = dot(last.s, last.y) / dot(last.y, last.y);
    }
    for (double& v : q) v *= gamma;
    for (std::size_t k = 0; k < mem.size(); ++k) {
        const double beta = mem[k].rho * dot(mem[k].y, q);
        for (std::size_t i = 0; i < q.size(); ++i) q[i] += (alpha[k] - beta) * mem[k].s[i];
    }
    for (double& v : q) v = -v;
    return q;
}

}  // namespace

std::vector<double> projected_gradient(const Objective& energy, std::span<const double> x,
                                       const std::vector<Constraint>& constraints) {
    Projector proj(x.size(), constraints);
    std::vector<double> g(x.size());
    energy.evaluate(x, g);
    proj.project(g);
    return g;
}

OptimizeResult minimize(const Objective& energy, std::vector<double> x,
                        const std::vector<Constraint>& constraints, const OptimizeOptions& opt) {
    const std::size_t n = energy.size();
    if (x.size() != n) throw InvalidArgument("minimize: init size does not match the energy");
    if (!(opt.tol > 0.0)) throw InvalidArgument("minimize: tol must be positive");
    if (opt.max_iter < 0) throw InvalidArgument("minimize: max_iter must be nonnegative");
    for (const auto& c : constraints) {
        if (c.kind != Constraint::Kind::DirichletNodes) continue;
        for (std::size_t k = 0; k < c.nodes.size(); ++k) {
            if (c.nodes[k] >= n || x[c.nodes[k]] != c.values[k]) {
                throw InvalidArgument("minimize: init does not satisfy the Dirichlet constraints");
            }
        }
    }

    Projector proj(n, constraints);
    proj.restore_mass(x);
    std::optional<Preconditioner> pre;
    if (opt.precondition) {
        pre.emplace(energy, proj, n);
        if (!pre->active()) pre.reset();
    }

    std::vector<double> g(n);
    double e = energy.evaluate(x, g);
    if (!std::isfinite(e) || !all_finite(g)) {
        throw NonFiniteError("minimize: non-finite energy or gradient", 0);
    }
    proj.project(g);
    if (opt.on_iterate) opt.on_iterate(0, e);

    OptimizeResult res;
    std::deque<Pair> mem;
    std::vector<double> xn(n), gn(n);
    double gnorm = max_norm(g);
    int it = 0;

    constexpr double c1 = 1e-4;
    constexpr double sigma = 0.9;
    constexpr double delta = 0.1;

    while (gnorm > opt.tol && it < opt.max_iter) {
        std::vector<double> d = lbfgs_direction(g, mem, pre ? &*pre : nullptr);
        proj.project(d);
        double slope = dot(g, d);
        if (!(slope < 0.0)) {
            mem.clear();
            d = pre ? pre->apply(g) : g;
            for (double& v : d) v = -v;
            proj.project(d);
            slope = dot(g, d);
            if (!(slope < 0.0)) {
                d = g;
                for (double& v : d) v = -v;
                slope = dot(g, d);
            }
        }

        double alpha = 1.0;
        if (mem.empty()) {
            alpha = std::min(1.0, 1.0 / max_norm(d));
        }

        bool accepted = false;
        double en = 0.0;
        for (int trial = 0; trial < 60; ++trial) {
            for (std::size_t i = 0; i < n; ++i) xn[i] = x[i] + alpha * d[i];
            en = energy.evaluate(xn, gn);
            if (!std::isfinite(en) || !all_finite(gn)) {
                throw NonFiniteError("minimize: non-finite energy or gradient", it + 1);
            }
            if (en <= e + c1 * alpha * slope) {
                accepted = true;
                break;
            }
            if (en <= e + 1e-12 * (1.0 + std::abs(e))) {
                // Approximate Wolfe acceptance for steps lost in rounding.
                proj.project(gn);
                const double dslope = dot(gn, d);
                if (sigma * slope <= dslope && dslope <= (2.0 * delta - 1.0) * slope) {
                    accepted = true;
                    break;
                }
            }
            alpha *= 0.5;
        }
        if (!accepted) {
            if (!mem.empty()) {
                mem.clear();
                continue;
            }
            break;
        }

        proj.project(gn);
        Pair p;
        p.s.resize(n);
        p.y.resize(n);
        for (std::size_t i = 0; i < n; ++i) {
            p.s[i] = xn[i] - x[i];
            p.y[i] = gn[i] - g[i];
        }
        const double sy = dot(p.s, p.y);
        if (sy > 1e-12 * std::sqrt(dot(p.s, p.s) * dot(p.y, p.y)) && sy > 0.0) {
            p.rho = 1.0 / sy;
            mem.push_back(std::move(p));
            if (static_cast<int>(mem.size()) > opt.memory) mem.pop_front();
        }

        std::swap(x, xn);
        std::swap(g, gn);
        e = en;
        gnorm = max_norm(g);
        ++it;
        if (opt.on_iterate) opt.on_iterate(it, e);
    }

    res.x = std::move(x);
    res.energy = e;
    res.iterations = it;
    res.grad_norm = gnorm;
    res.converged = gnorm <= opt.tol;
    return res;
}

OptimizeResult minimize_multistart(const Objective& energy,
                                   const std::vector<std::vector<double>>& inits,
                                   const std::vector<Constraint>& constraints,
                                   const OptimizeOptions& options) {
    if (inits.empty()) throw InvalidArgument("minimize_multistart: no initial points");
    const int count = static_cast<int>(inits.size());
    std::vector<OptimizeResult> results(inits.size());
    std::vector<std::exception_ptr> errors(inits.size());
#pragma omp parallel for schedule(static, 1)
    for (int k = 0; k < count; ++k) {
        try {
            results[k] = minimize(energy, inits[k], constraints, options);
        } catch (...) {
            errors[k] = std::current_exception();
        }
    }
    for (const auto& err : errors) {
        if (err) std::rethrow_exception(err);
    }
    std::size_t best = 0;
    for (std::size_t k = 1; k < results.size(); ++k) {
        if (results[k].energy < results[best].energy) best = k;
    }
    return std::move(results[best]);
}

}  // namespace pfscale
