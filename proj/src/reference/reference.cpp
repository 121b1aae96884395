#include "pfscale/reference.hpp"

#include <cmath>
#include <cstdlib>
#include <optional>
#include <vector>

namespace pfscale::reference {

namespace {

std::vector<double> trap(std::size_t m, double h) {
    std::vector<double> w(m, h);
    w[0] = w[m - 1] = h / 2;
    return w;
}

// Second-order slope of samples v at index k: centered inside, one-sided at the ends.
double fd_slope(const std::vector<double>& v, std::size_t k, double h) {
    const std::size_t m = v.size();
    if (k == 0) return (-3 * v[0] + 4 * v[1] - v[2]) / (2 * h);
    if (k == m - 1) return (3 * v[m - 1] - 4 * v[m - 2] + v[m - 3]) / (2 * h);
    return (v[k + 1] - v[k - 1]) / (2 * h);
}

double fd_second(const std::vector<double>& v, std::size_t k, double h) {
    const std::size_t m = v.size();
    if (k == 0) return (2 * v[0] - 5 * v[1] + 4 * v[2] - v[3]) / (h * h);
    if (k == m - 1) return (2 * v[m - 1] - 5 * v[m - 2] + 4 * v[m - 3] - v[m - 4]) / (h * h);
    return (v[k + 1] - 2 * v[k] + v[k - 1]) / (h * h);
}

// Full double sum sum_{k,l} w_k w_l (v_k - v_l)^2 / ((k-l)h)^2 with the diagonal limit.
double frac(const std::vector<double>& v, const std::vector<double>& w, double h) {
    double s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        for (std::size_t l = 0; l < v.size(); ++l) {
            if (k == l) {
                const double d = fd_slope(v, k, h);
                s += w[k] * w[k] * d * d;
            } else {
                const double dist = (double(k) - double(l)) * h;
                s += w[k] * w[l] * (v[k] - v[l]) * (v[k] - v[l]) / (dist * dist);
            }
        }
    }
    return s;
}

std::vector<double> values_of(const ScalarField1D& f) {
    return std::vector<double>(f.values().begin(), f.values().end());
}

std::vector<double> slopes(const ScalarField1D& f) {
    const auto v = values_of(f);
    const double h = f.grid().h();
    std::vector<double> s;
    for (std::size_t k = 0; k + 1 < v.size(); ++k) s.push_back((v[k + 1] - v[k]) / h);
    return s;
}

}  // namespace

double bending_energy(const ScalarField1D& f) {
    const auto v = values_of(f);
    const double h = f.grid().h();
    const auto w = trap(v.size(), h);
    double s = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double d = fd_second(v, k, h);
        s += w[k] * d * d;
    }
    return s;
}

double potential_integral(const ScalarField1D& f, const DoubleWell& W) {
    const auto w = trap(f.size(), f.grid().h());
    double s = 0;
    for (std::size_t k = 0; k < f.size(); ++k) s += w[k] * W(f[k]);
    return s;
}

double h12_seminorm(const ScalarField1D& g) {
    return frac(values_of(g), trap(g.size(), g.grid().h()), g.grid().h());
}

double h12_seminorm_fullline(const ScalarField1D& g) {
    const auto v = values_of(g);
    const double h = g.grid().h();
    const auto w = trap(v.size(), h);
    const double c = v[0];
    double tails = 0;
    for (std::size_t k = 0; k < v.size(); ++k) {
        const double x = g.grid().node(k);
        const double dl = x - g.grid().lo();
        const double dr = g.grid().hi() - x;
        if (dl <= 0 || dr <= 0) continue;  // end nodes carry g - c = 0
        tails += 2 * w[k] * (v[k] - c) * (v[k] - c) * (1 / dl + 1 / dr);
    }
    return frac(v, w, h) + tails;
}

double derivative_seminorm(const ScalarField1D& f) {
    const auto s = slopes(f);
    const double h = f.grid().h();
    return frac(s, std::vector<double>(s.size(), h), h);
}

double derivative_seminorm_fullline(const ScalarField1D& f) {
    const auto s = slopes(f);
    const double h = f.grid().h();
    const double lo = f.grid().lo();
    const double hi = f.grid().hi();
    double tails = 0;
    for (std::size_t k = 0; k < s.size(); ++k) {
        const double x = lo + (double(k) + 0.5) * h;
        tails += 2 * h * s[k] * s[k] * (1 / (x - lo) + 1 / (hi - x));
    }
    return reference::derivative_seminorm(f) + tails;
}

double h32_seminorm(const ScalarField1D& u) {
    const auto v = values_of(u);
    const double h = u.grid().h();
    const auto w = trap(v.size(), h);
    double s = 0;
    for (std::size_t i = 0; i < v.size(); ++i) {
        for (std::size_t j = 0; j < v.size(); ++j) {
            if ((i + j) % 2 != 0) continue;
            double q;
            if (i == j) {
                const double d2 = fd_second(v, i, h);
                q = d2 * d2 / 16;
            } else {
                const double num = v[i] - 2 * v[(i + j) / 2] + v[j];
                const double dist = (double(i) - double(j)) * h;
                q = num * num / std::pow(dist, 4);
            }
            s += 2 * w[i] * w[j] * q;
        }
    }
    return s;
}

// ---------------------------------------------------------------------------

namespace {

class Hess {
public:
    explicit Hess(const ScalarField2D& u) : u_(u), g_(u.grid()), h_(g_.h()) {}

    bool in(int i, int j) const {
        if (i < 0 || j < 0 || i > g_.nx() || j > g_.ny()) return false;
        const int n = g_.nx();
        switch (g_.shape()) {
            case DomainShape::Rectangle:
                return true;
            case DomainShape::TriangleTPlus:
                return j <= i && i <= n - j;
            case DomainShape::Diamond:
                return std::abs(j - n / 2) <= std::min(i, n - i);
        }
        return false;
    }

    double weight(int i, int j) const {
        double w = 0;
        for (int cj = j - 1; cj <= j; ++cj) {
            for (int ci = i - 1; ci <= i; ++ci) {
                if (ci < 0 || cj < 0 || ci >= g_.nx() || cj >= g_.ny()) continue;
                const int cnt = in(ci, cj) + in(ci + 1, cj) + in(ci, cj + 1) + in(ci + 1, cj + 1);
                if (cnt == 4) w += h_ * h_ / 4;
                if (cnt == 3) w += h_ * h_ / 6;
            }
        }
        return w;
    }

    double val(int i, int j) const { return u_.at(i, j); }

    std::optional<double> second(int i, int j, int di, int dj) const {
        if (in(i - di, j - dj) && in(i + di, j + dj)) {
            return (val(i - di, j - dj) - 2 * val(i, j) + val(i + di, j + dj)) / (h_ * h_);
        }
        for (int sg : {1, -1}) {
            const int a = sg * di, b = sg * dj;
            if (in(i + a, j + b) && in(i + 2 * a, j + 2 * b) && in(i + 3 * a, j + 3 * b)) {
                return (2 * val(i, j) - 5 * val(i + a, j + b) + 4 * val(i + 2 * a, j + 2 * b) -
                        val(i + 3 * a, j + 3 * b)) /
                       (h_ * h_);
            }
        }
        return std::nullopt;
    }

    // Candidate first-derivative stencils: kind 0 centered, 1 forward, 2 backward.
    bool first_ok(int i, int j, int di, int dj, int kind) const {
        if (kind == 0) return in(i - di, j - dj) && in(i + di, j + dj);
        const int sg = kind == 1 ? 1 : -1;
        return in(i + sg * di, j + sg * dj) && in(i + 2 * sg * di, j + 2 * sg * dj);
    }

    // Nodes and coefficients of a first-derivative stencil.
    std::vector<std::pair<std::pair<int, int>, double>> first_nodes(int i, int j, int di, int dj,
                                                                    int kind) const {
        if (kind == 0) return {{{i - di, j - dj}, -1 / (2 * h_)}, {{i + di, j + dj}, 1 / (2 * h_)}};
        const int sg = kind == 1 ? 1 : -1;
        return {{{i, j}, -3.0 * sg / (2 * h_)},
                {{i + sg * di, j + sg * dj}, 4.0 * sg / (2 * h_)},
                {{i + 2 * sg * di, j + 2 * sg * dj}, -1.0 * sg / (2 * h_)}};
    }

    std::optional<double> first(int i, int j, int di, int dj) const {
        for (int kind = 0; kind < 3; ++kind) {
            if (!first_ok(i, j, di, dj, kind)) continue;
            double s = 0;
            for (auto& [node, c] : first_nodes(i, j, di, dj, kind)) s += c * val(node.first, node.second);
            return s;
        }
        return std::nullopt;
    }

    std::optional<double> mixed(int i, int j) const {
        for (int order = 0; order < 2; ++order) {
            const int odi = order == 0 ? 0 : 1;
            const int odj = order == 0 ? 1 : 0;
            for (int kind = 0; kind < 3; ++kind) {
                if (!first_ok(i, j, odi, odj, kind)) continue;
                double s = 0;
                bool ok = true;
                for (auto& [node, c] : first_nodes(i, j, odi, odj, kind)) {
                    auto inner = first(node.first, node.second, odj, odi);
                    if (!inner) {
                        ok = false;
                        break;
                    }
                    s += c * *inner;
                }
                if (ok) return s;
            }
        }
        return std::nullopt;
    }

    template <class F>
    double near(int i, int j, F f) const {
        if (auto v = f(i, j)) return *v;
        for (int r = 1; r <= 8; ++r) {
            for (int dj = -r; dj <= r; ++dj) {
                for (int di = -r; di <= r; ++di) {
                    if (std::max(std::abs(di), std::abs(dj)) != r || !in(i + di, j + dj)) continue;
                    if (auto v = f(i + di, j + dj)) return *v;
                }
            }
        }
        throw InvalidArgument("reference hessian: no stencil");
    }

private:
    const ScalarField2D& u_;
    const Grid2D& g_;
    double h_;
};

}  // namespace

HessianParts hessian_parts_2d(const ScalarField2D& u) {
    Hess H(u);
    HessianParts p;
    const Grid2D& g = u.grid();
    for (int j = 0; j <= g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) {
            if (!H.in(i, j)) continue;
            const double w = H.weight(i, j);
            const double xx = H.near(i, j, [&](int a, int b) { return H.second(a, b, 1, 0); });
            const double yy = H.near(i, j, [&](int a, int b) { return H.second(a, b, 0, 1); });
            const double xy = H.near(i, j, [&](int a, int b) { return H.mixed(a, b); });
            p.xx += w * xx * xx;
            p.xy += w * xy * xy;
            p.yy += w * yy * yy;
        }
    }
    return p;
}

double hessian_energy_2d(const ScalarField2D& u) { return reference::hessian_parts_2d(u).total(); }

EnergyBreakdown f_eps(const ScalarField1D& f, const DoubleWell& w, double eps) {
    return EnergyBreakdown::sum_of(std::pow(eps, 3) * reference::bending_energy(f),
                                   reference::potential_integral(f, w) / eps,
                                   0, 0);
}

EnergyBreakdown g_eps(const ScalarField1D& v, const DoubleWell& V, const EpsLambda& el) {
    return EnergyBreakdown::sum_of(0, 0, std::pow(el.eps(), 3) / 8 * reference::derivative_seminorm(v),
                                   el.lambda() * reference::potential_integral(v, V));
}

EnergyBreakdown full_energy_2d(const ScalarField2D& u, const DoubleWell& W, const DoubleWell& V,
                               const EpsLambda& el, Edge edge) {
    Hess H(u);
    const Grid2D& g = u.grid();
    double pot = 0;
    for (int j = 0; j <= g.ny(); ++j) {
        for (int i = 0; i <= g.nx(); ++i) pot += H.weight(i, j) * W(u.at(i, j));
    }
    double bpot = 0;
    const bool horizontal = edge == Edge::Bottom || edge == Edge::Top;
    const int len = horizontal ? g.nx() : g.ny();
    for (int k = 0; k <= len; ++k) {
        int i, j;
        if (horizontal) {
            i = k;
            j = edge == Edge::Bottom ? 0 : g.ny();
        } else {
            j = k;
            i = edge == Edge::Left ? 0 : g.nx();
        }
        const double w = (k == 0 || k == len) ? g.h() / 2 : g.h();
        bpot += w * V(u.at(i, j));
    }
    const double e = el.eps();
    return EnergyBreakdown::sum_of(e * e * e * reference::hessian_energy_2d(u), pot / e, 0, el.lambda() * bpot);
}

}  // namespace pfscale::reference
