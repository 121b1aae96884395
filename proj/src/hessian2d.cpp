#include "pfscale/hessian2d.hpp"

#include <optional>
#include <string>
#include <vector>

#include "pfscale/kernels.hpp"

namespace pfscale {

namespace {

struct Term {
    int i;
    int j;
    double c;
};
using Stencil = std::vector<Term>;

class StencilBuilder {
public:
    explicit StencilBuilder(const Grid2D& g) : g_(g), h_(g.h()) {}

    // Second derivative along unit direction (di, dj).
    std::optional<Stencil> second(int i, int j, int di, int dj) const {
        const double s = 1.0 / (h_ * h_);
        if (m(i - di, j - dj) && m(i + di, j + dj)) {
            return Stencil{{i - di, j - dj, s}, {i, j, -2.0 * s}, {i + di, j + dj, s}};
        }
        for (int sign : {1, -1}) {
            const int a = sign * di;
            const int b = sign * dj;
            if (m(i + a, j + b) && m(i + 2 * a, j + 2 * b) && m(i + 3 * a, j + 3 * b)) {
                return Stencil{{i, j, 2.0 * s},
                               {i + a, j + b, -5.0 * s},
                               {i + 2 * a, j + 2 * b, 4.0 * s},
                               {i + 3 * a, j + 3 * b, -1.0 * s}};
            }
        }
        return std::nullopt;
    }

    // First-derivative stencil candidates along (di, dj), centered first.
    std::vector<Stencil> first_candidates(int i, int j, int di, int dj) const {
        const double s = 1.0 / h_;
        std::vector<Stencil> out;
        if (m(i - di, j - dj) && m(i + di, j + dj)) {
            out.push_back({{i - di, j - dj, -0.5 * s}, {i + di, j + dj, 0.5 * s}});
        }
        for (int sign : {1, -1}) {
            const int a = sign * di;
            const int b = sign * dj;
            if (m(i + a, j + b) && m(i + 2 * a, j + 2 * b)) {
                out.push_back({{i, j, -1.5 * sign * s},
                               {i + a, j + b, 2.0 * sign * s},
                               {i + 2 * a, j + 2 * b, -0.5 * sign * s}});
            }
        }
        return out;
    }

    std::optional<Stencil> mixed(int i, int j) const {
        // Outer derivative along one axis applied to inner first derivatives along the other.
        for (int order = 0; order < 2; ++order) {
            const int odi = order == 0 ? 0 : 1;
            const int odj = order == 0 ? 1 : 0;
            for (const Stencil& outer : first_candidates(i, j, odi, odj)) {
                Stencil combined;
                bool ok = true;
                for (const Term& t : outer) {
                    auto inner = first_candidates(t.i, t.j, odj, odi);
                    if (inner.empty()) {
                        ok = false;
                        break;
                    }
                    for (const Term& u : inner.front()) {
                        combined.push_back({u.i, u.j, t.c * u.c});
                    }
                }
                if (ok) return combined;
            }
        }
        return std::nullopt;
    }

    template <class Fn>
    Stencil with_fallback(int i, int j, Fn&& build, const char* what) const {
        if (auto s = build(i, j)) return *s;
        for (int r = 1; r <= 8; ++r) {
            for (int dj = -r; dj <= r; ++dj) {
                for (int di = -r; di <= r; ++di) {
                    if (std::max(std::abs(di), std::abs(dj)) != r) continue;
                    if (!m(i + di, j + dj)) continue;
                    if (auto s = build(i + di, j + dj)) return *s;
                }
            }
        }
        throw InvalidArgument(std::string("HessianOperator: no ") + what + " stencil near node (" +
                              std::to_string(i) + "," + std::to_string(j) +
                              "); the masked region is too thin");
    }

private:
    bool m(int i, int j) const { return g_.masked(i, j); }
    const Grid2D& g_;
    double h_;
};

RowSparse assemble(const Grid2D& g, const std::vector<std::pair<std::size_t, Stencil>>& rows) {
    std::vector<Eigen::Triplet<double, int>> trip;
    for (const auto& [row, st] : rows) {
        for (const Term& t : st) {
            trip.emplace_back(static_cast<int>(row), static_cast<int>(g.index(t.i, t.j)), t.c);
        }
    }
    const int n = static_cast<int>(g.node_count());
    RowSparse mat(n, n);
    mat.setFromTriplets(trip.begin(), trip.end());
    mat.makeCompressed();
    return mat;
}

kernels::CsrView view(const RowSparse& a) {
    return {a.outerIndexPtr(), a.innerIndexPtr(), a.valuePtr(),
            static_cast<std::size_t>(a.rows())};
}

}  // namespace

HessianOperator::HessianOperator(const Grid2D& grid) : grid_(grid) {
    StencilBuilder sb(grid_);
    std::vector<std::pair<std::size_t, Stencil>> xx, xy, yy;
    for (int j = 0; j <= grid_.ny(); ++j) {
        for (int i = 0; i <= grid_.nx(); ++i) {
            if (!grid_.masked(i, j)) continue;
            const std::size_t row = grid_.index(i, j);
            xx.emplace_back(row, sb.with_fallback(
                                     i, j, [&](int a, int b) { return sb.second(a, b, 1, 0); }, "u_xx"));
            yy.emplace_back(row, sb.with_fallback(
                                     i, j, [&](int a, int b) { return sb.second(a, b, 0, 1); }, "u_yy"));
            xy.emplace_back(row, sb.with_fallback(
                                     i, j, [&](int a, int b) { return sb.mixed(a, b); }, "u_xy"));
        }
    }
    dxx_ = assemble(grid_, xx);
    dxy_ = assemble(grid_, xy);
    dyy_ = assemble(grid_, yy);

    const auto& w = grid_.area_weights();
    Eigen::VectorXd wv(static_cast<Eigen::Index>(w.size()));
    for (std::size_t k = 0; k < w.size(); ++k) wv[static_cast<Eigen::Index>(k)] = w[k];
    const auto wd = wv.asDiagonal();
    RowSparse wxx = wd * dxx_;
    RowSparse wxy = wd * dxy_;
    RowSparse wyy = wd * dyy_;
    form_ = RowSparse(dxx_.transpose() * wxx) + 2.0 * RowSparse(dxy_.transpose() * wxy) +
            RowSparse(dyy_.transpose() * wyy);
    form_.makeCompressed();
}

HessianOperator::Parts HessianOperator::parts(std::span<const double> u) const {
    const auto& w = grid_.area_weights();
    Parts p;
    p.xx = kernels::csr_weighted_square_sum(view(dxx_), w, u);
    p.xy = kernels::csr_weighted_square_sum(view(dxy_), w, u);
    p.yy = kernels::csr_weighted_square_sum(view(dyy_), w, u);
    return p;
}

void HessianOperator::gradient(std::span<const double> u, std::span<double> grad) const {
    kernels::csr_apply(view(form_), u, grad);
    for (double& g : grad) g *= 2.0;
}

}  // namespace pfscale
