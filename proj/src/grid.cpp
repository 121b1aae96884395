#include "pfscale/grid.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace pfscale {

Grid1D::Grid1D(double lo, double hi, int n) : lo_(lo), hi_(hi), n_(n), h_(0.0) {
    if (!std::isfinite(lo) || !std::isfinite(hi) || !(lo < hi)) {
        throw InvalidArgument("Grid1D: require finite lo < hi");
    }
    if (n < 4) {
        throw InvalidArgument("Grid1D: require at least 4 cells, got " + std::to_string(n));
    }
    h_ = (hi - lo) / n;
}

std::vector<double> Grid1D::trapezoid_weights() const {
    std::vector<double> w(nodes(), h_);
    w.front() = 0.5 * h_;
    w.back() = 0.5 * h_;
    return w;
}

Grid1D make_grid_1d(double lo, double hi, int n) { return Grid1D(lo, hi, n); }

ScalarField1D::ScalarField1D(Grid1D grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.nodes()) {
        throw InvalidArgument("ScalarField1D: value count " + std::to_string(values_.size()) +
                              " does not match node count " + std::to_string(grid_.nodes()));
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        if (!std::isfinite(values_[i])) {
            throw InvalidArgument("ScalarField1D: non-finite value at node " + std::to_string(i));
        }
    }
}

ScalarField1D sample(const std::function<double(double)>& fn, const Grid1D& grid) {
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        v[i] = fn(grid.node(i));
    }
    return ScalarField1D(grid, std::move(v));
}

bool Grid2D::masked(int i, int j) const {
    if (i < 0 || j < 0 || i > nx_ || j > ny_) {
        return false;
    }
    return mask_[index(i, j)] != 0;
}

bool Grid2D::contains(double x, double y) const {
    switch (shape_) {
        case DomainShape::Rectangle:
            return x >= x0_ && x <= x0_ + nx_ * h_ && y >= y0_ && y <= y0_ + ny_ * h_;
        case DomainShape::TriangleTPlus:
            return y >= 0.0 && y <= 0.5 * radius_ && x >= y && x <= radius_ - y;
        case DomainShape::Diamond:
            return x >= 0.0 && x <= radius_ && std::abs(y) <= std::min(x, radius_ - x);
    }
    return false;
}

std::size_t Grid2D::masked_count() const {
    return static_cast<std::size_t>(std::count(mask_.begin(), mask_.end(), 1));
}

void Grid2D::finalize() {
    weights_.assign(node_count(), 0.0);
    const double full = 0.25 * h_ * h_;
    const double half = h_ * h_ / 6.0;
    for (int j = 0; j < ny_; ++j) {
        for (int i = 0; i < nx_; ++i) {
            const std::size_t corners[4] = {index(i, j), index(i + 1, j), index(i, j + 1),
                                            index(i + 1, j + 1)};
            int count = 0;
            for (auto c : corners) {
                count += mask_[c];
            }
            if (count < 3) {
                continue;
            }
            const double w = count == 4 ? full : half;
            for (auto c : corners) {
                if (mask_[c]) {
                    weights_[c] += w;
                }
            }
        }
    }
}

Grid2D make_rectangle_grid(double x0, double y0, double width, double height, int nx) {
    if (!(width > 0.0) || !(height > 0.0)) {
        throw InvalidArgument("rectangle grid: width and height must be positive");
    }
    if (nx < 4) {
        throw InvalidArgument("rectangle grid: require at least 4 cells per axis");
    }
    const double h = width / nx;
    const double ny_real = height / h;
    const int ny = static_cast<int>(std::lround(ny_real));
    if (ny < 4 || std::abs(ny_real - ny) > 1e-9 * std::max(1.0, ny_real)) {
        throw InvalidArgument("rectangle grid: height must be a multiple (>= 4) of the spacing");
    }
    Grid2D g;
    g.shape_ = DomainShape::Rectangle;
    g.nx_ = nx;
    g.ny_ = ny;
    g.h_ = h;
    g.x0_ = x0;
    g.y0_ = y0;
    g.radius_ = width;
    g.mask_.assign(g.node_count(), 1);
    g.finalize();
    return g;
}

Grid2D make_triangle_grid(double R, int n) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw InvalidArgument("triangle grid: R must be positive");
    }
    if (n < 8 || n % 2 != 0) {
        throw InvalidArgument("triangle grid: n must be even and at least 8");
    }
    Grid2D g;
    g.shape_ = DomainShape::TriangleTPlus;
    g.nx_ = n;
    g.ny_ = n / 2;
    g.h_ = R / n;
    g.radius_ = R;
    g.mask_.assign(g.node_count(), 0);
    for (int j = 0; j <= g.ny_; ++j) {
        for (int i = j; i <= n - j; ++i) {
            g.mask_[g.index(i, j)] = 1;
        }
    }
    g.finalize();
    return g;
}

Grid2D make_diamond_grid(double R, int n) {
    if (!(R > 0.0) || !std::isfinite(R)) {
        throw InvalidArgument("diamond grid: R must be positive");
    }
    if (n < 8 || n % 2 != 0) {
        throw InvalidArgument("diamond grid: n must be even and at least 8");
    }
    Grid2D g;
    g.shape_ = DomainShape::Diamond;
    g.nx_ = n;
    g.ny_ = n;
    g.h_ = R / n;
    g.y0_ = -0.5 * R;
    g.radius_ = R;
    g.mask_.assign(g.node_count(), 0);
    const int mid = n / 2;
    for (int j = 0; j <= n; ++j) {
        const int yy = std::abs(j - mid);
        for (int i = 0; i <= n; ++i) {
            if (yy <= std::min(i, n - i)) {
                g.mask_[g.index(i, j)] = 1;
            }
        }
    }
    g.finalize();
    return g;
}

std::vector<std::size_t> edge_nodes(const Grid2D& grid, Edge edge) {
    if (grid.shape() != DomainShape::Rectangle) {
        throw InvalidArgument("edge_nodes: only defined for rectangle grids");
    }
    std::vector<std::size_t> out;
    switch (edge) {
        case Edge::Bottom:
        case Edge::Top: {
            const int j = edge == Edge::Bottom ? 0 : grid.ny();
            for (int i = 0; i <= grid.nx(); ++i) out.push_back(grid.index(i, j));
            break;
        }
        case Edge::Left:
        case Edge::Right: {
            const int i = edge == Edge::Left ? 0 : grid.nx();
            for (int j = 0; j <= grid.ny(); ++j) out.push_back(grid.index(i, j));
            break;
        }
    }
    return out;
}

ScalarField2D::ScalarField2D(Grid2D grid, std::vector<double> values)
    : grid_(std::move(grid)), values_(std::move(values)) {
    if (values_.size() != grid_.node_count()) {
        throw InvalidArgument("ScalarField2D: value count does not match node count");
    }
    for (std::size_t k = 0; k < values_.size(); ++k) {
        if (grid_.masked(k) && !std::isfinite(values_[k])) {
            throw InvalidArgument("ScalarField2D: non-finite value on masked node " +
                                  std::to_string(k));
        }
    }
}

}  // namespace pfscale
