#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

namespace pfscale {

/// Raised when a field or grid would violate its construction invariants.
class InvalidArgument : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Uniform 1-D grid with n cells on [lo, hi]; node i sits at lo + i*h.
class Grid1D {
public:
    Grid1D(double lo, double hi, int n);

    double lo() const { return lo_; }
    double hi() const { return hi_; }
    int cells() const { return n_; }
    std::size_t nodes() const { return static_cast<std::size_t>(n_) + 1; }
    double h() const { return h_; }
    double length() const { return hi_ - lo_; }
    double node(std::size_t i) const { return lo_ + static_cast<double>(i) * h_; }

    /// Trapezoid weights: h in the interior, h/2 at both ends.
    std::vector<double> trapezoid_weights() const;

    bool operator==(const Grid1D&) const = default;

private:
    double lo_;
    double hi_;
    int n_;
    double h_;
};

Grid1D make_grid_1d(double lo, double hi, int n);

/// Nodal values on a Grid1D.
class ScalarField1D {
public:
    ScalarField1D(Grid1D grid, std::vector<double> values);

    const Grid1D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    std::size_t size() const { return values_.size(); }

private:
    Grid1D grid_;
    std::vector<double> values_;
};

ScalarField1D sample(const std::function<double(double)>& fn, const Grid1D& grid);

enum class DomainShape { Rectangle, TriangleTPlus, Diamond };

/// Uniform square-cell grid over a bounding box with a node mask.
///
/// Rectangle: [x0, x0 + nx*h] x [y0, y0 + ny*h], all nodes masked.
/// TriangleTPlus: {0 < y < R/2, y < x < R - y} plus its boundary, on [0,R] x [0,R/2].
/// Diamond: {0 <= x <= R, |y| <= min(x, R - x)}, on [0,R] x [-R/2,R/2].
class Grid2D {
public:
    DomainShape shape() const { return shape_; }
    int nx() const { return nx_; }
    int ny() const { return ny_; }
    double h() const { return h_; }
    double x0() const { return x0_; }
    double y0() const { return y0_; }
    /// Triangle/diamond radius R; rectangle width.
    double radius() const { return radius_; }

    std::size_t columns() const { return static_cast<std::size_t>(nx_) + 1; }
    std::size_t rows() const { return static_cast<std::size_t>(ny_) + 1; }
    std::size_t node_count() const { return columns() * rows(); }
    std::size_t index(int i, int j) const {
        return static_cast<std::size_t>(j) * columns() + static_cast<std::size_t>(i);
    }
    double x(int i) const { return x0_ + i * h_; }
    double y(int j) const { return y0_ + j * h_; }

    /// Closed-domain membership test for an arbitrary point.
    bool contains(double x, double y) const;

    bool masked(int i, int j) const;
    bool masked(std::size_t k) const { return mask_[k] != 0; }
    std::size_t masked_count() const;

    /// Quadrature weights per node: full cells contribute h^2/4 to each corner,
    /// cells with exactly three masked corners form a half-cell triangle
    /// contributing h^2/6 to each of them. Zero outside the mask.
    const std::vector<double>& area_weights() const { return weights_; }

    friend Grid2D make_rectangle_grid(double x0, double y0, double width, double height, int nx);
    friend Grid2D make_triangle_grid(double R, int n);
    friend Grid2D make_diamond_grid(double R, int n);

private:
    Grid2D() = default;
    void finalize();

    DomainShape shape_ = DomainShape::Rectangle;
    int nx_ = 0;
    int ny_ = 0;
    double h_ = 0.0;
    double x0_ = 0.0;
    double y0_ = 0.0;
    double radius_ = 0.0;
    std::vector<unsigned char> mask_;
    std::vector<double> weights_;
};

/// nx cells across the width; ny = round(height / h). height must be a multiple of h.
Grid2D make_rectangle_grid(double x0, double y0, double width, double height, int nx);
/// n cells across [0, R]; n must be even so that the apex (R/2, R/2) is a node.
Grid2D make_triangle_grid(double R, int n);
Grid2D make_diamond_grid(double R, int n);

enum class Edge { Bottom, Top, Left, Right };

/// Node indices along one side of a rectangle grid, in increasing coordinate order.
std::vector<std::size_t> edge_nodes(const Grid2D& grid, Edge edge);

/// Values over all nodes of a Grid2D (entries outside the mask are ignored and kept 0).
class ScalarField2D {
public:
    ScalarField2D(Grid2D grid, std::vector<double> values);

    const Grid2D& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    std::span<double> mutable_values() { return values_; }
    double at(int i, int j) const { return values_[grid_.index(i, j)]; }

private:
    Grid2D grid_;
    std::vector<double> values_;
};

}  // namespace pfscale
