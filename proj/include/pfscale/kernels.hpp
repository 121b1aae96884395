#pragma once

// OpenMP kernels for the singular double sums and sparse stencil products.
//
// Every reduction is organized so the result is bit-identical for any thread
// count: rows are summed serially in a fixed order, and row totals are combined
// with a fixed pairwise tree.

#include <cstddef>
#include <span>

namespace pfscale::kernels {

/// Pairwise (tree) summation with a fixed split order.
double pairwise_sum(std::span<const double> x);

/// Weighted H^{1/2} double sum over equally spaced samples v with spacing h:
///
///   sum_{k != l} w_k w_l (v_k - v_l)^2 / ((k - l) h)^2  +  sum_k w_k^2 d_k^2
///
/// where d_k is the second-order finite-difference slope of v (centered inside,
/// one-sided at the ends), i.e. the diagonal limit of the integrand.
/// When grad is non-empty it receives d(sum)/dv.
double frac_double_sum(std::span<const double> v, std::span<const double> w, double h,
                       std::span<double> grad);

/// Checkerboard H^{3/2} double sum on nodal values u (even cell count):
///
///   sum_{i + j even} 2 w_i w_j q_ij,   q_ij = (u_i - 2 u_m + u_j)^2 / ((i - j) h)^4, m = (i + j)/2,
///
/// with the diagonal q_ii = (u''_i)^2 / 16.
double h32_double_sum(std::span<const double> u, std::span<const double> w, double h);

/// Compressed-row view over a sparse matrix.
struct CsrView {
    const int* outer = nullptr;
    const int* inner = nullptr;
    const double* values = nullptr;
    std::size_t rows = 0;
};

/// y = A x, rows in parallel.
void csr_apply(const CsrView& a, std::span<const double> x, std::span<double> y);

/// sum_k weight_k * (A x)_k^2, rows in parallel and a pairwise final reduction.
double csr_weighted_square_sum(const CsrView& a, std::span<const double> weight,
                               std::span<const double> x);

}  // namespace pfscale::kernels
