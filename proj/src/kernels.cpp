#include "pfscale/kernels.hpp"

#include <cassert>
#include <vector>

namespace pfscale::kernels {

namespace {

double pairwise_rec(const double* x, std::size_t n) {
    if (n <= 8) {
        double s = 0.0;
        for (std::size_t i = 0; i < n; ++i) s += x[i];
        return s;
    }
    const std::size_t half = n / 2;
    return pairwise_rec(x, half) + pairwise_rec(x + half, n - half);
}

double end_slope_lo(std::span<const double> v, double h) {
    return (-3.0 * v[0] + 4.0 * v[1] - v[2]) / (2.0 * h);
}

double end_slope_hi(std::span<const double> v, double h) {
    const std::size_t m = v.size() - 1;
    return (3.0 * v[m] - 4.0 * v[m - 1] + v[m - 2]) / (2.0 * h);
}

}  // namespace

double pairwise_sum(std::span<const double> x) { return pairwise_rec(x.data(), x.size()); }

double frac_double_sum(std::span<const double> v, std::span<const double> w, double h,
                       std::span<double> grad) {
    const std::size_t m = v.size();
    assert(w.size() == m && m >= 3);
    const bool want_grad = !grad.empty();

    std::vector<double> kernel(m, 0.0);
    for (std::size_t d = 1; d < m; ++d) {
        const double dist = static_cast<double>(d) * h;
        kernel[d] = 1.0 / (dist * dist);
    }

    std::vector<double> row_energy(m);
    const double* vp = v.data();
    const double* wp = w.data();
    const double* kp = kernel.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t kk = 0; kk < static_cast<std::ptrdiff_t>(m); ++kk) {
        const std::size_t k = static_cast<std::size_t>(kk);
        const double vk = vp[k];
        double e = 0.0;
        double g = 0.0;
        for (std::size_t l = 0; l < k; ++l) {
            const double diff = vk - vp[l];
            const double t = wp[l] * kp[k - l] * diff;
            e += t * diff;
            g += t;
        }
        for (std::size_t l = k + 1; l < m; ++l) {
            const double diff = vk - vp[l];
            const double t = wp[l] * kp[l - k] * diff;
            e += t * diff;
            g += t;
        }
        row_energy[k] = wp[k] * e;
        if (want_grad) {
            grad[k] = 4.0 * wp[k] * g;
        }
    }

    // Diagonal band: w_k^2 d_k^2 with d the finite-difference slope.
    std::vector<double> diag(m);
    std::vector<double> slope(m);
    slope[0] = end_slope_lo(v, h);
    slope[m - 1] = end_slope_hi(v, h);
    for (std::size_t k = 1; k + 1 < m; ++k) {
        slope[k] = (v[k + 1] - v[k - 1]) / (2.0 * h);
    }
    for (std::size_t k = 0; k < m; ++k) {
        diag[k] = w[k] * w[k] * slope[k] * slope[k];
    }
    if (want_grad) {
        // d/dv of sum_k w_k^2 slope_k^2 = 2 sum_k w_k^2 slope_k dslope_k/dv.
        std::vector<double> c(m);
        for (std::size_t k = 0; k < m; ++k) c[k] = 2.0 * w[k] * w[k] * slope[k];
        const double inv = 1.0 / (2.0 * h);
        grad[0] += c[0] * (-3.0 * inv);
        grad[1] += c[0] * (4.0 * inv);
        grad[2] += c[0] * (-1.0 * inv);
        grad[m - 1] += c[m - 1] * (3.0 * inv);
        grad[m - 2] += c[m - 1] * (-4.0 * inv);
        grad[m - 3] += c[m - 1] * (1.0 * inv);
        for (std::size_t k = 1; k + 1 < m; ++k) {
            grad[k + 1] += c[k] * inv;
            grad[k - 1] -= c[k] * inv;
        }
    }
    return pairwise_sum(row_energy) + pairwise_sum(diag);
}

double h32_double_sum(std::span<const double> u, std::span<const double> w, double h) {
    const std::size_t m = u.size();
    assert(w.size() == m && m >= 5 && (m - 1) % 2 == 0);
    std::vector<double> row(m);
    const double* up = u.data();
    const double* wp = w.data();

#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ii = 0; ii < static_cast<std::ptrdiff_t>(m); ++ii) {
        const std::size_t i = static_cast<std::size_t>(ii);
        double s = 0.0;
        // j runs over indices with i + j even, j != i.
        for (std::size_t j = i % 2; j < m; j += 2) {
            if (j == i) continue;
            const std::size_t mid = (i + j) / 2;
            const double num = up[i] - 2.0 * up[mid] + up[j];
            const double dist = (static_cast<double>(i) - static_cast<double>(j)) * h;
            const double d2 = dist * dist;
            s += wp[j] * num * num / (d2 * d2);
        }
        double second;
        if (i == 0) {
            second = (2.0 * up[0] - 5.0 * up[1] + 4.0 * up[2] - up[3]) / (h * h);
        } else if (i == m - 1) {
            second = (2.0 * up[m - 1] - 5.0 * up[m - 2] + 4.0 * up[m - 3] - up[m - 4]) / (h * h);
        } else {
            second = (up[i + 1] - 2.0 * up[i] + up[i - 1]) / (h * h);
        }
        row[i] = 2.0 * wp[i] * (s + wp[i] * second * second / 16.0);
    }
    return pairwise_sum(row);
}

void csr_apply(const CsrView& a, std::span<const double> x, std::span<double> y) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(a.rows); ++rr) {
        const std::size_t r = static_cast<std::size_t>(rr);
        double s = 0.0;
        for (int p = a.outer[r]; p < a.outer[r + 1]; ++p) {
            s += a.values[p] * x[static_cast<std::size_t>(a.inner[p])];
        }
        y[r] = s;
    }
}

double csr_weighted_square_sum(const CsrView& a, std::span<const double> weight,
                               std::span<const double> x) {
    std::vector<double> row(a.rows);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t rr = 0; rr < static_cast<std::ptrdiff_t>(a.rows); ++rr) {
        const std::size_t r = static_cast<std::size_t>(rr);
        double s = 0.0;
        for (int p = a.outer[r]; p < a.outer[r + 1]; ++p) {
            s += a.values[p] * x[static_cast<std::size_t>(a.inner[p])];
        }
        row[r] = weight[r] * s * s;
    }
    return pairwise_sum(row);
}

}  // namespace pfscale::kernels
