#include "pfscale/samples.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <vector>

namespace pfscale {

double SampleSource::uniform(double lo, double hi) {
    // Top 53 bits mapped to [0, 1); independent of the standard library's distributions.
    const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
    return lo + (hi - lo) * u;
}

ScalarField1D SampleSource::smooth_trace(const Grid1D& grid) {
    const int modes = 1 + static_cast<int>(uniform(0.0, 4.0));
    std::vector<double> amp(modes), phase(modes);
    for (int k = 0; k < modes; ++k) {
        amp[k] = uniform(-1.0, 1.0) / (k + 1);
        phase[k] = uniform(0.0, 2.0 * std::numbers::pi);
    }
    const double quad = uniform(0.5, 1.5) * (uniform(0.0, 1.0) < 0.5 ? -1.0 : 1.0);
    const double tilt = uniform(-1.0, 1.0);
    const double L = grid.length();
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        const double t = (grid.node(i) - grid.lo()) / L;
        double s = quad * t * t + tilt * t;
        for (int k = 0; k < modes; ++k) s += amp[k] * std::sin((k + 1) * std::numbers::pi * t + phase[k]);
        v[i] = s;
    }
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    for (double& x : v) x /= m;
    return ScalarField1D(grid, std::move(v));
}

ScalarField1D SampleSource::nonnegative(const Grid1D& grid) {
    const int bumps = 1 + static_cast<int>(uniform(0.0, 3.0));
    std::vector<double> c(bumps), w(bumps), a(bumps);
    for (int k = 0; k < bumps; ++k) {
        c[k] = uniform(grid.lo(), grid.hi());
        w[k] = uniform(0.05, 0.5) * grid.length();
        a[k] = uniform(0.1, 2.0);
    }
    const double floor = uniform(0.0, 0.2);
    std::vector<double> v(grid.nodes());
    for (std::size_t i = 0; i < v.size(); ++i) {
        double s = floor;
        for (int k = 0; k < bumps; ++k) {
            const double z = (grid.node(i) - c[k]) / w[k];
            s += a[k] * std::exp(-z * z);
        }
        v[i] = s;
    }
    return ScalarField1D(grid, std::move(v));
}

ScalarField1D smoothstep_trace(const Grid1D& grid) {
    return sample(
        [&](double x) {
            const double t = (x - grid.lo()) / grid.length();
            return t * t * (3.0 - 2.0 * t);
        },
        grid);
}

}  // namespace pfscale
