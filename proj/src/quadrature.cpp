#include "fwals/quadrature.hpp"

#include <cmath>

#include "fwals/errors.hpp"

namespace fwals {

GaussLegendre gauss_legendre(int n) {
    if (n < 1) throw ConfigError("gauss_legendre: need n >= 1");
    GaussLegendre gl;
    gl.nodes.resize(n);
    gl.weights.resize(n);
    const double eps = 1e-15;
    const int m = (n + 1) / 2;  // roots come in +/- pairs
    for (int i = 0; i < m; ++i) {
        // Chebyshev-based initial guess, then Newton on P_n.
        double x = std::cos(M_PI * (i + 0.75) / (n + 0.5));
        double pp = 0.0;
        for (int iter = 0; iter < 100; ++iter) {
            double p0 = 1.0, p1 = 0.0;
            for (int j = 0; j < n; ++j) {
                const double p2 = p1;
                p1 = p0;
                p0 = ((2.0 * j + 1.0) * x * p1 - j * p2) / (j + 1.0);
            }
            pp = n * (x * p0 - p1) / (x * x - 1.0);
            const double dx = p0 / pp;
            x -= dx;
            if (std::abs(dx) < eps) break;
        }
        gl.nodes[i] = -x;
        gl.nodes[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * pp * pp);
        gl.weights[i] = w;
        gl.weights[n - 1 - i] = w;
    }
    if (n % 2 == 1) gl.nodes[n / 2] = 0.0;  // exact middle root
    return gl;
}

double log_normal_pdf(double x) {
    static const double log_inv_sqrt_2pi = -0.5 * std::log(2.0 * M_PI);
    return log_inv_sqrt_2pi - 0.5 * x * x;
}

double log_normal_cdf(double x) {
    if (x >= 0.0) {
        // Phi(x) = 1 - Phi(-x); both pieces are well-scaled here.
        return std::log1p(-0.5 * std::erfc(x / M_SQRT2));
    }
    if (x > -37.0) {
        // erfc stays normal (>= ~1e-300) on this range.
        return std::log(0.5 * std::erfc(-x / M_SQRT2));
    }
    // Asymptotic expansion of the Mills ratio; relative error < 1e-12 here.
    const double x2 = x * x;
    double series = 1.0 - 1.0 / x2 + 3.0 / (x2 * x2) - 15.0 / (x2 * x2 * x2) +
                    105.0 / (x2 * x2 * x2 * x2);
    return -0.5 * x2 - std::log(-x) - 0.5 * std::log(2.0 * M_PI) + std::log(series);
}

}  // namespace fwals
