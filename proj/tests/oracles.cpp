#include "oracles.hpp"

#include <cmath>
#include <limits>
#include <random>
#include <stdexcept>

namespace oracle {

Eigen::MatrixXd annihilator(const Eigen::MatrixXd& X) {
    const Eigen::MatrixXd xtx = X.transpose() * X;
    return Eigen::MatrixXd::Identity(X.rows(), X.rows()) -
           X * xtx.inverse() * X.transpose();
}

Eigen::VectorXd ols(const Eigen::MatrixXd& X, const Eigen::VectorXd& y) {
    const Eigen::MatrixXd xtx = X.transpose() * X;
    return xtx.inverse() * (X.transpose() * y);
}

namespace {

// Lattice minimum of a*t^2 + 2*g*t over t in {0, step, ..., 1}.
double axis_min(double a, double g, double step) {
    const auto value = [&](double t) { return a * t * t + 2.0 * g * t; };
    double best = std::min(value(0.0), value(1.0));
    if (a > 0.0) {
        const double t_star = -g / a;
        for (double t : {std::floor(t_star / step) * step,
                         std::ceil(t_star / step) * step}) {
            if (t >= 0.0 && t <= 1.0) best = std::min(best, value(t));
        }
    }
    return best;
}

}  // namespace

double grid_min_box(const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double step) {
    const int k = static_cast<int>(A.rows());
    if (k < 1 || k > 3) throw std::invalid_argument("grid_min_box supports k in 1..3");
    const int n = static_cast<int>(std::lround(1.0 / step));
    double best = std::numeric_limits<double>::infinity();
    Eigen::VectorXd w = Eigen::VectorXd::Zero(k);

    const int last = k - 1;
    const int n1 = (k >= 2) ? n : 0;
    const int n2 = (k >= 3) ? n : 0;
    for (int i = 0; i <= n1; ++i) {
        if (k >= 2) w[0] = std::min(1.0, i * step);
        for (int j = 0; j <= n2; ++j) {
            if (k >= 3) w[1] = std::min(1.0, j * step);
            // Fix all but the last axis; the slice is the 1-D quadratic
            // A_ll t^2 + 2 (b_l + sum_{p<l} A_lp w_p) t + const.
            double fixed = 0.0, cross = b[last];
            for (int p = 0; p < last; ++p) {
                fixed += 2.0 * b[p] * w[p];
                cross += A(last, p) * w[p];
                for (int q = 0; q < last; ++q) fixed += w[p] * A(p, q) * w[q];
            }
            best = std::min(best, fixed + axis_min(A(last, last), cross, step));
            if (k < 3) break;
        }
        if (k < 2) break;
    }
    return best;
}

double simpson_posterior_mean(double t, const std::function<double(double)>& pi,
                              double lo, double hi, int n) {
    if (n % 2 != 0) throw std::invalid_argument("simpson: n must be even");
    const double h = (hi - lo) / n;
    const auto phi = [](double x) {
        return std::exp(-0.5 * x * x) / std::sqrt(2.0 * M_PI);
    };
    double numer = 0.0, denom = 0.0;
    for (int i = 0; i <= n; ++i) {
        const double eta = lo + i * h;
        const double weight = (i == 0 || i == n) ? 1.0 : (i % 2 == 1 ? 4.0 : 2.0);
        const double f = phi(t - eta) * pi(eta);
        numer += weight * eta * f;
        denom += weight * f;
    }
    if (denom <= 0.0) throw std::runtime_error("simpson: zero mass in window");
    return numer / denom;
}

Eigen::MatrixXd random_matrix(std::uint64_t seed, int rows, int cols) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::MatrixXd X(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j) X(i, j) = normal(rng);
    return X;
}

Eigen::VectorXd random_vector(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = normal(rng);
    return v;
}

Eigen::VectorXd random_uniform(std::uint64_t seed, int n) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = unif(rng);
    return v;
}

}  // namespace oracle
