#pragma once

#include <Eigen/Dense>

namespace fwals {

// Gauss-Legendre nodes/weights on [-1, 1], computed by Newton iteration on
// the Legendre recurrence. n >= 1.
struct GaussLegendre {
    Eigen::VectorXd nodes;
    Eigen::VectorXd weights;
};

GaussLegendre gauss_legendre(int n);

// log phi(x), standard normal density.
double log_normal_pdf(double x);

// log Phi(x), standard normal CDF; erfc-based with an asymptotic tail so it
// stays finite and accurate for x down to about -1e4.
double log_normal_cdf(double x);

}  // namespace fwals
