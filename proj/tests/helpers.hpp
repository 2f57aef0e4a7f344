#pragma once

#include "fwals/dataset.hpp"
#include "oracles.hpp"

namespace testutil {

// Independent-column Gaussian dataset with a fixed coefficient pattern.
inline fwals::Dataset random_dataset(std::uint64_t seed, int n, int k1, int k2) {
    const Eigen::MatrixXd X1 = oracle::random_matrix(seed * 7919 + 1, n, k1);
    const Eigen::MatrixXd X2 = oracle::random_matrix(seed * 7919 + 2, n, k2);
    const Eigen::VectorXd eps = oracle::random_vector(seed * 7919 + 3, n);
    Eigen::VectorXd beta1 = Eigen::VectorXd::LinSpaced(k1, 1.0, 0.25);
    Eigen::VectorXd beta2 = Eigen::VectorXd::LinSpaced(k2, 0.5, 0.1);
    Eigen::VectorXd y = X1 * beta1 + X2 * beta2 + eps;
    return fwals::make_dataset(std::move(y), X1, X2);
}

}  // namespace testutil
