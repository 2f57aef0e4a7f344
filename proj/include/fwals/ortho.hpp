#pragma once

#include <Eigen/Dense>

#include "fwals/dataset.hpp"

namespace fwals {

// Semi-orthogonalized representation of the auxiliary block:
//   X2_star = X2 * C,  C = Lambda * P^{-1/2},
// with Lambda = diag(diag(X2'M1X2/N))^{-1/2} and P = Lambda (X2'M1X2/N) Lambda,
// so that X2_star' M1 X2_star / N = I exactly.
struct OrthoTransform {
    Eigen::VectorXd lambda;      // diagonal of Lambda, k2
    Eigen::MatrixXd P;           // k2 x k2, unit diagonal correlation-like
    Eigen::MatrixXd P_inv_sqrt;  // symmetric P^{-1/2}
    Eigen::MatrixXd C;           // Lambda * P^{-1/2}
    Eigen::MatrixXd X2_star;     // N x k2

    // C^{-1} = P^{1/2} Lambda^{-1}, assembled from the stored factors.
    Eigen::MatrixXd C_inv() const;
};

// Builds the transform. Near-singular X2'M1X2 (collinear auxiliaries after
// partialling out X1) raises NumericError via the eigenvalue floor.
OrthoTransform semi_orthogonalize(const Dataset& ds);

}  // namespace fwals
