#pragma once

#include <Eigen/Dense>

namespace fwals {

// Residuals of each column of V after projecting on the column space of X,
// i.e. M_X V with M_X = I - X(X'X)^{-1}X'. Computed through a Householder QR
// of X; the N x N projector is never materialized.
Eigen::MatrixXd residualize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& V);
Eigen::VectorXd residualize(const Eigen::MatrixXd& X, const Eigen::VectorXd& v);

// Symmetric inverse square root A^{-1/2} of a symmetric positive definite
// matrix via eigendecomposition. Eigenvalues below
//   eig_floor = 1e-12 * trace(A)/dim
// trigger a NumericError (near-singular input).
Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& A);

// Symmetric square root A^{1/2}, same eigenvalue floor.
Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& A);

}  // namespace fwals
