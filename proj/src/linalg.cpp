#include "fwals/linalg.hpp"

#include <Eigen/Eigenvalues>

#include "fwals/errors.hpp"

namespace fwals {

Eigen::MatrixXd residualize(const Eigen::MatrixXd& X, const Eigen::MatrixXd& V) {
    // M_X V = V - X * argmin_b ||X b - V||; QR keeps this O(N k^2) and avoids
    // ever forming the N x N projector.
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    return V - X * qr.solve(V);
}

Eigen::VectorXd residualize(const Eigen::MatrixXd& X, const Eigen::VectorXd& v) {
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(X);
    return v - X * qr.solve(v);
}

namespace {

Eigen::MatrixXd spd_power(const Eigen::MatrixXd& A, double power) {
    if (A.rows() != A.cols()) throw NumericError("spd power: matrix not square");
    const Eigen::Index k = A.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(0.5 * (A + A.transpose()));
    if (es.info() != Eigen::Success)
        throw NumericError("spd power: eigendecomposition failed");
    const double floor = 1e-12 * A.trace() / static_cast<double>(k);
    Eigen::VectorXd d = es.eigenvalues();
    for (Eigen::Index i = 0; i < k; ++i) {
        if (d[i] <= floor)
            throw NumericError("spd power: eigenvalue " + std::to_string(d[i]) +
                               " at or below floor " + std::to_string(floor) +
                               " (near-singular matrix)");
        d[i] = std::pow(d[i], power);
    }
    return es.eigenvectors() * d.asDiagonal() * es.eigenvectors().transpose();
}

}  // namespace

Eigen::MatrixXd inv_sqrt_spd(const Eigen::MatrixXd& A) { return spd_power(A, -0.5); }

Eigen::MatrixXd sqrt_spd(const Eigen::MatrixXd& A) { return spd_power(A, 0.5); }

}  // namespace fwals
