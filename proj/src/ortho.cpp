#include "fwals/ortho.hpp"

#include "fwals/errors.hpp"
#include "fwals/linalg.hpp"

namespace fwals {

Eigen::MatrixXd OrthoTransform::C_inv() const {
    // C^{-1} = P^{1/2} Lambda^{-1}; P^{1/2} = P * P^{-1/2} (symmetric functions
    // of the same matrix commute).
    return (P * P_inv_sqrt) * lambda.cwiseInverse().asDiagonal();
}

OrthoTransform semi_orthogonalize(const Dataset& ds) {
    const auto n = static_cast<double>(ds.n());
    const Eigen::MatrixXd m1x2 = residualize(ds.X1, ds.X2);
    const Eigen::MatrixXd G = (ds.X2.transpose() * m1x2) / n;  // X2'M1X2/N

    OrthoTransform ot;
    ot.lambda.resize(ds.k2());
    // Relative floor: a column whose partialled-out variance is negligible
    // against its raw variance lies (numerically) in the span of the core
    // block, and the transform would amplify pure roundoff.
    for (Eigen::Index j = 0; j < ds.k2(); ++j) {
        const double g = G(j, j);
        const double raw = ds.X2.col(j).squaredNorm() / n;
        if (!(g > 1e-12 * std::max(raw, 1e-300)))
            throw NumericError("semi-orthogonalize: auxiliary regressor " +
                               std::to_string(j) +
                               " has no variation after partialling out the core "
                               "block (diagonal " + std::to_string(g) + ")");
        ot.lambda[j] = 1.0 / std::sqrt(g);
    }
    ot.P = ot.lambda.asDiagonal() * G * ot.lambda.asDiagonal();
    // Exact unit diagonal by construction; re-impose to kill roundoff drift.
    ot.P.diagonal().setOnes();
    ot.P = 0.5 * (ot.P + ot.P.transpose()).eval();
    ot.P_inv_sqrt = inv_sqrt_spd(ot.P);
    ot.C = ot.lambda.asDiagonal() * ot.P_inv_sqrt;
    ot.X2_star = ds.X2 * ot.C;
    return ot;
}

}  // namespace fwals
