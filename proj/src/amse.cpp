#include "fwals/amse.hpp"

#include <Eigen/Cholesky>

#include "fwals/errors.hpp"
#include "fwals/linalg.hpp"

namespace fwals {

Eigen::MatrixXd estimate_omega(const Dataset& ds, const CoreEstimates& ce,
                               OmegaMode mode) {
    const auto n = static_cast<double>(ds.n());
    Eigen::MatrixXd X(ds.n(), ds.k());
    X << ds.X1, ds.X2;
    if (mode == OmegaMode::Homoskedastic) {
        return ce.sigma2 * (X.transpose() * X) / n;
    }
    // HC0: (1/N) sum_i e_i^2 x_i x_i'
    return X.transpose() * ce.resid_full.array().square().matrix().asDiagonal() * X / n;
}

namespace {

Eigen::MatrixXd q11_inverse(const Dataset& ds) {
    const auto n = static_cast<double>(ds.n());
    const Eigen::MatrixXd Q11 = ds.X1.transpose() * ds.X1 / n;
    Eigen::LDLT<Eigen::MatrixXd> ldlt(Q11);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericError("components: X1'X1/N is not positive definite");
    return ldlt.solve(Eigen::MatrixXd::Identity(ds.k1(), ds.k1()));
}

}  // namespace

AsymptoticComponents build_components(const Dataset& ds, const OrthoTransform& ot,
                                      const CoreEstimates& ce, const FocusSpec& fs,
                                      OmegaMode mode) {
    AsymptoticComponents ac;
    ac.n = ds.n();
    ac.k1 = ds.k1();
    ac.k2 = ds.k2();
    ac.Q11_inv = q11_inverse(ds);
    ac.Xi = ce.Xi;
    ac.C = ot.C;
    ac.C_inv = ot.C_inv();

    ac.B.resize(ac.k2, ac.k1 + ac.k2);
    ac.B.leftCols(ac.k1) = -(ot.C.transpose() * ce.Xi.transpose());
    ac.B.rightCols(ac.k2) = ot.C.transpose();

    ac.Omega = estimate_omega(ds, ce, mode);
    ac.delta_hat = std::sqrt(static_cast<double>(ds.n())) * (ot.C * ce.beta2);

    const Eigen::MatrixXd CB = ot.C * ac.B;
    Eigen::MatrixXd corrected =
        ac.delta_hat * ac.delta_hat.transpose() - CB * ac.Omega * CB.transpose();
    ac.delta_outer_corrected = 0.5 * (corrected + corrected.transpose());

    ac.beta1_full = ce.beta1_narrow - ce.Xi * (ot.C * ce.beta2);
    ac.D = focus_gradient(fs, ac.beta1_full);
    ac.V_diag = ot.C.transpose() * (ce.Xi.transpose() * ac.D);
    return ac;
}

// The objective is the exact expansion of
//   [plug-in squared bias] + [plug-in delta-method variance]
// with the corrected delta-outer-product substituted for every delta delta':
//   bias(w)  = D'Xi C (I - W) C^{-1} delta   ->  r(w)' Delta r(w),
//              r(w) = Xi'D - (C^{-1})' V w
//   var(w)   = D'Psi(W) Omega Psi(W)'D
//            = D'Q11^{-1}Omega11 Q11^{-1}D + w'V B Omega B' V w
//              - 2 w'V B Omega H Q11^{-1} D.
double amse_objective(const AsymptoticComponents& ac, const Eigen::VectorXd& w) {
    if (w.size() != ac.k2)
        throw NumericError("amse objective: weight length " + std::to_string(w.size()) +
                           " != k2 = " + std::to_string(ac.k2));
    for (Eigen::Index j = 0; j < w.size(); ++j)
        if (!(w[j] >= -1e-12 && w[j] <= 1.0 + 1e-12))
            throw NumericError("amse objective: weight " + std::to_string(j) + " = " +
                               std::to_string(w[j]) + " outside [0,1]");

    const Eigen::VectorXd xid = ac.Xi.transpose() * ac.D;       // Xi'D
    const Eigen::VectorXd vw = ac.V_diag.cwiseProduct(w);       // V w
    const Eigen::VectorXd cinv_t_vw = ac.C_inv.transpose() * vw;

    const double term1 = xid.dot(ac.delta_outer_corrected * xid);
    const double term2 = cinv_t_vw.dot(ac.delta_outer_corrected * cinv_t_vw);
    const double term3 = -2.0 * cinv_t_vw.dot(ac.delta_outer_corrected * xid);

    const Eigen::VectorXd q11inv_d = ac.Q11_inv * ac.D;
    const Eigen::MatrixXd omega11 = ac.Omega.topLeftCorner(ac.k1, ac.k1);
    const double term4 = q11inv_d.dot(omega11 * q11inv_d);
    const Eigen::VectorXd bt_vw = ac.B.transpose() * vw;
    const double term5 = bt_vw.dot(ac.Omega * bt_vw);
    Eigen::VectorXd h_q11inv_d = Eigen::VectorXd::Zero(ac.k1 + ac.k2);
    h_q11inv_d.head(ac.k1) = q11inv_d;
    const double term6 = -2.0 * bt_vw.dot(ac.Omega * h_q11inv_d);

    return term1 + term2 + term3 + term4 + term5 + term6;
}

AmseQuadratic as_quadratic(const AsymptoticComponents& ac) {
    AmseQuadratic q;
    const Eigen::MatrixXd V = ac.V_diag.asDiagonal();
    const Eigen::VectorXd xid = ac.Xi.transpose() * ac.D;
    const Eigen::VectorXd q11inv_d = ac.Q11_inv * ac.D;
    Eigen::VectorXd h_q11inv_d = Eigen::VectorXd::Zero(ac.k1 + ac.k2);
    h_q11inv_d.head(ac.k1) = q11inv_d;

    const Eigen::MatrixXd VCinv = V * ac.C_inv;
    Eigen::MatrixXd A = VCinv * ac.delta_outer_corrected * VCinv.transpose() +
                        V * ac.B * ac.Omega * ac.B.transpose() * V;
    q.A = 0.5 * (A + A.transpose());
    q.b = -(VCinv * (ac.delta_outer_corrected * xid)) -
          V * (ac.B * (ac.Omega * h_q11inv_d));
    const Eigen::MatrixXd omega11 = ac.Omega.topLeftCorner(ac.k1, ac.k1);
    q.c0 = xid.dot(ac.delta_outer_corrected * xid) + q11inv_d.dot(omega11 * q11inv_d);
    return q;
}

PopulationComponents population_components(const PopulationModel& pm) {
    const Eigen::Index k = pm.Q.rows();
    const Eigen::Index k1 = pm.k1;
    const Eigen::Index k2 = k - k1;
    if (k1 < 1 || k2 < 1 || pm.Q.cols() != k)
        throw ConfigError("population: need square Q with 1 <= k1 < k");
    if (pm.delta.size() != k2)
        throw ConfigError("population: delta length != k2");
    Eigen::LDLT<Eigen::MatrixXd> ldlt(pm.Q);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive())
        throw NumericError("population: Q is not positive definite");

    PopulationComponents pc;
    const Eigen::MatrixXd Q11 = pm.Q.topLeftCorner(k1, k1);
    const Eigen::MatrixXd Q12 = pm.Q.topRightCorner(k1, k2);
    const Eigen::MatrixXd Q22 = pm.Q.bottomRightCorner(k2, k2);
    Eigen::LDLT<Eigen::MatrixXd> ldlt11(Q11);
    if (ldlt11.info() != Eigen::Success || !ldlt11.isPositive())
        throw NumericError("population: Q11 is not positive definite");
    pc.Q11_inv = ldlt11.solve(Eigen::MatrixXd::Identity(k1, k1));
    pc.Xi = ldlt11.solve(Q12);

    const Eigen::MatrixXd G = Q22 - Q12.transpose() * pc.Xi;  // Schur complement
    Eigen::VectorXd lambda(k2);
    for (Eigen::Index j = 0; j < k2; ++j) lambda[j] = 1.0 / std::sqrt(G(j, j));
    Eigen::MatrixXd P = lambda.asDiagonal() * G * lambda.asDiagonal();
    P.diagonal().setOnes();
    const Eigen::MatrixXd P_inv_sqrt = inv_sqrt_spd(P);
    pc.C = lambda.asDiagonal() * P_inv_sqrt;
    pc.C_inv = (P * P_inv_sqrt) * lambda.cwiseInverse().asDiagonal();

    pc.B.resize(k2, k);
    pc.B.leftCols(k1) = -(pc.C.transpose() * pc.Xi.transpose());
    pc.B.rightCols(k2) = pc.C.transpose();

    pc.D = focus_gradient(pm.focus, pm.beta1);
    pc.V_diag = pc.C.transpose() * (pc.Xi.transpose() * pc.D);
    return pc;
}

AmseSplit theoretical_amse_split(const PopulationModel& pm, const Eigen::VectorXd& w) {
    const PopulationComponents pc = population_components(pm);
    const Eigen::Index k1 = pm.k1;
    const Eigen::Index k2 = pm.Q.rows() - k1;
    if (w.size() != k2) throw ConfigError("theoretical amse: weight length != k2");

    AmseSplit out;
    // bias = D'Xi C (I - W) C^{-1} delta
    const Eigen::VectorXd cinv_delta = pc.C_inv * pm.delta;
    const Eigen::VectorXd one_minus_w = Eigen::VectorXd::Ones(k2) - w;
    out.bias = (pc.Xi.transpose() * pc.D)
                   .dot(pc.C * one_minus_w.cwiseProduct(cinv_delta));

    // variance = D'Psi Omega Psi'D, Psi = [Q11^{-1} + Xi C W C'Xi' | -Xi C W C']
    const Eigen::MatrixXd CWC = pc.C * w.asDiagonal() * pc.C.transpose();
    Eigen::MatrixXd psi(k1, k1 + k2);
    psi.leftCols(k1) = pc.Q11_inv + pc.Xi * CWC * pc.Xi.transpose();
    psi.rightCols(k2) = -(pc.Xi * CWC);
    const Eigen::VectorXd psi_d = psi.transpose() * pc.D;
    out.variance = psi_d.dot(pm.Omega * psi_d);
    out.total = out.bias * out.bias + out.variance;
    return out;
}

double theoretical_amse(const PopulationModel& pm, const Eigen::VectorXd& w) {
    return theoretical_amse_split(pm, w).total;
}

}  // namespace fwals
