#include "fwals/estimators.hpp"

#include "fwals/errors.hpp"
#include "fwals/linalg.hpp"

namespace fwals {

CoreEstimates fit_core(const Dataset& ds, const OrthoTransform& ot) {
    const auto n = static_cast<double>(ds.n());
    CoreEstimates ce;

    Eigen::HouseholderQR<Eigen::MatrixXd> qr1(ds.X1);
    ce.beta1_narrow = qr1.solve(ds.y);
    ce.Xi = qr1.solve(ds.X2);

    ce.my = ds.y - ds.X1 * ce.beta1_narrow;          // M1 y
    ce.beta2 = ot.X2_star.transpose() * ce.my / n;   // X2_star' M1 y / N
    ce.rss_narrow = ce.my.squaredNorm();

    // Full model: residuals via the orthogonalized decomposition
    //   fitted = P_{X1} y + sum_j M1 x*_j beta2_j,
    // identical to OLS of y on [X1 X2].
    const Eigen::MatrixXd m1x2_star = ot.X2_star - ds.X1 * qr1.solve(ot.X2_star);
    ce.resid_full = ce.my - m1x2_star * ce.beta2;
    const double dof = n - static_cast<double>(ds.k());
    ce.sigma2 = ce.resid_full.squaredNorm() / dof;
    return ce;
}

Eigen::VectorXd submodel_beta1(const CoreEstimates& ce, const OrthoTransform& ot,
                               const SubmodelSelection& sel) {
    return ce.beta1_narrow -
           ce.Xi * (ot.C * (sel.diagonal().asDiagonal() * ce.beta2));
}

Eigen::VectorXd wals_beta1(const CoreEstimates& ce, const OrthoTransform& ot,
                           const Eigen::VectorXd& w) {
    if (w.size() != ce.beta2.size())
        throw NumericError("wals_beta1: weight length " + std::to_string(w.size()) +
                           " != k2 = " + std::to_string(ce.beta2.size()));
    for (Eigen::Index j = 0; j < w.size(); ++j)
        if (!(w[j] >= -1e-12 && w[j] <= 1.0 + 1e-12))
            throw NumericError("wals_beta1: weight " + std::to_string(j) + " = " +
                               std::to_string(w[j]) + " outside [0,1]");
    return ce.beta1_narrow - ce.Xi * (ot.C * w.cwiseProduct(ce.beta2));
}

double submodel_rss(const CoreEstimates& ce, const Dataset& ds,
                    const SubmodelSelection& sel) {
    const auto n = static_cast<double>(ds.n());
    double explained = 0.0;
    for (Eigen::Index j = 0; j < ce.beta2.size(); ++j)
        if (sel.included[static_cast<std::size_t>(j)])
            explained += ce.beta2[j] * ce.beta2[j];
    return ce.rss_narrow - n * explained;
}

}  // namespace fwals
