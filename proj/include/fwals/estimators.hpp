#pragma once

#include <Eigen/Dense>

#include "fwals/dataset.hpp"
#include "fwals/ortho.hpp"

namespace fwals {

// Shared estimation quantities every averaging method builds on:
//   beta1_narrow = (X1'X1)^{-1} X1'y
//   beta2        = X2_star' M1 y / N      (semi-orthogonalized auxiliaries)
//   Xi           = (X1'X1)^{-1} X1'X2     (regression of X2 on X1)
//   sigma2       = RSS_full / (N - k)     (full-model, DOF-corrected)
struct CoreEstimates {
    Eigen::VectorXd beta1_narrow;    // k1
    Eigen::VectorXd beta2;           // k2
    Eigen::MatrixXd Xi;              // k1 x k2
    Eigen::VectorXd resid_full;      // N, full-model residuals
    double sigma2 = 0.0;
    double rss_narrow = 0.0;         // ||M1 y||^2
    Eigen::VectorXd my;              // M1 y (reused by sub-model algebra)
};

CoreEstimates fit_core(const Dataset& ds, const OrthoTransform& ot);

// Core-coefficient estimate of the sub-model that keeps the selected
// semi-orthogonalized auxiliaries:
//   beta1_m = beta1_narrow - Xi C (Pi'Pi) beta2.
Eigen::VectorXd submodel_beta1(const CoreEstimates& ce, const OrthoTransform& ot,
                               const SubmodelSelection& sel);

// Weighted-average core coefficients at per-regressor weights w in [0,1]^k2:
//   beta1(w) = beta1_narrow - Xi C diag(w) beta2.
// Entries outside [0,1] by more than 1e-12 raise NumericError.
Eigen::VectorXd wals_beta1(const CoreEstimates& ce, const OrthoTransform& ot,
                           const Eigen::VectorXd& w);

// Residual sum of squares of sub-model m in the orthogonalized
// representation: RSS_m = RSS_narrow - N * sum_{j in m} beta2_j^2.
double submodel_rss(const CoreEstimates& ce, const Dataset& ds,
                    const SubmodelSelection& sel);

}  // namespace fwals
