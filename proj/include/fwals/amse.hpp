#pragma once

#include <Eigen/Dense>

#include "fwals/dataset.hpp"
#include "fwals/estimators.hpp"
#include "fwals/focus.hpp"
#include "fwals/ortho.hpp"

namespace fwals {

enum class OmegaMode { Homoskedastic, HC0 };

// Moment matrix of the limit distribution of the score:
//   homoskedastic: sigma2_full * X'X/N   (X = [X1 X2], in that order)
//   hc0:           (1/N) sum_i e_i^2 x_i x_i'
Eigen::MatrixXd estimate_omega(const Dataset& ds, const CoreEstimates& ce,
                               OmegaMode mode);

// Everything the plug-in asymptotic-MSE objective needs, all evaluated at the
// full model (the gradient D in particular).
struct AsymptoticComponents {
    Eigen::Index n = 0;
    Eigen::Index k1 = 0;
    Eigen::Index k2 = 0;
    Eigen::MatrixXd Q11_inv;               // (X1'X1/N)^{-1}
    Eigen::MatrixXd Xi;                    // k1 x k2
    Eigen::MatrixXd C;                     // Lambda P^{-1/2}
    Eigen::MatrixXd C_inv;                 // P^{1/2} Lambda^{-1}
    Eigen::MatrixXd B;                     // k2 x k:  [-C'Xi'  C']
    Eigen::MatrixXd Omega;                 // k x k
    Eigen::VectorXd delta_hat;             // sqrt(N) C beta2
    Eigen::MatrixXd delta_outer_corrected; // delta delta' - C B Omega B' C'
    Eigen::VectorXd D;                     // focus gradient at full-model beta1
    Eigen::VectorXd beta1_full;            // narrow - Xi C beta2
    Eigen::VectorXd V_diag;                // diag of V = DIAG(C'Xi'D)
};

AsymptoticComponents build_components(const Dataset& ds, const OrthoTransform& ot,
                                      const CoreEstimates& ce, const FocusSpec& fs,
                                      OmegaMode mode = OmegaMode::Homoskedastic);

// Plug-in asymptotic MSE of the focus at box weights w: the squared
// delta-method bias with the corrected delta-outer-product substituted, plus
// the delta-method variance D'Psi(W)OmegaPsi(W)'D, expanded into six terms
// (three bias, three variance). May be negative: the bias correction is
// unbiased, not nonnegative-definite.
double amse_objective(const AsymptoticComponents& ac, const Eigen::VectorXd& w);

// The same objective as an explicit quadratic  w'Aw + 2b'w + c0.
struct AmseQuadratic {
    Eigen::MatrixXd A;  // symmetric, possibly indefinite
    Eigen::VectorXd b;
    double c0 = 0.0;

    double value(const Eigen::VectorXd& w) const {
        return w.dot(A * w) + 2.0 * b.dot(w) + c0;
    }
};

AmseQuadratic as_quadratic(const AsymptoticComponents& ac);

// Population counterpart for validation: everything is exact, delta is the
// true local parameter.
struct PopulationModel {
    int k1 = 0;
    Eigen::MatrixXd Q;      // k x k second-moment matrix, positive definite
    Eigen::MatrixXd Omega;  // k x k
    Eigen::VectorXd delta;  // k2
    Eigen::VectorXd beta1;  // true core coefficients (focus gradient point)
    FocusSpec focus;
};

// Population components (Xi, C, B, V, D from the Q/Omega limits).
struct PopulationComponents {
    Eigen::MatrixXd Q11_inv;
    Eigen::MatrixXd Xi;
    Eigen::MatrixXd C;
    Eigen::MatrixXd C_inv;
    Eigen::MatrixXd B;
    Eigen::VectorXd D;
    Eigen::VectorXd V_diag;
};

PopulationComponents population_components(const PopulationModel& pm);

// Exact asymptotic MSE at box weights w:
//   [D'Xi C (I - W) C^{-1} delta]^2 + D'Psi(W) Omega Psi(W)'D,
//   Psi(W) = [Q11^{-1} + Xi C W C'Xi'  |  -Xi C W C'].
double theoretical_amse(const PopulationModel& pm, const Eigen::VectorXd& w);

// Squared-bias / variance split of the same quantity (used by tests & CLI).
struct AmseSplit {
    double bias = 0.0;      // signed delta-method bias
    double variance = 0.0;
    double total = 0.0;     // bias^2 + variance
};

AmseSplit theoretical_amse_split(const PopulationModel& pm, const Eigen::VectorXd& w);

}  // namespace fwals
