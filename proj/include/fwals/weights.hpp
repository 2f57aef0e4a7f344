#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <vector>

#include "fwals/amse.hpp"
#include "fwals/dataset.hpp"
#include "fwals/estimators.hpp"
#include "fwals/focus.hpp"
#include "fwals/ortho.hpp"

namespace fwals {

// ---------------------------------------------------------------------------
// Box-constrained quadratic minimization (the FWALS weight step)
// ---------------------------------------------------------------------------

struct MinimizeOptions {
    double tol = 1e-10;        // per-coordinate movement tolerance
    int max_sweeps = 10000;
    int random_starts = 8;     // on top of {0, 1, midpoint}
    std::uint64_t seed = 0;    // random starts are deterministic given this
};

struct BoxMinimum {
    Eigen::VectorXd w;
    double objective = 0.0;
    bool converged = true;     // false iff some start hit the sweep cap
};

// Projected coordinate descent on [0,1]^k2 with the exact one-dimensional
// quadratic minimum per coordinate (clipped to the box; concave coordinates
// resolve to an endpoint), multistarted. Handles indefinite A.
BoxMinimum minimize_box(const AmseQuadratic& q, const MinimizeOptions& opts = {});

// ---------------------------------------------------------------------------
// Sub-model enumeration competitors
// ---------------------------------------------------------------------------

struct SubmodelOptions {
    int k2_cap = 14;  // refuse to enumerate 2^k2 sub-models beyond this
};

// Per-sub-model focused estimates shared by the enumeration methods.
struct SubmodelFocusTable {
    std::vector<SubmodelSelection> models;
    Eigen::VectorXd mu;   // M, focus at each sub-model's beta1
    Eigen::VectorXd rss;  // M, orthogonalized-representation RSS
};

SubmodelFocusTable submodel_focus_table(const Dataset& ds, const OrthoTransform& ot,
                                        const CoreEstimates& ce, const FocusSpec& fs,
                                        const SubmodelOptions& opts = {});

// Joint plug-in AMSE matrix J of the averaged focused estimator over all
// sub-models: J = Bias + Cov with
//   Bias_{m,m'} = a_m' Delta a_{m'},  a_m = (C')^{-1}(I - S_m) C'Xi'D
//   Cov_{m,m'}  = (Psi_m'D)' Omega (Psi_m''D)
// (Delta is the corrected delta-outer-product).
Eigen::MatrixXd submodel_joint_amse(const AsymptoticComponents& ac,
                                    const std::vector<SubmodelSelection>& models);

struct SimplexMinimizerOptions {
    double tol = 1e-10;
    int max_iters = 5000;
    int vertex_starts = 8;     // best vertices kept as starts
    int random_starts = 8;
    std::uint64_t seed = 0;
};

// min u'Ju over the probability simplex by projected gradient with exact
// line search, multistarted from the best vertices, the barycenter, and
// seeded random points.
struct SimplexMinimum {
    Eigen::VectorXd w;
    double objective = 0.0;
    bool converged = true;
};

SimplexMinimum minimize_simplex(const Eigen::MatrixXd& J,
                                const SimplexMinimizerOptions& opts = {});

struct FicResult {
    SimplexWeights weights;       // over enumerate_submodels(k2)
    double objective = 0.0;       // u'Ju at the optimum
    SubmodelFocusTable table;
    double mu = 0.0;              // sum_m w_m mu_m
};

// Focused-information-criterion averaging over all 2^k2 sub-models.
FicResult fic_weights(const Dataset& ds, const OrthoTransform& ot,
                      const CoreEstimates& ce, const FocusSpec& fs,
                      OmegaMode mode = OmegaMode::Homoskedastic,
                      const SubmodelOptions& sopts = {},
                      const SimplexMinimizerOptions& mopts = {});

enum class InfoCriterion { AIC, BIC };

// Smoothed information-criterion weights over all sub-models:
//   IC_m = N log(RSS_m/N) + penalty * (k1 + k2_m),
// penalty 2 (AIC) or log N (BIC); weights proportional to exp(-IC_m/2),
// computed with max-subtraction.
SimplexWeights ic_weights(const Dataset& ds, const CoreEstimates& ce,
                          const std::vector<SubmodelSelection>& models,
                          InfoCriterion ic);

struct MmseResult {
    Eigen::VectorXd w;        // signed, sums to one
    double objective = 0.0;   // w'Jw
    double mu = 0.0;
};

// Minimum-MSE averaging: minimize w'Jw subject only to 1'w = 1 (weights may
// leave [0,1]). Solved by the KKT system; singular systems fall back to the
// least-norm solution.
MmseResult mmse_weights(const Eigen::MatrixXd& J, const Eigen::VectorXd& mu_table);

// ---------------------------------------------------------------------------
// Prior-based per-regressor shrinkage (posterior-mean weights)
// ---------------------------------------------------------------------------

enum class PriorFamily { Laplace, Cauchy, Pareto, Weibull };

// Posterior-mean shrinkage weight omega(t) = m(t)/t for t ~ N(eta, 1) with
// the given prior on eta. Laplace uses the closed form; the others use the
// posterior-mean integral with 401-node Gauss-Legendre quadrature in
// log-space (split at the density's break point eta = 0). |t| is floored at
// 1e-10 (sign preserved).
double prior_weight(PriorFamily family, double t);

// Same weight through the numeric quadrature for every family, including the
// one with a closed form; exposed so the two routes can be cross-validated.
double prior_weight_quadrature(PriorFamily family, double t);

// log prior density at eta (normalized; only ratios matter for the
// posterior mean but the densities integrate to one anyway).
double log_prior_density(PriorFamily family, double eta);

struct PriorEstimate {
    Eigen::VectorXd omega_raw;      // unclipped omega(t_j)
    Eigen::VectorXd w;              // omega clipped to [0,1]
    Eigen::VectorXd beta2_shrunk;   // omega_raw .* beta2
    Eigen::VectorXd beta1;          // wals_beta1 at the clipped weights
};

// Applies prior_weight coordinate-wise to t_j = beta2_j / sqrt(sigma2/N).
PriorEstimate wals_prior_estimate(const Dataset& ds, const OrthoTransform& ot,
                                  const CoreEstimates& ce, PriorFamily family);

// AMSE-optimal scalar weight r^2/(r^2+1) for signal-to-noise ratio r.
double scalar_optimal_weight(double r);

}  // namespace fwals
