#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "fwals/dataset.hpp"
#include "fwals/focus.hpp"
#include "fwals/methods.hpp"

namespace fwals {

// Cross-sectional design: x ~ N(0, Sigma), Sigma equicorrelated with unit
// diagonal and off-diagonal tau; eps ~ N(0,1); beta1 = (c_x/a) * ones(k1);
// beta2_j = c_x * (k2 - j + 1)/k2. c_x is solved so the population R^2 hits
// the target. Focus: sum of the core coefficients.
struct BasicDesignConfig {
    int n = 100;
    int k1 = 3;
    int k2 = 2;
    double tau = 0.3;
    double r2 = 0.5;       // population R^2 target, in (0,1)
    double a = 12.0;       // core-coefficient scale divisor
    std::uint64_t seed = 0;
};

// c_x = sqrt( r2/(1-r2) / q ) for unit-scale quadratic form q.
double cx_for_r2(double q, double r2);

// q = beta~' Sigma beta~ evaluated at c_x = 1, and the solved c_x.
struct BasicDesignTruth {
    double cx = 0.0;
    Eigen::VectorXd beta1;
    Eigen::VectorXd beta2;
    double mu = 0.0;       // sum(beta1)
};

BasicDesignTruth solve_cx(const BasicDesignConfig& cfg);

Dataset gen_basic(const BasicDesignConfig& cfg, std::uint64_t rep);

// Dynamic design: y_t = beta1'(y_{t-1},y_{t-2},y_{t-3}) + beta2'x_t + u_t,
// x_t = 0.2 x_{t-1} + e_t with equicorrelated innovations; beta1 =
// (0.5, d/sqrt(T), d/(2 sqrt(T))); beta2 = (c_y/sqrt(T)) theta with theta =
// (1,...,1, 0.05,...,0.05), floor(k2/2) ones. Zero initial values, the first
// burn_in observations are discarded. Focus: impulse response at horizon h.
struct IrfDesignConfig {
    int T = 100;
    int k2 = 4;
    double c_y = 2.0;
    double d = 1.0;
    double tau = 0.2;
    int burn_in = 100;
    std::vector<int> horizons = {1, 3, 5, 7};
    std::uint64_t seed = 0;
};

struct IrfDesignTruth {
    Eigen::VectorXd beta1;       // 3
    Eigen::VectorXd beta2;       // k2
    std::vector<double> mu;      // impulse responses at cfg.horizons
};

// Validates stability (companion spectral radius < 1) and returns the truth.
IrfDesignTruth irf_truth(const IrfDesignConfig& cfg);

Dataset gen_irf(const IrfDesignConfig& cfg, std::uint64_t rep);

// ---------------------------------------------------------------------------
// Monte Carlo harness
// ---------------------------------------------------------------------------

struct RiskRow {
    std::string method;
    std::string design;      // "basic" | "irf"
    int n = 0;               // N (basic) or T (irf)
    int k2 = 0;
    double tau = 0.0;
    std::optional<double> r2;    // basic only
    std::optional<double> c_y;   // irf only
    std::optional<double> d;     // irf only
    std::optional<int> horizon;  // irf only
    double risk = 0.0;           // mean (mu_hat - mu_true)^2 over good reps
    double mc_se = 0.0;          // sd of squared errors / sqrt(good reps)
    int reps = 0;                // reps that produced a value
};

struct RiskTable {
    std::vector<RiskRow> rows;
};

std::string risk_table_csv(const RiskTable& table);

struct McOptions {
    int reps = 300;
    int threads = 1;  // <=0: hardware concurrency
};

using DesignConfig = std::variant<BasicDesignConfig, IrfDesignConfig>;

// Per-rep datasets are generated with counter-derived seeds (a hash of the
// design seed and the rep index), so results are independent of the thread
// count and of rep scheduling. Method failures are confined to their cell.
RiskTable run_monte_carlo(const DesignConfig& design,
                          const std::vector<Method>& methods,
                          const McOptions& mc, const EstimateOptions& opts = {});

// Custom-fitter variant for tests: each fitter maps a dataset and focus to a
// point estimate of mu (throwing on failure).
struct NamedFitter {
    std::string name;
    std::function<double(const Dataset&, const FocusSpec&)> fit_mu;
};

RiskTable run_monte_carlo_custom(const DesignConfig& design,
                                 const std::vector<NamedFitter>& fitters,
                                 const McOptions& mc);

// Deterministic per-rep seed stream (splitmix64 over seed and rep).
std::uint64_t rep_seed(std::uint64_t master, std::uint64_t rep);

}  // namespace fwals
