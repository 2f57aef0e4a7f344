#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "fwals/amse.hpp"
#include "fwals/dataset.hpp"
#include "fwals/focus.hpp"
#include "fwals/weights.hpp"

namespace fwals {

enum class Method {
    Fwals,
    Fic,
    Saic,
    Sbic,
    Mmse,
    WalsLaplace,
    WalsCauchy,
    WalsPareto,
    WalsWeibull,
    Ols,     // full model (w = 1)
    Narrow,  // w = 0
};

std::string method_name(Method m);
Method method_from_name(const std::string& name);  // ConfigError on unknown
std::vector<Method> parse_method_list(const std::string& csv);

enum class WeightKind { Box, Simplex };

struct EstimateResult {
    Method method = Method::Fwals;
    WeightKind weight_kind = WeightKind::Box;
    Eigen::VectorXd weights;               // box: k2; simplex: 2^k2
    Eigen::VectorXd beta1;
    double mu = 0.0;
    double amse = 0.0;                     // plug-in AMSE at the chosen weights
    double wall_time_s = 0.0;
    Eigen::VectorXd omega_raw;             // prior methods only (size 0 otherwise)
};

struct EstimateOptions {
    OmegaMode omega = OmegaMode::Homoskedastic;
    SubmodelOptions submodel{};
    MinimizeOptions box{};
    SimplexMinimizerOptions simplex{};
};

// Runs one method end to end on a dataset (orthogonalization through weight
// choice and focus evaluation); wall time covers the whole pipeline.
EstimateResult estimate_single(const Dataset& ds, const FocusSpec& fs, Method m,
                               const EstimateOptions& opts = {});

std::vector<EstimateResult> estimate_all(const Dataset& ds, const FocusSpec& fs,
                                         const std::vector<Method>& methods,
                                         const EstimateOptions& opts = {});

}  // namespace fwals
