#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <string>
#include <variant>
#include <vector>

namespace fwals {

// A regression sample split into core regressors X1 (always kept) and
// auxiliary regressors X2 (candidates for selection/averaging).
// Immutable by convention once built through make_dataset.
struct Dataset {
    Eigen::VectorXd y;   // N
    Eigen::MatrixXd X1;  // N x k1
    Eigen::MatrixXd X2;  // N x k2

    Eigen::Index n() const { return y.size(); }
    Eigen::Index k1() const { return X1.cols(); }
    Eigen::Index k2() const { return X2.cols(); }
    Eigen::Index k() const { return X1.cols() + X2.cols(); }
};

// Validates and assembles a Dataset:
//  - N > k1 + k2, k1 >= 1, k2 >= 1
//  - all entries finite
//  - X1 has full column rank: min/max singular value ratio > rank_tol
Dataset make_dataset(Eigen::VectorXd y, Eigen::MatrixXd X1, Eigen::MatrixXd X2,
                     double rank_tol = 1e-10);

// One of the 2^k2 candidate sub-models: which auxiliary regressors enter.
struct SubmodelSelection {
    std::uint32_t index = 0;        // binary encoding, bit j = regressor j
    std::vector<bool> included;     // size k2

    Eigen::Index count() const;
    // 0/1 diagonal of Pi'Pi as a vector (length k2).
    Eigen::VectorXd diagonal() const;
};

SubmodelSelection submodel_from_index(std::uint32_t index, int k2);

// All sub-models in binary-counting order (index 0 = narrow model,
// bit 0 = first auxiliary regressor). Hard cap k2 <= 20.
std::vector<SubmodelSelection> enumerate_submodels(int k2);

// Per-regressor averaging weights, each in [0,1] (within tol on entry).
struct BoxWeights {
    Eigen::VectorXd w;
    explicit BoxWeights(Eigen::VectorXd w_, double tol = 1e-12);
};

// Per-sub-model averaging weights on the simplex (sum to 1 within tol).
struct SimplexWeights {
    Eigen::VectorXd w;
    explicit SimplexWeights(Eigen::VectorXd w_, double sum_tol = 1e-10);
};

// Box weights induced by simplex weights over enumerate_submodels(k2):
// w_box[j] = sum of u_m over sub-models m that include regressor j.
Eigen::VectorXd box_from_simplex(const Eigen::VectorXd& u, int k2);

/// Column selector for CSV loading: 0-based index or header name.
using ColumnRef = std::variant<int, std::string>;

// Reads a numeric CSV and assembles a Dataset from the given columns.
// Errors name the offending cell (1-based data row, column label).
Dataset load_dataset(const std::string& path,
                     const std::vector<ColumnRef>& core_cols,
                     const std::vector<ColumnRef>& aux_cols,
                     const ColumnRef& response_col,
                     bool has_header);

}  // namespace fwals
