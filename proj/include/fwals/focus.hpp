#pragma once

#include <Eigen/Dense>
#include <functional>
#include <variant>

namespace fwals {

// Scalar focus parameter mu(beta1) whose risk drives the weight choice.

// mu = coeffs' beta1.
struct LinearFocus {
    Eigen::VectorXd coeffs;
};

// Impulse response of an AR(k1) at the given horizon: mu_h = e1' A^h e1
// where A is the companion matrix with first row beta1'.
struct IrfFocus {
    int horizon = 1;
};

// User-supplied evaluator with optional analytic gradient; when absent the
// gradient falls back to central finite differences.
struct CustomFocus {
    std::function<double(const Eigen::VectorXd&)> value;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> gradient;  // may be empty
};

using FocusSpec = std::variant<LinearFocus, IrfFocus, CustomFocus>;

// Companion matrix of an AR(p): first row beta1', ones on the subdiagonal.
Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& beta1);

double eval_focus(const FocusSpec& fs, const Eigen::VectorXd& beta1);

// dmu/dbeta1. Linear: the coefficients. IRF: product rule on A^h,
//   d mu_h / d beta_j = sum_{i=0}^{h-1} (e1'A^i e1)(e_j'A^{h-1-i} e1).
// Custom: analytic gradient if given, else finite differences.
Eigen::VectorXd focus_gradient(const FocusSpec& fs, const Eigen::VectorXd& beta1);

// Central finite differences with step 1e-6 * max(1, ||beta1||_inf).
Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& beta1);

}  // namespace fwals
