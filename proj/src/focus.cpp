#include "fwals/focus.hpp"

#include <algorithm>
#include <vector>

#include "fwals/errors.hpp"

namespace fwals {

Eigen::MatrixXd companion_matrix(const Eigen::VectorXd& beta1) {
    const Eigen::Index p = beta1.size();
    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(p, p);
    A.row(0) = beta1.transpose();
    for (Eigen::Index i = 1; i < p; ++i) A(i, i - 1) = 1.0;
    return A;
}

namespace {

void check_linear(const LinearFocus& lf, const Eigen::VectorXd& beta1) {
    if (lf.coeffs.size() != beta1.size())
        throw ConfigError("linear focus: " + std::to_string(lf.coeffs.size()) +
                          " coefficients for k1 = " + std::to_string(beta1.size()));
}

void check_irf(const IrfFocus& irf) {
    if (irf.horizon < 0)
        throw ConfigError("irf focus: horizon must be >= 0, got " +
                          std::to_string(irf.horizon));
}

// mu_h = e1' A^h e1 via the AR recursion mu_h = sum_{j<=min(h,p)} beta_j mu_{h-j}.
double irf_value(const Eigen::VectorXd& beta1, int h) {
    const auto p = static_cast<int>(beta1.size());
    std::vector<double> mu(static_cast<std::size_t>(h) + 1, 0.0);
    mu[0] = 1.0;
    for (int s = 1; s <= h; ++s) {
        double acc = 0.0;
        for (int j = 1; j <= std::min(s, p); ++j)
            acc += beta1[j - 1] * mu[static_cast<std::size_t>(s - j)];
        mu[static_cast<std::size_t>(s)] = acc;
    }
    return mu[static_cast<std::size_t>(h)];
}

// d mu_h / d beta_j = sum_{i=0}^{h-1} (e1'A^i e1)(e_j' A^{h-1-i} e1): the
// product rule applied to A^h with dA/dbeta_j = e1 e_j'.
Eigen::VectorXd irf_gradient(const Eigen::VectorXd& beta1, int h) {
    const Eigen::Index p = beta1.size();
    if (h == 0) return Eigen::VectorXd::Zero(p);
    const Eigen::MatrixXd A = companion_matrix(beta1);

    // first[i] = e1'A^i e1 for i = 0..h-1; cols[i] = A^i e1 for i = 0..h-1.
    Eigen::VectorXd v = Eigen::VectorXd::Zero(p);
    v[0] = 1.0;
    std::vector<Eigen::VectorXd> pow_e1(static_cast<std::size_t>(h));
    for (int i = 0; i < h; ++i) {
        pow_e1[static_cast<std::size_t>(i)] = v;
        v = A * v;
    }
    Eigen::VectorXd grad = Eigen::VectorXd::Zero(p);
    for (int i = 0; i <= h - 1; ++i) {
        const double lead = pow_e1[static_cast<std::size_t>(i)][0];  // e1'A^i e1
        if (lead == 0.0) continue;
        const Eigen::VectorXd& tail = pow_e1[static_cast<std::size_t>(h - 1 - i)];  // A^{h-1-i} e1
        grad += lead * tail;
    }
    return grad;
}

}  // namespace

double eval_focus(const FocusSpec& fs, const Eigen::VectorXd& beta1) {
    if (const auto* lf = std::get_if<LinearFocus>(&fs)) {
        check_linear(*lf, beta1);
        return lf->coeffs.dot(beta1);
    }
    if (const auto* irf = std::get_if<IrfFocus>(&fs)) {
        check_irf(*irf);
        return irf_value(beta1, irf->horizon);
    }
    const auto& cf = std::get<CustomFocus>(fs);
    if (!cf.value) throw ConfigError("custom focus: no evaluator supplied");
    return cf.value(beta1);
}

Eigen::VectorXd focus_gradient(const FocusSpec& fs, const Eigen::VectorXd& beta1) {
    if (const auto* lf = std::get_if<LinearFocus>(&fs)) {
        check_linear(*lf, beta1);
        return lf->coeffs;
    }
    if (const auto* irf = std::get_if<IrfFocus>(&fs)) {
        check_irf(*irf);
        return irf_gradient(beta1, irf->horizon);
    }
    const auto& cf = std::get<CustomFocus>(fs);
    if (!cf.value) throw ConfigError("custom focus: no evaluator supplied");
    if (cf.gradient) return cf.gradient(beta1);
    return finite_diff_gradient(cf.value, beta1);
}

Eigen::VectorXd finite_diff_gradient(
    const std::function<double(const Eigen::VectorXd&)>& f,
    const Eigen::VectorXd& beta1) {
    const double step =
        1e-6 * std::max(1.0, beta1.size() ? beta1.cwiseAbs().maxCoeff() : 1.0);
    Eigen::VectorXd grad(beta1.size());
    Eigen::VectorXd point = beta1;
    for (Eigen::Index j = 0; j < beta1.size(); ++j) {
        point[j] = beta1[j] + step;
        const double up = f(point);
        point[j] = beta1[j] - step;
        const double down = f(point);
        point[j] = beta1[j];
        grad[j] = (up - down) / (2.0 * step);
    }
    return grad;
}

}  // namespace fwals
