#include "fwals/methods.hpp"

#include <chrono>
#include <sstream>

#include "fwals/errors.hpp"

namespace fwals {

std::string method_name(Method m) {
    switch (m) {
        case Method::Fwals: return "fwals";
        case Method::Fic: return "fic";
        case Method::Saic: return "saic";
        case Method::Sbic: return "sbic";
        case Method::Mmse: return "mmse";
        case Method::WalsLaplace: return "wals-laplace";
        case Method::WalsCauchy: return "wals-cauchy";
        case Method::WalsPareto: return "wals-pareto";
        case Method::WalsWeibull: return "wals-weibull";
        case Method::Ols: return "ols";
        case Method::Narrow: return "narrow";
    }
    throw ConfigError("unknown method enum value");
}

Method method_from_name(const std::string& name) {
    if (name == "fwals") return Method::Fwals;
    if (name == "fic") return Method::Fic;
    if (name == "saic") return Method::Saic;
    if (name == "sbic") return Method::Sbic;
    if (name == "mmse") return Method::Mmse;
    if (name == "wals-laplace" || name == "wals-lap") return Method::WalsLaplace;
    if (name == "wals-cauchy" || name == "wals-cau") return Method::WalsCauchy;
    if (name == "wals-pareto" || name == "wals-par") return Method::WalsPareto;
    if (name == "wals-weibull" || name == "wals-wei") return Method::WalsWeibull;
    if (name == "ols") return Method::Ols;
    if (name == "narrow") return Method::Narrow;
    throw ConfigError("unknown method '" + name + "'");
}

std::vector<Method> parse_method_list(const std::string& csv) {
    std::vector<Method> methods;
    std::stringstream ss(csv);
    std::string token;
    while (std::getline(ss, token, ',')) {
        const auto begin = token.find_first_not_of(" \t");
        if (begin == std::string::npos) continue;
        const auto end = token.find_last_not_of(" \t");
        const std::string name = token.substr(begin, end - begin + 1);
        if (name == "all") {
            for (Method m : {Method::Fwals, Method::Fic, Method::Saic, Method::Sbic,
                             Method::Mmse, Method::WalsLaplace, Method::WalsCauchy,
                             Method::WalsPareto, Method::WalsWeibull, Method::Ols,
                             Method::Narrow})
                methods.push_back(m);
        } else {
            methods.push_back(method_from_name(name));
        }
    }
    if (methods.empty()) throw ConfigError("empty method list");
    return methods;
}

namespace {

PriorFamily prior_of(Method m) {
    switch (m) {
        case Method::WalsLaplace: return PriorFamily::Laplace;
        case Method::WalsCauchy: return PriorFamily::Cauchy;
        case Method::WalsPareto: return PriorFamily::Pareto;
        case Method::WalsWeibull: return PriorFamily::Weibull;
        default: throw ConfigError("not a prior-based method");
    }
}

}  // namespace

EstimateResult estimate_single(const Dataset& ds, const FocusSpec& fs, Method m,
                               const EstimateOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    EstimateResult res;
    res.method = m;

    const OrthoTransform ot = semi_orthogonalize(ds);
    const CoreEstimates ce = fit_core(ds, ot);

    switch (m) {
        case Method::Fwals: {
            const auto ac = build_components(ds, ot, ce, fs, opts.omega);
            const auto box = minimize_box(as_quadratic(ac), opts.box);
            res.weight_kind = WeightKind::Box;
            res.weights = box.w;
            res.beta1 = wals_beta1(ce, ot, box.w);
            res.mu = eval_focus(fs, res.beta1);
            res.amse = box.objective;
            break;
        }
        case Method::Fic: {
            auto fic = fic_weights(ds, ot, ce, fs, opts.omega, opts.submodel,
                                   opts.simplex);
            res.weight_kind = WeightKind::Simplex;
            res.weights = fic.weights.w;
            res.beta1 = wals_beta1(
                ce, ot, box_from_simplex(fic.weights.w, static_cast<int>(ds.k2())));
            res.mu = fic.mu;
            res.amse = fic.objective;
            break;
        }
        case Method::Saic:
        case Method::Sbic: {
            const auto table = submodel_focus_table(ds, ot, ce, fs, opts.submodel);
            const auto ic = (m == Method::Saic) ? InfoCriterion::AIC : InfoCriterion::BIC;
            const auto sw = ic_weights(ds, ce, table.models, ic);
            res.weight_kind = WeightKind::Simplex;
            res.weights = sw.w;
            const Eigen::VectorXd w_box =
                box_from_simplex(sw.w, static_cast<int>(ds.k2()));
            res.beta1 = wals_beta1(ce, ot, w_box);
            res.mu = sw.w.dot(table.mu);
            const auto ac = build_components(ds, ot, ce, fs, opts.omega);
            res.amse = amse_objective(ac, w_box);
            break;
        }
        case Method::Mmse: {
            const auto table = submodel_focus_table(ds, ot, ce, fs, opts.submodel);
            const auto ac = build_components(ds, ot, ce, fs, opts.omega);
            const Eigen::MatrixXd J = submodel_joint_amse(ac, table.models);
            const auto mm = mmse_weights(J, table.mu);
            res.weight_kind = WeightKind::Simplex;
            res.weights = mm.w;
            // Signed simplex weights: beta1 is the same affine combination.
            Eigen::VectorXd beta1 = Eigen::VectorXd::Zero(ds.k1());
            for (Eigen::Index i = 0; i < mm.w.size(); ++i)
                beta1 += mm.w[i] * submodel_beta1(
                                       ce, ot,
                                       table.models[static_cast<std::size_t>(i)]);
            res.beta1 = beta1;
            res.mu = mm.mu;
            res.amse = mm.objective;
            break;
        }
        case Method::WalsLaplace:
        case Method::WalsCauchy:
        case Method::WalsPareto:
        case Method::WalsWeibull: {
            const auto pe = wals_prior_estimate(ds, ot, ce, prior_of(m));
            res.weight_kind = WeightKind::Box;
            res.weights = pe.w;
            res.omega_raw = pe.omega_raw;
            res.beta1 = pe.beta1;
            res.mu = eval_focus(fs, pe.beta1);
            const auto ac = build_components(ds, ot, ce, fs, opts.omega);
            res.amse = amse_objective(ac, pe.w);
            break;
        }
        case Method::Ols:
        case Method::Narrow: {
            const Eigen::VectorXd w =
                (m == Method::Ols) ? Eigen::VectorXd::Ones(ds.k2())
                                   : Eigen::VectorXd::Zero(ds.k2());
            res.weight_kind = WeightKind::Box;
            res.weights = w;
            res.beta1 = wals_beta1(ce, ot, w);
            res.mu = eval_focus(fs, res.beta1);
            const auto ac = build_components(ds, ot, ce, fs, opts.omega);
            res.amse = amse_objective(ac, w);
            break;
        }
    }

    res.wall_time_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return res;
}

std::vector<EstimateResult> estimate_all(const Dataset& ds, const FocusSpec& fs,
                                         const std::vector<Method>& methods,
                                         const EstimateOptions& opts) {
    std::vector<EstimateResult> out;
    out.reserve(methods.size());
    for (Method m : methods) out.push_back(estimate_single(ds, fs, m, opts));
    return out;
}

}  // namespace fwals
