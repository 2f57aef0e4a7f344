#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "fwals/amse.hpp"
#include "fwals/errors.hpp"
#include "fwals/methods.hpp"
#include "fwals/ortho.hpp"
#include "fwals/parsing.hpp"
#include "fwals/simulate.hpp"
#include "fwals/weights.hpp"

namespace py = pybind11;

namespace {

fwals::Dataset make_ds(const Eigen::VectorXd& y, const Eigen::MatrixXd& X1,
                       const Eigen::MatrixXd& X2) {
    return fwals::make_dataset(y, X1, X2);
}

fwals::PriorFamily family_from_name(const std::string& name) {
    if (name == "laplace") return fwals::PriorFamily::Laplace;
    if (name == "cauchy") return fwals::PriorFamily::Cauchy;
    if (name == "pareto") return fwals::PriorFamily::Pareto;
    if (name == "weibull") return fwals::PriorFamily::Weibull;
    throw fwals::ConfigError("unknown prior family '" + name + "'");
}

py::dict result_to_dict(const fwals::EstimateResult& r) {
    py::dict d;
    d["method"] = fwals::method_name(r.method);
    d["weight_kind"] = r.weight_kind == fwals::WeightKind::Box ? "box" : "simplex";
    d["weights"] = r.weights;
    d["beta1"] = r.beta1;
    d["mu"] = r.mu;
    d["amse"] = r.amse;
    d["wall_time_s"] = r.wall_time_s;
    if (r.omega_raw.size() > 0) d["omega_raw"] = r.omega_raw;
    return d;
}

fwals::EstimateOptions options_from(const std::string& omega) {
    fwals::EstimateOptions opts;
    if (omega == "homoskedastic" || omega == "hom") {
        opts.omega = fwals::OmegaMode::Homoskedastic;
    } else if (omega == "hc0") {
        opts.omega = fwals::OmegaMode::HC0;
    } else {
        throw fwals::ConfigError("unknown omega mode '" + omega + "'");
    }
    return opts;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Focused weighted-average least squares: core operations";

    py::register_exception<fwals::ConfigError>(m, "ConfigError", PyExc_ValueError);
    py::register_exception<fwals::DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<fwals::NumericError>(m, "NumericError", PyExc_ArithmeticError);

    m.def(
        "semi_orthogonalize",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2) {
            const auto ds = make_ds(y, X1, X2);
            const auto ot = fwals::semi_orthogonalize(ds);
            py::dict d;
            d["C"] = ot.C;
            d["C_inv"] = ot.C_inv();
            d["X2_star"] = ot.X2_star;
            d["lambda"] = ot.lambda;
            d["P"] = ot.P;
            return d;
        },
        py::arg("y"), py::arg("X1"), py::arg("X2"),
        "Transform of the auxiliary block making X2*' M1 X2* / N the identity.");

    m.def(
        "estimate",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
           const std::string& focus, const std::string& methods, const std::string& omega) {
            const auto ds = make_ds(y, X1, X2);
            const auto fs = fwals::parse_focus(focus);
            const auto ms = fwals::parse_method_list(methods);
            const auto opts = options_from(omega);
            py::list out;
            for (const auto& r : fwals::estimate_all(ds, fs, ms, opts))
                out.append(result_to_dict(r));
            return out;
        },
        py::arg("y"), py::arg("X1"), py::arg("X2"), py::arg("focus") = "linear:1",
        py::arg("methods") = "fwals", py::arg("omega") = "homoskedastic",
        "Run the requested estimators; focus grammar 'linear:c1,c2,...' or 'irf:h=<int>'.");

    m.def(
        "amse_quadratic",
        [](const Eigen::VectorXd& y, const Eigen::MatrixXd& X1, const Eigen::MatrixXd& X2,
           const std::string& focus, const std::string& omega) {
            const auto ds = make_ds(y, X1, X2);
            const auto ot = fwals::semi_orthogonalize(ds);
            const auto ce = fwals::fit_core(ds, ot);
            const auto opts = options_from(omega);
            const auto ac =
                fwals::build_components(ds, ot, ce, fwals::parse_focus(focus), opts.omega);
            const auto q = fwals::as_quadratic(ac);
            return py::make_tuple(q.A, q.b, q.c0);
        },
        py::arg("y"), py::arg("X1"), py::arg("X2"), py::arg("focus") = "linear:1",
        py::arg("omega") = "homoskedastic",
        "Plug-in AMSE as (A, b, c0) with objective w'Aw + 2 b'w + c0 on [0,1]^k2.");

    m.def(
        "minimize_box",
        [](const Eigen::MatrixXd& A, const Eigen::VectorXd& b, double c0) {
            fwals::AmseQuadratic q;
            q.A = A;
            q.b = b;
            q.c0 = c0;
            const auto min = fwals::minimize_box(q, {});
            return py::make_tuple(min.w, min.objective, min.converged);
        },
        py::arg("A"), py::arg("b"), py::arg("c0") = 0.0,
        "Minimize w'Aw + 2 b'w + c0 over the unit box; returns (w, objective, converged).");

    m.def("prior_weight", &fwals::prior_weight,
          py::arg("family"), py::arg("t"),
          "Posterior-mean shrinkage weight omega(t) for the given prior family.");
    m.def(
        "prior_weight",
        [](const std::string& family, double t) {
            return fwals::prior_weight(family_from_name(family), t);
        },
        py::arg("family"), py::arg("t"));

    m.def("scalar_optimal_weight", &fwals::scalar_optimal_weight, py::arg("r"),
          "AMSE-optimal scalar weight r^2 / (r^2 + 1).");

    py::enum_<fwals::PriorFamily>(m, "PriorFamily")
        .value("laplace", fwals::PriorFamily::Laplace)
        .value("cauchy", fwals::PriorFamily::Cauchy)
        .value("pareto", fwals::PriorFamily::Pareto)
        .value("weibull", fwals::PriorFamily::Weibull);

    m.def(
        "gen_basic",
        [](int n, int k1, int k2, double tau, double r2, std::uint64_t seed,
           std::uint64_t rep) {
            fwals::BasicDesignConfig cfg;
            cfg.n = n;
            cfg.k1 = k1;
            cfg.k2 = k2;
            cfg.tau = tau;
            cfg.r2 = r2;
            cfg.seed = seed;
            const auto ds = fwals::gen_basic(cfg, rep);
            return py::make_tuple(ds.y, ds.X1, ds.X2);
        },
        py::arg("n") = 100, py::arg("k1") = 3, py::arg("k2") = 2, py::arg("tau") = 0.3,
        py::arg("r2") = 0.5, py::arg("seed") = 0, py::arg("rep") = 0,
        "Draw one cross-sectional design replication; returns (y, X1, X2).");

    m.def(
        "gen_irf",
        [](int T, int k2, double c_y, double d, double tau, std::uint64_t seed,
           std::uint64_t rep) {
            fwals::IrfDesignConfig cfg;
            cfg.T = T;
            cfg.k2 = k2;
            cfg.c_y = c_y;
            cfg.d = d;
            cfg.tau = tau;
            cfg.seed = seed;
            const auto ds = fwals::gen_irf(cfg, rep);
            return py::make_tuple(ds.y, ds.X1, ds.X2);
        },
        py::arg("T") = 100, py::arg("k2") = 4, py::arg("c_y") = 2.0, py::arg("d") = 1.0,
        py::arg("tau") = 0.2, py::arg("seed") = 0, py::arg("rep") = 0,
        "Draw one dynamic design replication; returns (y, X1 lags, X2).");

    m.def(
        "risk_basic",
        [](int n, int k1, int k2, double tau, double r2, const std::string& methods,
           int reps, std::uint64_t seed, int threads) {
            fwals::BasicDesignConfig cfg;
            cfg.n = n;
            cfg.k1 = k1;
            cfg.k2 = k2;
            cfg.tau = tau;
            cfg.r2 = r2;
            cfg.seed = seed;
            fwals::McOptions mc;
            mc.reps = reps;
            mc.threads = threads;
            const auto table =
                fwals::run_monte_carlo(cfg, fwals::parse_method_list(methods), mc, {});
            py::list out;
            for (const auto& row : table.rows) {
                py::dict d;
                d["method"] = row.method;
                d["risk"] = row.risk;
                d["mc_se"] = row.mc_se;
                d["reps"] = row.reps;
                out.append(std::move(d));
            }
            return out;
        },
        py::arg("n") = 100, py::arg("k1") = 3, py::arg("k2") = 2, py::arg("tau") = 0.3,
        py::arg("r2") = 0.5, py::arg("methods") = "fwals", py::arg("reps") = 100,
        py::arg("seed") = 0, py::arg("threads") = 1,
        "Monte Carlo focus risk for the cross-sectional design.");
}
