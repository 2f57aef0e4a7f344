#include "doctest.h"

#include <cmath>

#include "fwals/amse.hpp"
#include "fwals/errors.hpp"
#include "helpers.hpp"
#include "oracles.hpp"

using namespace fwals;

namespace {

struct Pipeline {
    Dataset ds;
    OrthoTransform ot;
    CoreEstimates ce;
    AsymptoticComponents ac;
};

Pipeline run_pipeline(std::uint64_t seed, int n, int k1, int k2, const FocusSpec& fs,
                      OmegaMode mode = OmegaMode::Homoskedastic) {
    Pipeline p{testutil::random_dataset(seed, n, k1, k2), {}, {}, {}};
    p.ot = semi_orthogonalize(p.ds);
    p.ce = fit_core(p.ds, p.ot);
    p.ac = build_components(p.ds, p.ot, p.ce, fs, mode);
    return p;
}

// Independent two-term route to the plug-in objective: corrected squared bias
// a(w)' Delta~ a(w), a(w) = (C^{-1})'(I-W) C'Xi'D, plus delta-method variance
// (Psi'D)' Omega (Psi'D) with Psi'D stacked blockwise.
double two_term_objective(const AsymptoticComponents& ac, const Eigen::VectorXd& w) {
    const Eigen::VectorXd v = ac.V_diag;  // C'Xi'D
    const Eigen::VectorXd a =
        ac.C_inv.transpose() * ((Eigen::VectorXd::Ones(ac.k2) - w).cwiseProduct(v));
    const double bias_part = a.dot(ac.delta_outer_corrected * a);

    Eigen::VectorXd psi_d(ac.k1 + ac.k2);
    psi_d.head(ac.k1) = ac.Q11_inv * ac.D + ac.Xi * (ac.C * w.cwiseProduct(v));
    psi_d.tail(ac.k2) = -(ac.C * w.cwiseProduct(v));
    const double var_part = psi_d.dot(ac.Omega * psi_d);
    return bias_part + var_part;
}

PopulationModel scalar_population(double rho, double delta, double sigma2) {
    PopulationModel pm;
    pm.k1 = 1;
    pm.Q.resize(2, 2);
    pm.Q << 1.0, rho, rho, 1.0;
    pm.Omega = sigma2 * pm.Q;
    pm.delta = Eigen::VectorXd::Constant(1, delta);
    pm.beta1 = Eigen::VectorXd::Constant(1, 0.7);
    pm.focus = LinearFocus{Eigen::VectorXd::Ones(1)};
    return pm;
}

}  // namespace

TEST_CASE("score moment matrix matches direct summation") {
    const auto ds = testutil::random_dataset(31, 60, 2, 3);
    const auto ot = semi_orthogonalize(ds);
    const auto ce = fit_core(ds, ot);
    const int n = static_cast<int>(ds.X1.rows());
    const int k = static_cast<int>(ds.X1.cols() + ds.X2.cols());

    Eigen::MatrixXd X(n, k);
    X << ds.X1, ds.X2;

    SUBCASE("homoskedastic") {
        const Eigen::MatrixXd got = estimate_omega(ds, ce, OmegaMode::Homoskedastic);
        const Eigen::MatrixXd want = ce.sigma2 * (X.transpose() * X) / n;
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10 * want.cwiseAbs().maxCoeff());
    }
    SUBCASE("hc0 outer products") {
        const Eigen::MatrixXd got = estimate_omega(ds, ce, OmegaMode::HC0);
        Eigen::MatrixXd want = Eigen::MatrixXd::Zero(k, k);
        for (int i = 0; i < n; ++i) {
            const Eigen::VectorXd xi = X.row(i).transpose();
            want += ce.resid_full[i] * ce.resid_full[i] * xi * xi.transpose();
        }
        want /= n;
        CHECK((got - want).cwiseAbs().maxCoeff() < 1e-10 * want.cwiseAbs().maxCoeff());
        CHECK((got - got.transpose()).cwiseAbs().maxCoeff() < 1e-12);
    }
}

TEST_CASE("asymptotic components satisfy their defining identities") {
    const FocusSpec fs = LinearFocus{Eigen::VectorXd::Ones(3)};
    const auto p = run_pipeline(7, 120, 3, 4, fs);
    const auto& ac = p.ac;
    const double rootn = std::sqrt(static_cast<double>(ac.n));

    CHECK(ac.n == 120);
    CHECK(ac.k1 == 3);
    CHECK(ac.k2 == 4);

    // delta_hat = sqrt(N) C beta2 and the corrected outer product definition.
    const Eigen::VectorXd want_delta = rootn * p.ot.C * p.ce.beta2;
    CHECK((ac.delta_hat - want_delta).cwiseAbs().maxCoeff() < 1e-10 * rootn);

    const Eigen::MatrixXd want_outer =
        ac.delta_hat * ac.delta_hat.transpose() -
        ac.C * ac.B * ac.Omega * ac.B.transpose() * ac.C.transpose();
    CHECK((ac.delta_outer_corrected - want_outer).cwiseAbs().maxCoeff() <
          1e-9 * (1.0 + want_outer.cwiseAbs().maxCoeff()));
    CHECK((ac.delta_outer_corrected - ac.delta_outer_corrected.transpose())
              .cwiseAbs()
              .maxCoeff() < 1e-10);

    // B = [-C'Xi' | C'].
    Eigen::MatrixXd want_B(ac.k2, ac.k1 + ac.k2);
    want_B << -ac.C.transpose() * ac.Xi.transpose(), ac.C.transpose();
    CHECK((ac.B - want_B).cwiseAbs().maxCoeff() < 1e-12);

    // V holds C'Xi'D; D is the focus gradient at the full-model core fit.
    const Eigen::VectorXd want_v =
        ac.C.transpose() * ac.Xi.transpose() * focus_gradient(fs, ac.beta1_full);
    CHECK((ac.V_diag - want_v).cwiseAbs().maxCoeff() < 1e-12);

    // Q11_inv inverts X1'X1/N.
    const Eigen::MatrixXd q11 =
        p.ds.X1.transpose() * p.ds.X1 / static_cast<double>(ac.n);
    CHECK((ac.Q11_inv * q11 - Eigen::MatrixXd::Identity(ac.k1, ac.k1))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("homoskedastic limit whitens the auxiliary score block") {
    // B Omega B' = sigma2 C'(X2'M1X2/N)C = sigma2 I by semi-orthogonality.
    for (std::uint64_t seed : {3u, 14u}) {
        const FocusSpec fs = LinearFocus{Eigen::VectorXd::Ones(2)};
        const auto p = run_pipeline(seed, 90, 2, 3, fs);
        const Eigen::MatrixXd bob =
            p.ac.B * p.ac.Omega * p.ac.B.transpose();
        CHECK((bob - p.ce.sigma2 * Eigen::MatrixXd::Identity(3, 3))
                  .cwiseAbs()
                  .maxCoeff() < 1e-8 * p.ce.sigma2);
    }
}

TEST_CASE("six-term objective agrees with the bias-plus-variance route") {
    for (std::uint64_t seed : {1u, 2u, 3u}) {
        for (OmegaMode mode : {OmegaMode::Homoskedastic, OmegaMode::HC0}) {
            const FocusSpec fs = LinearFocus{Eigen::VectorXd::LinSpaced(3, 1.0, -0.5)};
            const auto p = run_pipeline(seed, 100, 3, 3, fs, mode);
            for (int rep = 0; rep < 10; ++rep) {
                const Eigen::VectorXd w = oracle::random_uniform(seed * 100 + rep, 3);
                const double direct = amse_objective(p.ac, w);
                const double dual = two_term_objective(p.ac, w);
                CHECK(direct == doctest::Approx(dual).epsilon(1e-10));
            }
        }
    }
}

TEST_CASE("explicit quadratic reproduces the objective") {
    const FocusSpec fs = IrfFocus{3};
    const auto p = run_pipeline(11, 150, 3, 4, fs);
    const AmseQuadratic q = as_quadratic(p.ac);

    CHECK((q.A - q.A.transpose()).cwiseAbs().maxCoeff() < 1e-10);
    for (int rep = 0; rep < 20; ++rep) {
        const Eigen::VectorXd w = oracle::random_uniform(900 + rep, 4);
        const double via_quadratic = q.value(w);
        const double via_terms = amse_objective(p.ac, w);
        const double scale = 1.0 + std::abs(via_terms);
        CHECK(std::abs(via_quadratic - via_terms) < 1e-9 * scale);
    }
}

TEST_CASE("corrected quadratic part collapses to a rank-one outer product") {
    // The correction subtracts C B Omega B' C' from the delta outer product;
    // conjugating by C^{-1} turns that into N beta2 beta2' - B Omega B', whose
    // covariance half cancels against the variance terms exactly, leaving
    // A = N (V beta2)(V beta2)' for either moment-matrix mode.
    for (OmegaMode mode : {OmegaMode::Homoskedastic, OmegaMode::HC0}) {
        const FocusSpec fs = LinearFocus{Eigen::VectorXd::Ones(2)};
        const auto p = run_pipeline(21, 80, 2, 4, fs, mode);
        const AmseQuadratic q = as_quadratic(p.ac);
        const Eigen::VectorXd vb = p.ac.V_diag.cwiseProduct(p.ce.beta2);
        const Eigen::MatrixXd want =
            static_cast<double>(p.ac.n) * vb * vb.transpose();
        CHECK((q.A - want).cwiseAbs().maxCoeff() <
              1e-8 * (1.0 + want.cwiseAbs().maxCoeff()));
    }
}

TEST_CASE("population components whiten the partialled second-moment block") {
    PopulationModel pm;
    pm.k1 = 2;
    pm.Q = oracle::random_matrix(5, 5, 5);
    pm.Q = Eigen::MatrixXd(pm.Q * pm.Q.transpose()) +
           5.0 * Eigen::MatrixXd::Identity(5, 5);
    pm.Omega = 1.7 * pm.Q;
    pm.delta = oracle::random_vector(6, 3);
    pm.beta1 = Eigen::VectorXd::Ones(2);
    pm.focus = LinearFocus{Eigen::VectorXd::Ones(2)};

    const PopulationComponents pc = population_components(pm);
    const Eigen::MatrixXd Q11 = pm.Q.topLeftCorner(2, 2);
    const Eigen::MatrixXd Q12 = pm.Q.topRightCorner(2, 3);
    const Eigen::MatrixXd Q22 = pm.Q.bottomRightCorner(3, 3);
    const Eigen::MatrixXd G = Q22 - Q12.transpose() * Q11.inverse() * Q12;

    CHECK((pc.C.transpose() * G * pc.C - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
    CHECK((pc.Xi - Q11.inverse() * Q12).cwiseAbs().maxCoeff() < 1e-10);
    CHECK((pc.C * pc.C_inv - Eigen::MatrixXd::Identity(3, 3)).cwiseAbs().maxCoeff() <
          1e-10);
    // B Q B' = C' G C = I.
    CHECK((pc.B * pm.Q * pc.B.transpose() - Eigen::MatrixXd::Identity(3, 3))
              .cwiseAbs()
              .maxCoeff() < 1e-10);
}

TEST_CASE("exact risk is unbiased at full weights and splits consistently") {
    const PopulationModel pm = scalar_population(0.4, 2.0, 1.5);
    const Eigen::VectorXd one = Eigen::VectorXd::Ones(1);

    const AmseSplit at_one = theoretical_amse_split(pm, one);
    CHECK(std::abs(at_one.bias) < 1e-14);
    CHECK(at_one.total == doctest::Approx(at_one.variance).epsilon(1e-14));

    for (double wv : {0.0, 0.25, 0.6, 1.0}) {
        const Eigen::VectorXd w = Eigen::VectorXd::Constant(1, wv);
        const AmseSplit s = theoretical_amse_split(pm, w);
        CHECK(s.total ==
              doctest::Approx(s.bias * s.bias + s.variance).epsilon(1e-13));
        CHECK(theoretical_amse(pm, w) == doctest::Approx(s.total).epsilon(1e-13));
    }
}

TEST_CASE("scalar embedding minimizes risk at the signal-noise weight") {
    // One core and one auxiliary regressor with correlation rho: the exact
    // risk over w in [0,1] is quadratic with interior minimizer
    // r^2/(r^2+1), r^2 = delta^2 (1-rho^2) / sigma2.
    for (double rho : {0.2, 0.5, 0.8}) {
        for (double delta : {0.5, 1.0, 3.0}) {
            const double sigma2 = 1.3;
            const PopulationModel pm = scalar_population(rho, delta, sigma2);
            const auto f = [&](double wv) {
                return theoretical_amse(pm, Eigen::VectorXd::Constant(1, wv));
            };
            // Recover the 1-D quadratic from three evaluations.
            const double f0 = f(0.0), fh = f(0.5), f1 = f(1.0);
            const double alpha = 2.0 * (f0 + f1 - 2.0 * fh);
            const double beta = f1 - f0 - alpha;
            REQUIRE(alpha > 0.0);
            const double vertex = -beta / (2.0 * alpha);

            const double r2 = delta * delta * (1.0 - rho * rho) / sigma2;
            CHECK(vertex == doctest::Approx(r2 / (r2 + 1.0)).epsilon(1e-10));
        }
    }
}

TEST_CASE("objective and risk reject malformed weights") {
    const FocusSpec fs = LinearFocus{Eigen::VectorXd::Ones(2)};
    const auto p = run_pipeline(40, 70, 2, 2, fs);
    CHECK_THROWS_AS(amse_objective(p.ac, Eigen::VectorXd::Constant(2, 1.5)),
                    NumericError);
    CHECK_THROWS_AS(amse_objective(p.ac, Eigen::VectorXd::Constant(3, 0.5)),
                    NumericError);

    const PopulationModel pm = scalar_population(0.4, 1.0, 1.0);
    CHECK_THROWS_AS(theoretical_amse(pm, Eigen::VectorXd::Constant(2, 0.5)),
                    ConfigError);
}
