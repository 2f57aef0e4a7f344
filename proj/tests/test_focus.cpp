#include "doctest.h"

#include <random>

#include "fwals/errors.hpp"
#include "fwals/focus.hpp"
#include "oracles.hpp"

using namespace fwals;

namespace {

// Random AR(3) coefficients rejected until the companion matrix is stable.
Eigen::VectorXd stable_ar3(std::mt19937_64& rng) {
    std::uniform_real_distribution<double> unif(-0.6, 0.6);
    for (;;) {
        Eigen::VectorXd b(3);
        b << unif(rng), unif(rng), unif(rng);
        if (companion_matrix(b).eigenvalues().cwiseAbs().maxCoeff() < 0.95) return b;
    }
}

}  // namespace

TEST_CASE("linear focus evaluates and differentiates as a dot product") {
    Eigen::VectorXd c(3), b(3);
    c << 1.0, -2.0, 0.5;
    b << 0.3, 0.1, 2.0;
    const FocusSpec fs = LinearFocus{c};
    CHECK(eval_focus(fs, b) == doctest::Approx(c.dot(b)).epsilon(1e-15));
    CHECK((focus_gradient(fs, b) - c).cwiseAbs().maxCoeff() == 0.0);

    Eigen::VectorXd wrong(2);
    wrong << 1.0, 1.0;
    CHECK_THROWS_AS(eval_focus(LinearFocus{wrong}, b), ConfigError);
}

TEST_CASE("impulse responses follow the companion-power recursion") {
    Eigen::VectorXd b(3);
    b << 0.5, 0.2, 0.1;

    SUBCASE("hand-computed horizons") {
        CHECK(eval_focus(IrfFocus{0}, b) == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(eval_focus(IrfFocus{1}, b) == doctest::Approx(0.5).epsilon(1e-15));
        // mu_2 = b1*mu_1 + b2*mu_0 = 0.25 + 0.2
        CHECK(eval_focus(IrfFocus{2}, b) == doctest::Approx(0.45).epsilon(1e-14));
        // mu_3 = b1*mu_2 + b2*mu_1 + b3*mu_0 = 0.225 + 0.1 + 0.1
        CHECK(eval_focus(IrfFocus{3}, b) == doctest::Approx(0.425).epsilon(1e-14));
    }
    SUBCASE("matches explicit matrix powers") {
        const Eigen::MatrixXd A = companion_matrix(b);
        Eigen::MatrixXd Ah = Eigen::MatrixXd::Identity(3, 3);
        for (int h = 0; h <= 8; ++h) {
            CHECK(eval_focus(IrfFocus{h}, b) == doctest::Approx(Ah(0, 0)).epsilon(1e-12));
            Ah = A * Ah;
        }
    }
    SUBCASE("horizon-one gradient is the first unit vector") {
        const Eigen::VectorXd g = focus_gradient(IrfFocus{1}, b);
        CHECK(g[0] == doctest::Approx(1.0).epsilon(1e-15));
        CHECK(std::abs(g[1]) < 1e-15);
        CHECK(std::abs(g[2]) < 1e-15);
    }
    SUBCASE("horizon-zero gradient vanishes") {
        CHECK(focus_gradient(IrfFocus{0}, b).cwiseAbs().maxCoeff() == 0.0);
    }
    SUBCASE("negative horizon rejected") {
        CHECK_THROWS_AS(eval_focus(IrfFocus{-1}, b), ConfigError);
    }
}

TEST_CASE("analytic impulse-response gradient matches finite differences") {
    std::mt19937_64 rng(99);
    for (int rep = 0; rep < 25; ++rep) {
        const Eigen::VectorXd b = stable_ar3(rng);
        for (int h : {1, 3, 5, 7}) {
            const Eigen::VectorXd analytic = focus_gradient(IrfFocus{h}, b);
            const Eigen::VectorXd fd = finite_diff_gradient(
                [h](const Eigen::VectorXd& x) { return eval_focus(IrfFocus{h}, x); }, b);
            const double scale = std::max(1.0, analytic.cwiseAbs().maxCoeff());
            CHECK((analytic - fd).cwiseAbs().maxCoeff() / scale < 1e-5);
        }
    }
}

TEST_CASE("custom focus uses the supplied gradient or falls back to differences") {
    Eigen::VectorXd b(2);
    b << 0.7, -0.3;
    const auto value = [](const Eigen::VectorXd& x) { return x[0] * x[0] + 3.0 * x[1]; };

    SUBCASE("analytic path") {
        CustomFocus cf;
        cf.value = value;
        cf.gradient = [](const Eigen::VectorXd& x) {
            Eigen::VectorXd g(2);
            g << 2.0 * x[0], 3.0;
            return g;
        };
        const Eigen::VectorXd g = focus_gradient(FocusSpec{cf}, b);
        CHECK(g[0] == doctest::Approx(1.4).epsilon(1e-14));
        CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-14));
    }
    SUBCASE("finite-difference fallback") {
        CustomFocus cf;
        cf.value = value;
        const Eigen::VectorXd g = focus_gradient(FocusSpec{cf}, b);
        CHECK(g[0] == doctest::Approx(1.4).epsilon(1e-7));
        CHECK(g[1] == doctest::Approx(3.0).epsilon(1e-7));
    }
}
