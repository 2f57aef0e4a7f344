#include "doctest.h"

#include <cstdio>
#include <fstream>

#include "fwals/dataset.hpp"
#include "fwals/errors.hpp"
#include "helpers.hpp"

using namespace fwals;

TEST_CASE("make_dataset validates shapes and finiteness") {
    const auto ds = testutil::random_dataset(1, 40, 3, 2);
    CHECK(ds.n() == 40);
    CHECK(ds.k1() == 3);
    CHECK(ds.k2() == 2);
    CHECK(ds.k() == 5);

    SUBCASE("row count mismatch") {
        CHECK_THROWS_AS(make_dataset(Eigen::VectorXd::Zero(10), Eigen::MatrixXd::Zero(9, 2),
                                     Eigen::MatrixXd::Zero(10, 1)),
                        DataError);
    }
    SUBCASE("needs more rows than columns") {
        CHECK_THROWS_AS(make_dataset(Eigen::VectorXd::Zero(4), Eigen::MatrixXd::Ones(4, 3),
                                     Eigen::MatrixXd::Ones(4, 1)),
                        DataError);
    }
    SUBCASE("non-finite entries rejected") {
        Eigen::VectorXd y = Eigen::VectorXd::Zero(20);
        y[3] = std::numeric_limits<double>::quiet_NaN();
        CHECK_THROWS_AS(make_dataset(y, oracle::random_matrix(2, 20, 2),
                                     oracle::random_matrix(3, 20, 1)),
                        DataError);
    }
    SUBCASE("rank-deficient core block rejected") {
        Eigen::MatrixXd X1(30, 2);
        X1.col(0) = oracle::random_vector(4, 30);
        X1.col(1) = 2.0 * X1.col(0);    // exact collinearity inside the core
        CHECK_THROWS_AS(make_dataset(Eigen::VectorXd::Zero(30), X1,
                                     oracle::random_matrix(5, 30, 1)),
                        DataError);
    }
    SUBCASE("empty blocks rejected") {
        CHECK_THROWS_AS(make_dataset(Eigen::VectorXd::Zero(10), Eigen::MatrixXd(10, 0),
                                     Eigen::MatrixXd::Ones(10, 1)),
                        DataError);
    }
}

TEST_CASE("sub-model enumeration covers all inclusion patterns once") {
    const auto models = enumerate_submodels(3);
    REQUIRE(models.size() == 8);
    // Index m encodes inclusion bits: bit j set <=> auxiliary regressor j kept.
    CHECK(models[0].count() == 0);
    CHECK(models[7].count() == 3);
    CHECK(models[5].included[0]);
    CHECK_FALSE(models[5].included[1]);
    CHECK(models[5].included[2]);
    for (std::size_t m = 0; m < models.size(); ++m) {
        CHECK(models[m].index == static_cast<int>(m));
        const Eigen::VectorXd diag = models[m].diagonal();
        for (int j = 0; j < 3; ++j)
            CHECK(diag[j] == (models[m].included[static_cast<std::size_t>(j)] ? 1.0 : 0.0));
    }
    CHECK_THROWS_AS(enumerate_submodels(0), ConfigError);
    CHECK_THROWS_AS(enumerate_submodels(21), ConfigError);  // capacity cap
}

TEST_CASE("weight domain types enforce their ranges") {
    SUBCASE("box accepts [0,1] and tolerates tiny drift") {
        Eigen::VectorXd w(2);
        w << 0.0, 1.0 + 5e-13;
        const BoxWeights bw(w);
        CHECK(bw.w[1] == 1.0);  // clamped back
        w << -0.1, 0.5;
        CHECK_THROWS_AS(BoxWeights{w}, NumericError);
    }
    SUBCASE("simplex requires sum one and nonnegativity") {
        Eigen::VectorXd u(3);
        u << 0.2, 0.3, 0.5;
        CHECK_NOTHROW(SimplexWeights{u});
        u << 0.5, 0.6, 0.1;
        CHECK_THROWS_AS(SimplexWeights{u}, NumericError);
        u << -0.2, 0.7, 0.5;
        CHECK_THROWS_AS(SimplexWeights{u}, NumericError);
    }
}

TEST_CASE("box_from_simplex forms per-regressor inclusion mass") {
    // u over sub-models {}, {1}, {2}, {1,2} (bit order).
    Eigen::VectorXd u(4);
    u << 0.1, 0.2, 0.3, 0.4;
    const Eigen::VectorXd w = box_from_simplex(u, 2);
    CHECK(w[0] == doctest::Approx(0.2 + 0.4).epsilon(1e-15));
    CHECK(w[1] == doctest::Approx(0.3 + 0.4).epsilon(1e-15));
}

TEST_CASE("CSV loading resolves names and indices and flags bad cells") {
    const char* path = "test_loader_tmp.csv";
    {
        std::ofstream f(path);
        f << "a,b,c,resp\n";
        f << "1.0,2.0,3.0,4.0\n";
        f << "5.0,6.0,7.0,8.0\n";
        f << "9.0,10.0,11.0,12.0\n";
        f << "13.0,14.0,15.0,16.0\n";
    }
    SUBCASE("by header name") {
        const auto ds = load_dataset(path, {ColumnRef{std::string("a")}},
                                     {ColumnRef{std::string("c")}},
                                     ColumnRef{std::string("resp")}, true);
        CHECK(ds.n() == 4);
        CHECK(ds.X1(0, 0) == 1.0);
        CHECK(ds.X2(1, 0) == 7.0);
        CHECK(ds.y[2] == 12.0);
    }
    SUBCASE("by index without header") {
        const char* p2 = "test_loader_tmp2.csv";
        {
            std::ofstream f(p2);
            f << "1,2,3\n4,5,6\n7,8,9\n10,11,12\n";
        }
        const auto ds = load_dataset(p2, {ColumnRef{0}}, {ColumnRef{1}}, ColumnRef{2}, false);
        CHECK(ds.X1(1, 0) == 4.0);
        CHECK(ds.y[1] == 6.0);
        std::remove(p2);
    }
    SUBCASE("missing column name") {
        CHECK_THROWS_AS(load_dataset(path, {ColumnRef{std::string("zzz")}},
                                     {ColumnRef{std::string("c")}},
                                     ColumnRef{std::string("resp")}, true),
                        DataError);
    }
    SUBCASE("column used twice") {
        CHECK_THROWS_AS(load_dataset(path, {ColumnRef{std::string("a")}},
                                     {ColumnRef{std::string("a")}},
                                     ColumnRef{std::string("resp")}, true),
                        ConfigError);
    }
    SUBCASE("non-numeric cell names its location") {
        const char* p3 = "test_loader_tmp3.csv";
        {
            std::ofstream f(p3);
            f << "1,2,3\n4,oops,6\n7,8,9\n10,11,12\n";
        }
        CHECK_THROWS_WITH_AS(
            load_dataset(p3, {ColumnRef{0}}, {ColumnRef{1}}, ColumnRef{2}, false),
            doctest::Contains("row 2"), DataError);
        std::remove(p3);
    }
    std::remove(path);
}
