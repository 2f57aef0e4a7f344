#include "doctest.h"

#include <cmath>

#include "fwals/bench.hpp"
#include "fwals/errors.hpp"

using namespace fwals;

TEST_CASE("benchmark rows cover every method and size with positive timings") {
    BenchConfig cfg;
    cfg.k2_list = {2, 3};
    cfg.n = 60;
    cfg.repeats = 3;
    cfg.methods = {Method::Fwals, Method::Fic};
    cfg.seed = 5;

    const BenchResult res = run_bench(cfg);
    REQUIRE(res.rows.size() == 4);

    int i = 0;
    for (int k2 : cfg.k2_list) {
        for (Method m : cfg.methods) {
            const BenchRow& row = res.rows[i++];
            CHECK(row.method == method_name(m));
            CHECK(row.k2 == k2);
            CHECK(!row.skipped);
            CHECK(row.repeats == 3);
            CHECK(row.mean_seconds > 0.0);
            CHECK(std::isfinite(row.mean_seconds));
        }
    }
}

TEST_CASE("enumeration methods beyond the cap are skipped with a note") {
    BenchConfig cfg;
    cfg.k2_list = {2, 5};
    cfg.n = 60;
    cfg.repeats = 3;
    cfg.methods = {Method::Fwals, Method::Saic};
    cfg.k2_cap = 4;

    const BenchResult res = run_bench(cfg);
    REQUIRE(res.rows.size() == 4);

    // Rows come out k2-major: (fwals,2), (saic,2), (fwals,5), (saic,5).
    // The enumeration method runs at k2 = 2 and is skipped at k2 = 5;
    // per-regressor weights are never capped.
    CHECK(res.rows[1].method == method_name(Method::Saic));
    CHECK(res.rows[1].k2 == 2);
    CHECK(!res.rows[0].skipped);
    CHECK(!res.rows[1].skipped);
    CHECK(!res.rows[2].skipped);
    CHECK(res.rows[3].method == method_name(Method::Saic));
    CHECK(res.rows[3].k2 == 5);
    CHECK(res.rows[3].skipped);
    CHECK(!res.rows[3].note.empty());
    CHECK(res.rows[3].repeats == 0);
}

TEST_CASE("benchmark configuration is validated") {
    BenchConfig cfg;
    cfg.repeats = 2;  // below the minimum of 3
    CHECK_THROWS_AS(run_bench(cfg), ConfigError);

    BenchConfig empty;
    empty.k2_list = {};
    empty.repeats = 3;
    CHECK_THROWS_AS(run_bench(empty), ConfigError);
}

TEST_CASE("benchmark csv has one line per row and blank skipped timings") {
    BenchResult res;
    res.rows.push_back({"fwals", 8, 1.25e-05, 5, false, ""});
    res.rows.push_back({"fic", 12, 0.0, 0, true, "cap"});

    const std::string csv = bench_csv(res);
    CHECK(csv ==
          "method,k2,mean_seconds,repeats\n"
          "fwals,8,1.2500000000000001e-05,5\n"
          "fic,12,,0\n");
}

TEST_CASE("median-of-means aggregation stays close to the plain mean") {
    BenchConfig cfg;
    cfg.k2_list = {2};
    cfg.n = 60;
    cfg.repeats = 9;
    cfg.methods = {Method::Fwals};
    cfg.median_of_means = true;

    const BenchResult res = run_bench(cfg);
    REQUIRE(res.rows.size() == 1);
    CHECK(res.rows[0].mean_seconds > 0.0);
    CHECK(res.rows[0].repeats == 9);
}
