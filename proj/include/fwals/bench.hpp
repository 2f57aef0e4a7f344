#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fwals/methods.hpp"
#include "fwals/simulate.hpp"

namespace fwals {

struct BenchConfig {
    std::vector<int> k2_list = {8, 9, 10, 11};
    int n = 100;
    int repeats = 3;                // timed repeats after one warm-up pass
    bool median_of_means = false;   // robust aggregate for noisy hosts
    std::vector<Method> methods = {Method::Fwals, Method::Fic, Method::Mmse};
    std::uint64_t seed = 0;
    int k2_cap = 14;                // enumeration methods above this are skipped
};

struct BenchRow {
    std::string method;
    int k2 = 0;
    double mean_seconds = 0.0;
    int repeats = 0;
    bool skipped = false;           // enumeration cap exceeded
    std::string note;
};

struct BenchResult {
    std::vector<BenchRow> rows;
};

// Times weight computation + estimation per method on one dataset per k2
// (data generation excluded, monotonic clock, warm-up pass discarded).
BenchResult run_bench(const BenchConfig& cfg);

std::string bench_csv(const BenchResult& result);

}  // namespace fwals
