#include "fwals/bench.hpp"

#include <algorithm>
#include <chrono>
#include <cstdio>

#include "fwals/errors.hpp"

namespace fwals {

namespace {

// Sub-model enumeration blows up as 2^k2; everything else scales gently.
bool uses_enumeration(Method m) {
    switch (m) {
        case Method::Fic:
        case Method::Saic:
        case Method::Sbic:
        case Method::Mmse:
            return true;
        default:
            return false;
    }
}

double aggregate(std::vector<double> times, bool median_of_means) {
    if (!median_of_means) {
        double sum = 0.0;
        for (double t : times) sum += t;
        return sum / static_cast<double>(times.size());
    }
    // Split into three blocks, take the median of the block means.
    const std::size_t n = times.size();
    const std::size_t blocks = std::min<std::size_t>(3, n);
    std::vector<double> means;
    for (std::size_t b = 0; b < blocks; ++b) {
        const std::size_t lo = b * n / blocks;
        const std::size_t hi = (b + 1) * n / blocks;
        double sum = 0.0;
        for (std::size_t i = lo; i < hi; ++i) sum += times[i];
        means.push_back(sum / static_cast<double>(hi - lo));
    }
    std::sort(means.begin(), means.end());
    return means[means.size() / 2];
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
    if (cfg.repeats < 3)
        throw ConfigError("bench: need at least 3 timed repeats");
    if (cfg.k2_list.empty()) throw ConfigError("bench: empty k2 list");
    if (cfg.methods.empty()) throw ConfigError("bench: no methods requested");

    EstimateOptions opts;
    opts.submodel.k2_cap = std::max(cfg.k2_cap, *std::max_element(cfg.k2_list.begin(),
                                                                  cfg.k2_list.end()));

    BenchResult result;
    for (int k2 : cfg.k2_list) {
        BasicDesignConfig design;
        design.n = cfg.n;
        design.k2 = k2;
        design.seed = cfg.seed;
        const Dataset ds = gen_basic(design, static_cast<std::uint64_t>(k2));
        const FocusSpec focus = LinearFocus{Eigen::VectorXd::Ones(design.k1)};

        for (Method m : cfg.methods) {
            BenchRow row;
            row.method = method_name(m);
            row.k2 = k2;
            if (uses_enumeration(m) && k2 > cfg.k2_cap) {
                row.skipped = true;
                row.note = "enumeration cap " + std::to_string(cfg.k2_cap) +
                           " exceeded (2^" + std::to_string(k2) + " sub-models)";
                result.rows.push_back(std::move(row));
                continue;
            }

            try {
                estimate_single(ds, focus, m, opts);  // warm-up, not timed
                std::vector<double> times;
                times.reserve(static_cast<std::size_t>(cfg.repeats));
                for (int r = 0; r < cfg.repeats; ++r) {
                    const auto t0 = std::chrono::steady_clock::now();
                    estimate_single(ds, focus, m, opts);
                    const auto t1 = std::chrono::steady_clock::now();
                    times.push_back(std::chrono::duration<double>(t1 - t0).count());
                }
                row.mean_seconds = aggregate(std::move(times), cfg.median_of_means);
                row.repeats = cfg.repeats;
            } catch (const NumericError& e) {
                row.skipped = true;
                row.note = e.what();
            }
            result.rows.push_back(std::move(row));
        }
    }
    return result;
}

std::string bench_csv(const BenchResult& result) {
    std::string out = "method,k2,mean_seconds,repeats\n";
    for (const auto& row : result.rows) {
        out += row.method;
        out += ',';
        out += std::to_string(row.k2);
        out += ',';
        if (!row.skipped) {
            char buf[40];
            std::snprintf(buf, sizeof(buf), "%.17g", row.mean_seconds);
            out += buf;
        }
        out += ',';
        out += std::to_string(row.repeats);
        out += '\n';
    }
    return out;
}

}  // namespace fwals
