#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "fwals/bench.hpp"
#include "fwals/errors.hpp"
#include "fwals/methods.hpp"
#include "fwals/parsing.hpp"
#include "fwals/simulate.hpp"
#include "fwals/weights.hpp"

namespace {

using nlohmann::json;

void write_output(const std::string& out_path, const std::string& content) {
    if (out_path.empty()) {
        std::cout << content;
        return;
    }
    std::ofstream ofs(out_path, std::ios::binary);
    if (!ofs) throw fwals::ConfigError("cannot open output file '" + out_path + "'");
    ofs << content;
    if (!ofs) throw fwals::ConfigError("failed writing output file '" + out_path + "'");
}

fwals::OmegaMode parse_omega(const std::string& text) {
    if (text == "homoskedastic" || text == "hom") return fwals::OmegaMode::Homoskedastic;
    if (text == "hc0") return fwals::OmegaMode::HC0;
    throw fwals::ConfigError("unknown --omega '" + text + "' (homoskedastic | hc0)");
}

int resolve_threads(int flag_value) {
    if (flag_value != 0) return flag_value;
    if (const char* env = std::getenv("FWALS_THREADS")) {
        try {
            return std::stoi(env);
        } catch (const std::exception&) {
            throw fwals::ConfigError("FWALS_THREADS is not an integer: '" +
                                     std::string(env) + "'");
        }
    }
    return 1;
}

std::vector<double> to_std(const Eigen::VectorXd& v) {
    return {v.data(), v.data() + v.size()};
}

// ---------------------------------------------------------------------------
// estimate
// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::string data;
    std::string core;
    std::string aux;
    std::string y;
    bool header = false;
    std::string focus = "linear:1";
    std::string methods = "fwals";
    std::string omega = "homoskedastic";
    std::string out;
};

void run_estimate(const EstimateArgs& args) {
    const auto core_cols = fwals::parse_columns(args.core);
    const auto aux_cols = fwals::parse_columns(args.aux);
    const auto y_col = fwals::parse_column(args.y);
    const fwals::Dataset ds =
        fwals::load_dataset(args.data, core_cols, aux_cols, y_col, args.header);

    const fwals::FocusSpec focus = fwals::parse_focus(args.focus);
    const auto methods = fwals::parse_method_list(args.methods);
    fwals::EstimateOptions opts;
    opts.omega = parse_omega(args.omega);

    const auto results = fwals::estimate_all(ds, focus, methods, opts);

    json doc;
    doc["schema"] = "fwals/1";
    doc["command"] = "estimate";
    doc["n"] = ds.n();
    doc["k1"] = ds.k1();
    doc["k2"] = ds.k2();
    doc["focus"] = args.focus;
    doc["omega"] = args.omega;
    json res = json::array();
    for (const auto& r : results) {
        json item;
        item["method"] = fwals::method_name(r.method);
        item["weight_kind"] = r.weight_kind == fwals::WeightKind::Box ? "box" : "simplex";
        item["weights"] = to_std(r.weights);
        item["beta1"] = to_std(r.beta1);
        item["mu"] = r.mu;
        item["amse"] = r.amse;
        item["wall_time_s"] = r.wall_time_s;
        if (r.omega_raw.size() > 0) item["omega_raw"] = to_std(r.omega_raw);
        res.push_back(std::move(item));
    }
    doc["results"] = std::move(res);
    write_output(args.out, doc.dump(2) + "\n");
}

// ---------------------------------------------------------------------------
// simulate
// ---------------------------------------------------------------------------

struct SimulateBasicArgs {
    int n = 100;
    int k1 = 3;
    int k2 = 2;
    std::string tau = "0.3";
    std::string r2 = "0.5";
    int reps = 300;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string methods = "all";
    std::string omega = "homoskedastic";
    std::string out;
};

void run_simulate_basic(const SimulateBasicArgs& args) {
    const auto taus = fwals::parse_grid(args.tau);
    const auto r2s = fwals::parse_grid(args.r2);
    const auto methods = fwals::parse_method_list(args.methods);
    fwals::EstimateOptions opts;
    opts.omega = parse_omega(args.omega);
    fwals::McOptions mc;
    mc.reps = args.reps;
    mc.threads = resolve_threads(args.threads);

    fwals::RiskTable table;
    for (double tau : taus) {
        for (double r2 : r2s) {
            fwals::BasicDesignConfig cfg;
            cfg.n = args.n;
            cfg.k1 = args.k1;
            cfg.k2 = args.k2;
            cfg.tau = tau;
            cfg.r2 = r2;
            cfg.seed = args.seed;
            auto cell = fwals::run_monte_carlo(cfg, methods, mc, opts);
            for (auto& row : cell.rows) table.rows.push_back(std::move(row));
        }
    }
    write_output(args.out, fwals::risk_table_csv(table));
}

struct SimulateIrfArgs {
    int T = 100;
    int k2 = 4;
    std::string cy = "2.0";
    std::string d = "1.0";
    double tau = 0.2;
    int burn_in = 100;
    std::string horizons = "1,3,5,7";
    int reps = 300;
    std::uint64_t seed = 0;
    int threads = 0;
    std::string methods = "all";
    std::string omega = "homoskedastic";
    std::string out;
};

void run_simulate_irf(const SimulateIrfArgs& args) {
    const auto cys = fwals::parse_grid(args.cy);
    const auto ds = fwals::parse_grid(args.d);
    const auto horizons = fwals::parse_int_list(args.horizons);
    const auto methods = fwals::parse_method_list(args.methods);
    fwals::EstimateOptions opts;
    opts.omega = parse_omega(args.omega);
    fwals::McOptions mc;
    mc.reps = args.reps;
    mc.threads = resolve_threads(args.threads);

    fwals::RiskTable table;
    for (double cy : cys) {
        for (double d : ds) {
            fwals::IrfDesignConfig cfg;
            cfg.T = args.T;
            cfg.k2 = args.k2;
            cfg.c_y = cy;
            cfg.d = d;
            cfg.tau = args.tau;
            cfg.burn_in = args.burn_in;
            cfg.horizons = horizons;
            cfg.seed = args.seed;
            auto cell = fwals::run_monte_carlo(cfg, methods, mc, opts);
            for (auto& row : cell.rows) table.rows.push_back(std::move(row));
        }
    }
    write_output(args.out, fwals::risk_table_csv(table));
}

// ---------------------------------------------------------------------------
// bench
// ---------------------------------------------------------------------------

struct BenchArgs {
    std::string k2 = "8,9,10,11";
    int n = 100;
    int repeats = 3;
    bool median_of_means = false;
    std::string methods = "fwals,fic,mmse";
    std::uint64_t seed = 0;
    int cap = 14;
    std::string out;
};

void run_bench_cmd(const BenchArgs& args) {
    fwals::BenchConfig cfg;
    cfg.k2_list = fwals::parse_int_list(args.k2);
    cfg.n = args.n;
    cfg.repeats = args.repeats;
    cfg.median_of_means = args.median_of_means;
    cfg.methods = fwals::parse_method_list(args.methods);
    cfg.seed = args.seed;
    cfg.k2_cap = args.cap;
    const auto result = fwals::run_bench(cfg);
    for (const auto& row : result.rows)
        if (row.skipped)
            std::cerr << "note: " << row.method << " at k2=" << row.k2
                      << " skipped: " << row.note << "\n";
    write_output(args.out, fwals::bench_csv(result));
}

// ---------------------------------------------------------------------------
// weight-curve
// ---------------------------------------------------------------------------

struct WeightCurveArgs {
    std::string t = "0.01:4:40";
    std::string out;
};

void run_weight_curve(const WeightCurveArgs& args) {
    const auto grid = fwals::parse_grid(args.t);
    for (double t : grid)
        if (t == 0.0)
            throw fwals::ConfigError(
                "weight-curve: t = 0 is excluded (weights are defined for t != 0)");

    std::string out =
        "t,omega_theoretical,omega_laplace,omega_cauchy,omega_pareto,omega_weibull\n";
    char buf[40];
    auto append = [&](double v) {
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out += buf;
    };
    for (double t : grid) {
        append(t);
        out += ',';
        append(fwals::scalar_optimal_weight(t));
        out += ',';
        append(fwals::prior_weight(fwals::PriorFamily::Laplace, t));
        out += ',';
        append(fwals::prior_weight(fwals::PriorFamily::Cauchy, t));
        out += ',';
        append(fwals::prior_weight(fwals::PriorFamily::Pareto, t));
        out += ',';
        append(fwals::prior_weight(fwals::PriorFamily::Weibull, t));
        out += '\n';
    }
    write_output(args.out, out);
}

void print_error_json(const std::string& type, const std::string& message) {
    json err;
    err["error"]["type"] = type;
    err["error"]["message"] = message;
    std::cerr << err.dump() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Focused weighted-average least squares estimation"};
    app.require_subcommand(1);
    app.set_version_flag("--version", "fwals 1.0.0");

    EstimateArgs est;
    auto* cmd_est = app.add_subcommand("estimate", "Estimate on a CSV dataset");
    cmd_est->add_option("--data", est.data, "CSV file path")->required();
    cmd_est->add_option("--core", est.core, "Core regressor columns (names or 0-based indices)")
        ->required();
    cmd_est->add_option("--aux", est.aux, "Auxiliary regressor columns")->required();
    cmd_est->add_option("--y", est.y, "Response column")->required();
    cmd_est->add_flag("--header", est.header, "First CSV line is a header");
    cmd_est->add_option("--focus", est.focus, "Focus: linear:c1,c2,... | irf:h=<int>");
    cmd_est->add_option("--methods", est.methods, "Comma list (or 'all')");
    cmd_est->add_option("--omega", est.omega, "homoskedastic | hc0");
    cmd_est->add_option("--out", est.out, "Output file (default stdout)");
    cmd_est->callback([&est]() { run_estimate(est); });

    auto* cmd_sim = app.add_subcommand("simulate", "Monte Carlo risk tables");
    cmd_sim->require_subcommand(1);

    SimulateBasicArgs sb;
    auto* cmd_sb = cmd_sim->add_subcommand("basic", "Cross-sectional design");
    cmd_sb->add_option("--n", sb.n, "Sample size");
    cmd_sb->add_option("--k1", sb.k1, "Core regressors");
    cmd_sb->add_option("--k2", sb.k2, "Auxiliary regressors");
    cmd_sb->add_option("--tau", sb.tau, "Equicorrelation (value, list, or start:end:count)");
    cmd_sb->add_option("--r2", sb.r2, "Population R^2 target grid");
    cmd_sb->add_option("--reps", sb.reps, "Monte Carlo replications");
    cmd_sb->add_option("--seed", sb.seed, "Master seed");
    cmd_sb->add_option("--threads", sb.threads, "Worker threads (0: FWALS_THREADS or 1)");
    cmd_sb->add_option("--methods", sb.methods, "Comma list (or 'all')");
    cmd_sb->add_option("--omega", sb.omega, "homoskedastic | hc0");
    cmd_sb->add_option("--out", sb.out, "Output file (default stdout)");
    cmd_sb->callback([&sb]() { run_simulate_basic(sb); });

    SimulateIrfArgs si;
    auto* cmd_si = cmd_sim->add_subcommand("irf", "Dynamic impulse-response design");
    cmd_si->set_help_flag("--help", "Print this help message and exit");  // frees --h
    cmd_si->add_option("--t-obs,--n", si.T, "Series length kept after burn-in");
    cmd_si->add_option("--k2", si.k2, "Auxiliary regressors");
    cmd_si->add_option("--cy", si.cy, "Auxiliary signal scale grid");
    cmd_si->add_option("--d", si.d, "Local lag-coefficient scale grid");
    cmd_si->add_option("--tau", si.tau, "Innovation equicorrelation");
    cmd_si->add_option("--burn-in", si.burn_in, "Discarded warm-up observations");
    cmd_si->add_option("--h", si.horizons, "Impulse-response horizons (comma list)");
    cmd_si->add_option("--reps", si.reps, "Monte Carlo replications");
    cmd_si->add_option("--seed", si.seed, "Master seed");
    cmd_si->add_option("--threads", si.threads, "Worker threads (0: FWALS_THREADS or 1)");
    cmd_si->add_option("--methods", si.methods, "Comma list (or 'all')");
    cmd_si->add_option("--omega", si.omega, "homoskedastic | hc0");
    cmd_si->add_option("--out", si.out, "Output file (default stdout)");
    cmd_si->callback([&si]() { run_simulate_irf(si); });

    BenchArgs ba;
    auto* cmd_bench = app.add_subcommand("bench", "Wall-clock scaling benchmark");
    cmd_bench->add_option("--k2", ba.k2, "k2 values (comma list)");
    cmd_bench->add_option("--n", ba.n, "Sample size");
    cmd_bench->add_option("--repeats", ba.repeats, "Timed repeats (>= 3; one warm-up)");
    cmd_bench->add_flag("--median-of-means", ba.median_of_means, "Robust aggregate");
    cmd_bench->add_option("--methods", ba.methods, "Comma list");
    cmd_bench->add_option("--seed", ba.seed, "Dataset seed");
    cmd_bench->add_option("--cap", ba.cap, "Enumeration cap (skip above)");
    cmd_bench->add_option("--out", ba.out, "Output file (default stdout)");
    cmd_bench->callback([&ba]() { run_bench_cmd(ba); });

    WeightCurveArgs wc;
    auto* cmd_wc = app.add_subcommand("weight-curve",
                                      "Shrinkage weight omega(t) per prior family");
    cmd_wc->add_option("--t", wc.t, "t grid (start:end:count, list, or value; 0 excluded)");
    cmd_wc->add_option("--out", wc.out, "Output file (default stdout)");
    cmd_wc->callback([&wc]() { run_weight_curve(wc); });

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e);
        print_error_json("config", e.what());
        return 2;
    } catch (const fwals::ConfigError& e) {
        print_error_json("config", e.what());
        return 2;
    } catch (const fwals::DataError& e) {
        print_error_json("data", e.what());
        return 3;
    } catch (const fwals::NumericError& e) {
        print_error_json("numeric", e.what());
        return 4;
    } catch (const std::exception& e) {
        print_error_json("internal", e.what());
        return 1;
    }
    return 0;
}
