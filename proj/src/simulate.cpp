#include "fwals/simulate.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <random>
#include <thread>

#include "fwals/errors.hpp"

namespace fwals {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

// Lower Cholesky factor of the equicorrelated matrix (1-tau)I + tau 11'.
Eigen::MatrixXd equicorr_cholesky(int k, double tau) {
    if (k > 1 && !(tau > -1.0 / (k - 1) && tau < 1.0))
        throw ConfigError("design: tau = " + std::to_string(tau) +
                          " outside (-1/(k-1), 1); covariance not positive definite");
    Eigen::MatrixXd sigma =
        Eigen::MatrixXd::Constant(k, k, tau);
    sigma.diagonal().setOnes();
    Eigen::LLT<Eigen::MatrixXd> llt(sigma);
    if (llt.info() != Eigen::Success)
        throw ConfigError("design: covariance factorization failed");
    return llt.matrixL();
}

}  // namespace

std::uint64_t rep_seed(std::uint64_t master, std::uint64_t rep) {
    return splitmix64(splitmix64(master) ^ (0x9E3779B97F4A7C15ull * (rep + 1)));
}

double cx_for_r2(double q, double r2) {
    if (!(r2 > 0.0 && r2 < 1.0))
        throw ConfigError("design: R^2 target must lie in (0,1), got " +
                          std::to_string(r2));
    if (!(q > 0.0)) throw ConfigError("design: nonpositive signal quadratic form");
    return std::sqrt(r2 / (1.0 - r2) / q);
}

BasicDesignTruth solve_cx(const BasicDesignConfig& cfg) {
    if (cfg.k1 < 1 || cfg.k2 < 1) throw ConfigError("design: need k1 >= 1 and k2 >= 1");
    if (!(cfg.a > 0.0)) throw ConfigError("design: scale divisor a must be positive");
    const int k = cfg.k1 + cfg.k2;
    if (k > 1 && !(cfg.tau > -1.0 / (k - 1) && cfg.tau < 1.0))
        throw ConfigError("design: tau = " + std::to_string(cfg.tau) +
                          " outside (-1/(k-1), 1)");

    // Coefficient pattern at c_x = 1.
    Eigen::VectorXd beta(k);
    for (int j = 0; j < cfg.k1; ++j) beta[j] = 1.0 / cfg.a;
    for (int j = 0; j < cfg.k2; ++j)
        beta[cfg.k1 + j] = static_cast<double>(cfg.k2 - j) / cfg.k2;

    // q = beta' Sigma beta for the equicorrelated Sigma.
    const double ss = beta.squaredNorm();
    const double s = beta.sum();
    const double q = (1.0 - cfg.tau) * ss + cfg.tau * s * s;

    BasicDesignTruth truth;
    truth.cx = cx_for_r2(q, cfg.r2);
    truth.beta1 = Eigen::VectorXd::Constant(cfg.k1, truth.cx / cfg.a);
    truth.beta2 = truth.cx * beta.tail(cfg.k2);
    truth.mu = truth.beta1.sum();
    return truth;
}

Dataset gen_basic(const BasicDesignConfig& cfg, std::uint64_t rep) {
    if (cfg.n <= cfg.k1 + cfg.k2)
        throw ConfigError("design: need N > k1 + k2");
    const BasicDesignTruth truth = solve_cx(cfg);
    const int k = cfg.k1 + cfg.k2;
    const Eigen::MatrixXd L = equicorr_cholesky(k, cfg.tau);

    std::mt19937_64 rng(rep_seed(cfg.seed, rep));
    std::normal_distribution<double> normal(0.0, 1.0);

    Eigen::VectorXd beta(k);
    beta << truth.beta1, truth.beta2;
    Eigen::MatrixXd X(cfg.n, k);
    Eigen::VectorXd y(cfg.n);
    Eigen::VectorXd z(k);
    for (int i = 0; i < cfg.n; ++i) {
        for (int j = 0; j < k; ++j) z[j] = normal(rng);
        X.row(i) = (L * z).transpose();
        y[i] = X.row(i).dot(beta) + normal(rng);
    }
    return make_dataset(std::move(y), X.leftCols(cfg.k1), X.rightCols(cfg.k2));
}

IrfDesignTruth irf_truth(const IrfDesignConfig& cfg) {
    if (cfg.T <= 3 + cfg.k2)
        throw ConfigError("design: need T > 3 + k2");
    if (cfg.k2 < 1) throw ConfigError("design: need k2 >= 1");
    if (cfg.burn_in < 3)
        throw ConfigError("design: burn-in must be >= 3 (lag window)");
    if (cfg.horizons.empty()) throw ConfigError("design: no horizons requested");
    for (int h : cfg.horizons)
        if (h < 0) throw ConfigError("design: negative horizon");

    IrfDesignTruth truth;
    const double rt = std::sqrt(static_cast<double>(cfg.T));
    truth.beta1.resize(3);
    truth.beta1 << 0.5, cfg.d / rt, cfg.d / (2.0 * rt);

    const Eigen::MatrixXd A = companion_matrix(truth.beta1);
    const double radius = A.eigenvalues().cwiseAbs().maxCoeff();
    if (!(radius < 1.0))
        throw ConfigError("design: companion spectral radius " +
                          std::to_string(radius) + " >= 1 (unstable process)");

    const int s = cfg.k2 / 2;
    truth.beta2.resize(cfg.k2);
    for (int j = 0; j < cfg.k2; ++j)
        truth.beta2[j] = (cfg.c_y / rt) * (j < s ? 1.0 : 0.05);

    truth.mu.reserve(cfg.horizons.size());
    for (int h : cfg.horizons)
        truth.mu.push_back(eval_focus(IrfFocus{h}, truth.beta1));
    return truth;
}

Dataset gen_irf(const IrfDesignConfig& cfg, std::uint64_t rep) {
    const IrfDesignTruth truth = irf_truth(cfg);
    const Eigen::MatrixXd L = equicorr_cholesky(cfg.k2, cfg.tau);

    std::mt19937_64 rng(rep_seed(cfg.seed, rep));
    std::normal_distribution<double> normal(0.0, 1.0);

    const int total = cfg.burn_in + cfg.T;
    // y_hist[0..2] are the zero initial values y_{-2}, y_{-1}, y_0.
    std::vector<double> y_hist(static_cast<std::size_t>(total) + 3, 0.0);
    Eigen::MatrixXd x_path(total + 1, cfg.k2);
    x_path.row(0).setZero();

    Eigen::VectorXd z(cfg.k2);
    for (int t = 1; t <= total; ++t) {
        for (int j = 0; j < cfg.k2; ++j) z[j] = normal(rng);
        x_path.row(t) = 0.2 * x_path.row(t - 1) + (L * z).transpose();
        const double u = normal(rng);
        const std::size_t i = static_cast<std::size_t>(t) + 2;  // index of y_t
        y_hist[i] = truth.beta1[0] * y_hist[i - 1] + truth.beta1[1] * y_hist[i - 2] +
                    truth.beta1[2] * y_hist[i - 3] +
                    x_path.row(t).dot(truth.beta2) + u;
    }

    Eigen::VectorXd y(cfg.T);
    Eigen::MatrixXd X1(cfg.T, 3);
    Eigen::MatrixXd X2(cfg.T, cfg.k2);
    for (int r = 0; r < cfg.T; ++r) {
        const int t = cfg.burn_in + 1 + r;
        const std::size_t i = static_cast<std::size_t>(t) + 2;
        y[r] = y_hist[i];
        X1(r, 0) = y_hist[i - 1];
        X1(r, 1) = y_hist[i - 2];
        X1(r, 2) = y_hist[i - 3];
        X2.row(r) = x_path.row(t);
    }
    return make_dataset(std::move(y), std::move(X1), std::move(X2));
}

// ---------------------------------------------------------------------------
// Monte Carlo harness
// ---------------------------------------------------------------------------

namespace {

struct DesignPlan {
    std::string name;
    int n = 0;
    int k2 = 0;
    double tau = 0.0;
    std::optional<double> r2;
    std::optional<double> c_y;
    std::optional<double> d;
    std::vector<int> horizons;          // empty for basic
    std::vector<FocusSpec> foci;
    std::vector<double> mu_true;
    std::function<Dataset(std::uint64_t)> gen;
};

DesignPlan make_plan(const DesignConfig& design) {
    DesignPlan plan;
    if (const auto* basic = std::get_if<BasicDesignConfig>(&design)) {
        const auto truth = solve_cx(*basic);
        plan.name = "basic";
        plan.n = basic->n;
        plan.k2 = basic->k2;
        plan.tau = basic->tau;
        plan.r2 = basic->r2;
        plan.foci.push_back(LinearFocus{Eigen::VectorXd::Ones(basic->k1)});
        plan.mu_true.push_back(truth.mu);
        const BasicDesignConfig cfg = *basic;
        plan.gen = [cfg](std::uint64_t rep) { return gen_basic(cfg, rep); };
    } else {
        const auto& irf = std::get<IrfDesignConfig>(design);
        const auto truth = irf_truth(irf);
        plan.name = "irf";
        plan.n = irf.T;
        plan.k2 = irf.k2;
        plan.tau = irf.tau;
        plan.c_y = irf.c_y;
        plan.d = irf.d;
        plan.horizons = irf.horizons;
        for (std::size_t i = 0; i < irf.horizons.size(); ++i) {
            plan.foci.push_back(IrfFocus{irf.horizons[i]});
            plan.mu_true.push_back(truth.mu[i]);
        }
        const IrfDesignConfig cfg = irf;
        plan.gen = [cfg](std::uint64_t rep) { return gen_irf(cfg, rep); };
    }
    return plan;
}

}  // namespace

RiskTable run_monte_carlo_custom(const DesignConfig& design,
                                 const std::vector<NamedFitter>& fitters,
                                 const McOptions& mc) {
    if (mc.reps < 1) throw ConfigError("monte carlo: need at least one rep");
    const DesignPlan plan = make_plan(design);
    const std::size_t n_fit = fitters.size();
    const std::size_t n_foci = plan.foci.size();
    const std::size_t reps = static_cast<std::size_t>(mc.reps);

    // sq[fitter][focus][rep]; NaN marks a failed cell. The layout (and the
    // final sequential reduction) makes results independent of scheduling.
    std::vector<double> sq(n_fit * n_foci * reps,
                           std::numeric_limits<double>::quiet_NaN());
    auto slot = [&](std::size_t f, std::size_t c, std::size_t r) -> double& {
        return sq[(f * n_foci + c) * reps + r];
    };

    int threads = mc.threads;
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    threads = std::max(1, std::min<int>(threads, mc.reps));

    std::atomic<std::size_t> next{0};
    auto worker = [&]() {
        for (;;) {
            const std::size_t rep = next.fetch_add(1);
            if (rep >= reps) break;
            Dataset ds = [&]() { return plan.gen(rep); }();
            for (std::size_t f = 0; f < n_fit; ++f) {
                for (std::size_t c = 0; c < n_foci; ++c) {
                    try {
                        const double mu = fitters[f].fit_mu(ds, plan.foci[c]);
                        const double err = mu - plan.mu_true[c];
                        slot(f, c, rep) = err * err;
                    } catch (const std::exception&) {
                        // Failure stays confined to this cell.
                    }
                }
            }
        }
    };

    if (threads == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        pool.reserve(static_cast<std::size_t>(threads));
        for (int i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }

    RiskTable table;
    for (std::size_t f = 0; f < n_fit; ++f) {
        for (std::size_t c = 0; c < n_foci; ++c) {
            RiskRow row;
            row.method = fitters[f].name;
            row.design = plan.name;
            row.n = plan.n;
            row.k2 = plan.k2;
            row.tau = plan.tau;
            row.r2 = plan.r2;
            row.c_y = plan.c_y;
            row.d = plan.d;
            if (!plan.horizons.empty()) row.horizon = plan.horizons[c];

            double sum = 0.0;
            int good = 0;
            for (std::size_t r = 0; r < reps; ++r) {
                const double v = slot(f, c, r);
                if (std::isfinite(v)) {
                    sum += v;
                    ++good;
                }
            }
            row.reps = good;
            if (good > 0) {
                row.risk = sum / good;
                double ss = 0.0;
                for (std::size_t r = 0; r < reps; ++r) {
                    const double v = slot(f, c, r);
                    if (std::isfinite(v)) ss += (v - row.risk) * (v - row.risk);
                }
                row.mc_se = good > 1 ? std::sqrt(ss / (good - 1) / good) : 0.0;
            } else {
                row.risk = std::numeric_limits<double>::quiet_NaN();
                row.mc_se = std::numeric_limits<double>::quiet_NaN();
            }
            table.rows.push_back(std::move(row));
        }
    }
    return table;
}

RiskTable run_monte_carlo(const DesignConfig& design, const std::vector<Method>& methods,
                          const McOptions& mc, const EstimateOptions& opts) {
    std::vector<NamedFitter> fitters;
    fitters.reserve(methods.size());
    for (Method m : methods) {
        fitters.push_back(NamedFitter{
            method_name(m), [m, opts](const Dataset& ds, const FocusSpec& fs) {
                return estimate_single(ds, fs, m, opts).mu;
            }});
    }
    return run_monte_carlo_custom(design, fitters, mc);
}

// ---------------------------------------------------------------------------
// Serialization
// ---------------------------------------------------------------------------

namespace {

std::string format_double(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return buf;
}

std::string format_optional(const std::optional<double>& v) {
    return v ? format_double(*v) : std::string{};
}

}  // namespace

std::string risk_table_csv(const RiskTable& table) {
    std::string out = "method,design,n,k2,tau,r2,cy,d,h,risk,mc_se,reps\n";
    for (const auto& row : table.rows) {
        out += row.method;
        out += ',';
        out += row.design;
        out += ',';
        out += std::to_string(row.n);
        out += ',';
        out += std::to_string(row.k2);
        out += ',';
        out += format_double(row.tau);
        out += ',';
        out += format_optional(row.r2);
        out += ',';
        out += format_optional(row.c_y);
        out += ',';
        out += format_optional(row.d);
        out += ',';
        out += row.horizon ? std::to_string(*row.horizon) : std::string{};
        out += ',';
        out += format_double(row.risk);
        out += ',';
        out += format_double(row.mc_se);
        out += ',';
        out += std::to_string(row.reps);
        out += '\n';
    }
    return out;
}

}  // namespace fwals
