#include "fwals/weights.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "fwals/errors.hpp"
#include "fwals/quadrature.hpp"

namespace fwals {

// ---------------------------------------------------------------------------
// Box minimization
// ---------------------------------------------------------------------------

namespace {

// Exact minimum over [0,1] of f(t) = a t^2 + 2 g t (+ const).
double coordinate_minimum(double a, double g, double current) {
    if (a > 0.0) return std::clamp(-g / a, 0.0, 1.0);
    if (a == 0.0) {
        if (g > 0.0) return 0.0;
        if (g < 0.0) return 1.0;
        return current;  // flat coordinate
    }
    // Concave: minimum at an endpoint; f(0) = 0, f(1) = a + 2g.
    return (a + 2.0 * g < 0.0) ? 1.0 : 0.0;
}

struct DescentOutcome {
    Eigen::VectorXd w;
    double objective;
    bool converged;
};

DescentOutcome coordinate_descent(const AmseQuadratic& q, Eigen::VectorXd w,
                                  double tol, int max_sweeps) {
    const Eigen::Index k2 = w.size();
    bool converged = false;
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double max_move = 0.0;
        for (Eigen::Index j = 0; j < k2; ++j) {
            const double a = q.A(j, j);
            const double g = q.A.row(j).dot(w) - a * w[j] + q.b[j];
            const double t = coordinate_minimum(a, g, w[j]);
            max_move = std::max(max_move, std::abs(t - w[j]));
            w[j] = t;
        }
        if (max_move <= tol) {
            converged = true;
            break;
        }
    }
    return {w, q.value(w), converged};
}

}  // namespace

BoxMinimum minimize_box(const AmseQuadratic& q, const MinimizeOptions& opts) {
    const Eigen::Index k2 = q.b.size();
    if (q.A.rows() != k2 || q.A.cols() != k2)
        throw NumericError("minimize_box: dimension mismatch between A and b");

    std::vector<Eigen::VectorXd> starts;
    starts.push_back(Eigen::VectorXd::Zero(k2));
    starts.push_back(Eigen::VectorXd::Ones(k2));
    starts.push_back(Eigen::VectorXd::Constant(k2, 0.5));
    std::mt19937_64 rng(opts.seed);
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    for (int s = 0; s < opts.random_starts; ++s) {
        Eigen::VectorXd w(k2);
        for (Eigen::Index j = 0; j < k2; ++j) w[j] = unif(rng);
        starts.push_back(std::move(w));
    }

    BoxMinimum best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const auto& w0 : starts) {
        const auto out = coordinate_descent(q, w0, opts.tol, opts.max_sweeps);
        if (out.objective < best.objective) {
            best.w = out.w;
            best.objective = out.objective;
            best.converged = out.converged;
        }
    }
    return best;
}

// ---------------------------------------------------------------------------
// Simplex minimization
// ---------------------------------------------------------------------------

namespace {

// Euclidean projection onto the probability simplex.
Eigen::VectorXd project_simplex(const Eigen::VectorXd& v) {
    const Eigen::Index m = v.size();
    std::vector<double> u(v.data(), v.data() + m);
    std::sort(u.begin(), u.end(), std::greater<double>());
    double css = 0.0, theta = 0.0;
    for (Eigen::Index i = 0; i < m; ++i) {
        css += u[static_cast<std::size_t>(i)];
        const double candidate = (css - 1.0) / static_cast<double>(i + 1);
        if (u[static_cast<std::size_t>(i)] - candidate > 0.0) theta = candidate;
    }
    return (v.array() - theta).max(0.0);
}

struct SimplexDescentOutcome {
    Eigen::VectorXd u;
    double objective;
    bool converged;
};

SimplexDescentOutcome projected_gradient(const Eigen::MatrixXd& J, Eigen::VectorXd u,
                                         double tol, int max_iters) {
    // Step length from a cheap curvature bound; only the direction matters
    // because the move along it is an exact 1-D quadratic minimization.
    const double scale = std::max(1.0, J.cwiseAbs().rowwise().sum().maxCoeff());
    const double step = 1.0 / (2.0 * scale);
    bool converged = false;
    Eigen::VectorXd ju = J * u;
    for (int it = 0; it < max_iters; ++it) {
        const Eigen::VectorXd grad = 2.0 * ju;
        const Eigen::VectorXd v = project_simplex(u - step * grad);
        const Eigen::VectorXd d = v - u;
        if (d.cwiseAbs().maxCoeff() <= tol) {
            converged = true;
            break;
        }
        const Eigen::VectorXd jd = J * d;
        const double a = d.dot(jd);          // curvature along d
        const double g = u.dot(jd);          // (u'Jd), gradient/2 along d
        double t;
        if (a > 0.0)
            t = std::clamp(-g / a, 0.0, 1.0);
        else
            t = (a + 2.0 * g < 0.0) ? 1.0 : 0.0;  // concave: endpoint rule
        if (t <= 0.0) {
            converged = true;  // no improving move along the feasible direction
            break;
        }
        u += t * d;
        ju += t * jd;
    }
    return {u, u.dot(ju), converged};
}

// Exact pairwise-exchange descent (move mass between two coordinates, exact
// 1-D quadratic minimization per pair). Pairwise optimality over all pairs
// with u_i > 0 is the KKT condition for a quadratic over the simplex, so this
// polishes a projected-gradient point to stationarity at machine precision.
SimplexDescentOutcome pairwise_refine(const Eigen::MatrixXd& J,
                                      SimplexDescentOutcome state, int max_sweeps) {
    const Eigen::Index m = J.rows();
    Eigen::VectorXd& u = state.u;
    Eigen::VectorXd ju = J * u;
    const double thresh = 1e-14 * (1.0 + std::abs(state.objective));
    for (int sweep = 0; sweep < max_sweeps; ++sweep) {
        double sweep_gain = 0.0;
        for (Eigen::Index i = 0; i < m; ++i) {
            if (u[i] <= 0.0) continue;
            for (Eigen::Index j = 0; j < m; ++j) {
                if (j == i) continue;
                const double a = J(i, i) + J(j, j) - 2.0 * J(i, j);
                const double g = ju[j] - ju[i];
                double t;
                if (a > 0.0) {
                    t = std::clamp(-g / a, -u[j], u[i]);
                } else {
                    const double lo = -u[j], hi = u[i];
                    t = (2.0 * lo * g + lo * lo * a < 2.0 * hi * g + hi * hi * a) ? lo : hi;
                }
                const double gain = -(2.0 * t * g + t * t * a);
                if (gain <= thresh) continue;
                u[j] += t;
                u[i] -= t;
                if (u[i] < 0.0) u[i] = 0.0;
                if (u[j] < 0.0) u[j] = 0.0;
                ju += t * (J.col(j) - J.col(i));
                sweep_gain += gain;
                if (u[i] <= 0.0) break;
            }
        }
        if (sweep_gain <= thresh) break;
    }
    state.objective = u.dot(J * u);
    return state;
}

}  // namespace

SimplexMinimum minimize_simplex(const Eigen::MatrixXd& J,
                                const SimplexMinimizerOptions& opts) {
    const Eigen::Index m = J.rows();
    if (J.cols() != m) throw NumericError("minimize_simplex: J must be square");

    // Vertex screening: f(e_i) = J_ii, so the best vertices are free to find.
    std::vector<Eigen::Index> order(static_cast<std::size_t>(m));
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::sort(order.begin(), order.end(),
              [&](Eigen::Index a, Eigen::Index b) { return J(a, a) < J(b, b); });

    std::vector<Eigen::VectorXd> starts;
    const int nv = std::min<int>(opts.vertex_starts, static_cast<int>(m));
    for (int i = 0; i < nv; ++i) {
        Eigen::VectorXd e = Eigen::VectorXd::Zero(m);
        e[order[static_cast<std::size_t>(i)]] = 1.0;
        starts.push_back(std::move(e));
    }
    starts.push_back(Eigen::VectorXd::Constant(m, 1.0 / static_cast<double>(m)));
    std::mt19937_64 rng(opts.seed);
    std::exponential_distribution<double> expo(1.0);
    for (int s = 0; s < opts.random_starts; ++s) {
        Eigen::VectorXd u(m);
        for (Eigen::Index i = 0; i < m; ++i) u[i] = expo(rng);
        u /= u.sum();
        starts.push_back(std::move(u));
    }

    // Polishing every multistart candidate is affordable for small tables;
    // for large ones only the winner is polished.
    const bool refine_all = m <= 64;
    SimplexMinimum best;
    best.objective = std::numeric_limits<double>::infinity();
    for (const auto& u0 : starts) {
        auto out = projected_gradient(J, u0, opts.tol, opts.max_iters);
        if (refine_all) out = pairwise_refine(J, std::move(out), 200);
        if (out.objective < best.objective) {
            best.w = out.u;
            best.objective = out.objective;
            best.converged = out.converged;
        }
    }
    if (!refine_all) {
        auto out = pairwise_refine(J, {best.w, best.objective, best.converged}, 50);
        best.w = out.u;
        best.objective = out.objective;
    }
    return best;
}

// ---------------------------------------------------------------------------
// Sub-model tables and enumeration methods
// ---------------------------------------------------------------------------

SubmodelFocusTable submodel_focus_table(const Dataset& ds, const OrthoTransform& ot,
                                        const CoreEstimates& ce, const FocusSpec& fs,
                                        const SubmodelOptions& opts) {
    if (ds.k2() > opts.k2_cap)
        throw ConfigError("sub-model enumeration: k2 = " + std::to_string(ds.k2()) +
                          " exceeds the cap " + std::to_string(opts.k2_cap) +
                          " (2^k2 models)");
    SubmodelFocusTable table;
    table.models = enumerate_submodels(static_cast<int>(ds.k2()));
    const auto m = static_cast<Eigen::Index>(table.models.size());
    table.mu.resize(m);
    table.rss.resize(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& sel = table.models[static_cast<std::size_t>(i)];
        table.mu[i] = eval_focus(fs, submodel_beta1(ce, ot, sel));
        table.rss[i] = submodel_rss(ce, ds, sel);
    }
    return table;
}

Eigen::MatrixXd submodel_joint_amse(const AsymptoticComponents& ac,
                                    const std::vector<SubmodelSelection>& models) {
    const auto m = static_cast<Eigen::Index>(models.size());
    const Eigen::Index k1 = ac.k1, k2 = ac.k2, k = k1 + k2;

    // bias_i = a_i' delta with a_i = (C')^{-1}(I - S_i) C'Xi'D  (V_diag = C'Xi'D)
    Eigen::MatrixXd Amat(k2, m);
    // psi_i = Psi_i'D: top Q11^{-1}D + Xi C (S_i .* v); bottom -C (S_i .* v)
    Eigen::MatrixXd PsiD(k, m);
    const Eigen::VectorXd q11inv_d = ac.Q11_inv * ac.D;
    const Eigen::MatrixXd cinv_t = ac.C_inv.transpose();
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& sel = models[static_cast<std::size_t>(i)];
        Eigen::VectorXd kept = Eigen::VectorXd::Zero(k2);      // S_i v
        Eigen::VectorXd dropped = ac.V_diag;                   // (I - S_i) v
        for (Eigen::Index j = 0; j < k2; ++j) {
            if (sel.included[static_cast<std::size_t>(j)]) {
                kept[j] = ac.V_diag[j];
                dropped[j] = 0.0;
            }
        }
        Amat.col(i) = cinv_t * dropped;
        PsiD.col(i).head(k1) = q11inv_d + ac.Xi * (ac.C * kept);
        PsiD.col(i).tail(k2) = -(ac.C * kept);
    }
    Eigen::MatrixXd J = Amat.transpose() * ac.delta_outer_corrected * Amat +
                        PsiD.transpose() * ac.Omega * PsiD;
    return 0.5 * (J + J.transpose());
}

FicResult fic_weights(const Dataset& ds, const OrthoTransform& ot,
                      const CoreEstimates& ce, const FocusSpec& fs, OmegaMode mode,
                      const SubmodelOptions& sopts, const SimplexMinimizerOptions& mopts) {
    auto table = submodel_focus_table(ds, ot, ce, fs, sopts);
    const AsymptoticComponents ac = build_components(ds, ot, ce, fs, mode);
    const Eigen::MatrixXd J = submodel_joint_amse(ac, table.models);
    const SimplexMinimum sm = minimize_simplex(J, mopts);
    FicResult out{SimplexWeights(sm.w), sm.objective, std::move(table), 0.0};
    out.mu = out.weights.w.dot(out.table.mu);
    return out;
}

SimplexWeights ic_weights(const Dataset& ds, const CoreEstimates& ce,
                          const std::vector<SubmodelSelection>& models,
                          InfoCriterion ic) {
    const auto n = static_cast<double>(ds.n());
    const double penalty = (ic == InfoCriterion::AIC) ? 2.0 : std::log(n);
    const auto m = static_cast<Eigen::Index>(models.size());
    Eigen::VectorXd log_w(m);
    for (Eigen::Index i = 0; i < m; ++i) {
        const auto& sel = models[static_cast<std::size_t>(i)];
        const double rss = std::max(submodel_rss(ce, ds, sel), 1e-300);
        const double crit =
            n * std::log(rss / n) +
            penalty * static_cast<double>(ds.k1() + sel.count());
        log_w[i] = -0.5 * crit;
    }
    const double top = log_w.maxCoeff();
    Eigen::VectorXd w = (log_w.array() - top).exp();
    w /= w.sum();
    return SimplexWeights(std::move(w));
}

MmseResult mmse_weights(const Eigen::MatrixXd& J, const Eigen::VectorXd& mu_table) {
    const Eigen::Index m = J.rows();
    if (mu_table.size() != m)
        throw NumericError("mmse: focus table length != number of sub-models");

    // KKT system for min w'Jw s.t. 1'w = 1.
    Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(m + 1, m + 1);
    kkt.topLeftCorner(m, m) = 2.0 * J;
    kkt.topRightCorner(m, 1).setOnes();
    kkt.bottomLeftCorner(1, m).setOnes();
    Eigen::VectorXd rhs = Eigen::VectorXd::Zero(m + 1);
    rhs[m] = 1.0;

    // The sub-model influence vectors obey affine dependencies (inclusion
    // masks of distinct sub-models sum to the same total), so for k2 >= 2 the
    // KKT matrix is structurally rank-deficient and the system is typically
    // inconsistent: no exact stationary point exists. The LU solution is kept
    // only when it actually solves the system; otherwise the estimator is
    // defined by the least-norm least-squares KKT solution, rescaled onto the
    // constraint plane.
    constexpr double kSumTol = 1e-10;
    Eigen::FullPivLU<Eigen::MatrixXd> lu(kkt);
    Eigen::VectorXd sol;
    bool ok = false;
    if (lu.isInvertible()) {
        sol = lu.solve(rhs);
        const double resid = (kkt * sol - rhs).cwiseAbs().maxCoeff();
        const double scale = std::max(1.0, kkt.cwiseAbs().maxCoeff() *
                                               std::max(1.0, sol.cwiseAbs().maxCoeff()));
        ok = std::abs(sol.head(m).sum() - 1.0) <= kSumTol && resid <= 1e-8 * scale;
    }
    if (!ok) sol = kkt.completeOrthogonalDecomposition().solve(rhs);

    MmseResult out;
    out.w = sol.head(m);
    const double sum = out.w.sum();
    if (!out.w.allFinite() || std::abs(sum) < 1e-10 * (1.0 + out.w.cwiseAbs().maxCoeff()))
        throw NumericError("mmse: stationarity system is singular beyond the "
                           "least-norm fallback (weights sum to " +
                           std::to_string(sum) + ")");
    out.w /= sum;
    out.objective = out.w.dot(J * out.w);
    out.mu = out.w.dot(mu_table);
    return out;
}

// ---------------------------------------------------------------------------
// Prior-based shrinkage
// ---------------------------------------------------------------------------

namespace {

constexpr double kLaplaceRate = 0.6931471805599453;  // ln 2
constexpr double kParetoA = 0.0862;
constexpr double kParetoC = 0.0676;
constexpr double kWeibullB = 0.8876;
constexpr double kWeibullC = 0.6931471805599453;     // ln 2

double floored(double t) {
    const double magnitude = std::max(std::abs(t), 1e-10);
    return std::signbit(t) ? -magnitude : magnitude;
}

// Posterior mean of eta given t ~ N(eta, 1), integrating the prior over the
// window eta in t + [-20, 20] (the Gaussian likelihood is ~1e-87 at the
// edges, so the window always carries the posterior mass). Every prior
// density here is non-smooth at eta = 0 (a kink, or an integrable spike for
// the sub-unit Weibull shape), where Gauss-Legendre loses most of its
// accuracy, so the window is split there and each smooth piece integrated
// separately; the nodes of the open rule never land on the break point.
double posterior_mean(PriorFamily family, double t) {
    static const GaussLegendre gl = gauss_legendre(401);
    constexpr double half_width = 20.0;
    const double lo = t - half_width;
    const double hi = t + half_width;
    double breaks[3] = {lo, hi, hi};
    int n_seg = 1;
    if (lo < 0.0 && 0.0 < hi) {
        breaks[1] = 0.0;
        breaks[2] = hi;
        n_seg = 2;
    }

    const int n = static_cast<int>(gl.nodes.size());
    Eigen::VectorXd logf(n_seg * n), eta(n_seg * n);
    for (int s = 0; s < n_seg; ++s) {
        const double center = 0.5 * (breaks[s] + breaks[s + 1]);
        const double half = 0.5 * (breaks[s + 1] - breaks[s]);
        for (int i = 0; i < n; ++i) {
            const double e = center + half * gl.nodes[i];
            eta[s * n + i] = e;
            logf[s * n + i] = log_normal_pdf(t - e) + log_prior_density(family, e) +
                              std::log(half * gl.weights[i]);
        }
    }
    const double top = logf.maxCoeff();
    double denom = 0.0, numer = 0.0;
    for (int i = 0; i < n_seg * n; ++i) {
        const double f = std::exp(logf[i] - top);
        denom += f;
        numer += eta[i] * f;
    }
    if (!(denom > 0.0) || !std::isfinite(numer))
        throw NumericError("prior weight: quadrature degenerated at t = " +
                           std::to_string(t));
    return numer / denom;
}

double laplace_weight(double t) {
    // omega(t) = 1 - (c/t) h(t),
    // h = [e^{-ct}Phi(t-c) - e^{ct}Phi(-t-c)] / [e^{-ct}Phi(t-c) + e^{ct}Phi(-t-c)],
    // evaluated as tanh of half the log-ratio so both tails stay finite.
    const double c = kLaplaceRate;
    const double l1 = -c * t + log_normal_cdf(t - c);
    const double l2 = c * t + log_normal_cdf(-t - c);
    const double h = std::tanh(0.5 * (l1 - l2));
    return 1.0 - (c / t) * h;
}

}  // namespace

double log_prior_density(PriorFamily family, double eta) {
    const double mag = std::abs(eta);
    switch (family) {
        case PriorFamily::Laplace:
            return std::log(0.5 * kLaplaceRate) - kLaplaceRate * mag;
        case PriorFamily::Cauchy:
            return -std::log(M_PI * (1.0 + eta * eta));
        case PriorFamily::Pareto:
            return std::log(kParetoC * (1.0 - kParetoA) / (2.0 * kParetoA)) -
                   (1.0 / kParetoA) * std::log1p(kParetoC * mag);
        case PriorFamily::Weibull:
            // Integrable singularity at 0 (b < 1); the quadrature never lands
            // exactly on eta = 0 because |t| is floored away from it.
            return std::log(0.5 * kWeibullB * kWeibullC) +
                   (kWeibullB - 1.0) * std::log(std::max(mag, 1e-290)) -
                   kWeibullC * std::pow(mag, kWeibullB);
    }
    throw ConfigError("unknown prior family");
}

double prior_weight(PriorFamily family, double t) {
    const double tt = floored(t);
    if (family == PriorFamily::Laplace) return laplace_weight(tt);
    return posterior_mean(family, tt) / tt;
}

double prior_weight_quadrature(PriorFamily family, double t) {
    const double tt = floored(t);
    return posterior_mean(family, tt) / tt;
}

PriorEstimate wals_prior_estimate(const Dataset& ds, const OrthoTransform& ot,
                                  const CoreEstimates& ce, PriorFamily family) {
    const double sigma = std::sqrt(ce.sigma2 / static_cast<double>(ds.n()));
    if (!(sigma > 0.0))
        throw NumericError("prior estimate: nonpositive residual scale");
    PriorEstimate out;
    const Eigen::Index k2 = ce.beta2.size();
    out.omega_raw.resize(k2);
    out.w.resize(k2);
    for (Eigen::Index j = 0; j < k2; ++j) {
        const double t = ce.beta2[j] / sigma;
        out.omega_raw[j] = prior_weight(family, t);
        out.w[j] = std::clamp(out.omega_raw[j], 0.0, 1.0);
    }
    out.beta2_shrunk = out.omega_raw.cwiseProduct(ce.beta2);
    out.beta1 = wals_beta1(ce, ot, out.w);
    return out;
}

double scalar_optimal_weight(double r) { return r * r / (r * r + 1.0); }

}  // namespace fwals
