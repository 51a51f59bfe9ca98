#pragma once

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "core.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace cvlasso {

/// Error of β̂ against the truth in three norms, plus the sparsity of β̂.
struct ErrorReport {
    double pred_norm = 0.0;     ///< ‖β̂ − β‖ in the in-sample prediction norm
    double pred_norm_sq = 0.0;  ///< its square
    double l2 = 0.0;
    double l1 = 0.0;
    std::size_t l0 = 0;         ///< ‖β̂‖₀
};

inline ErrorReport estimation_errors(std::span<const double> beta_hat, const TruthBundle& truth,
                                     const Dataset& data) {
    require(beta_hat.size() == truth.beta_true.size() && beta_hat.size() == data.p(),
            "estimation_errors: dimension mismatch");
    Vector delta(beta_hat.size());
    for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = beta_hat[j] - truth.beta_true[j];
    const auto norms = coef_norms(delta);
    ErrorReport r;
    r.pred_norm = prediction_norm(data.x, delta);
    r.pred_norm_sq = r.pred_norm * r.pred_norm;
    r.l2 = norms.l2;
    r.l1 = norms.l1;
    r.l0 = count_nonzero(beta_hat);
    return r;
}

inline ErrorReport estimation_errors(const LassoFit& fit, const TruthBundle& truth,
                                     const Dataset& data) {
    return estimation_errors(fit.beta, truth, data);
}

// ---------------------------------------------------------------------------
// Brackets

struct Bracket {
    double lo;
    double hi;  ///< inclusive for sparsity brackets, exclusive for ratio brackets
    std::string label;
};

/// [0,5], [6,10], ..., [31,35], [36,p].
inline std::vector<Bracket> sparsity_brackets(std::size_t p) {
    std::vector<Bracket> b;
    b.push_back({0, 5, "[0,5]"});
    for (int lo = 6; lo <= 31; lo += 5)
        b.push_back({double(lo), double(lo + 4),
                     "[" + std::to_string(lo) + "," + std::to_string(lo + 4) + "]"});
    b.push_back({36, double(p), "[36,p]"});
    return b;
}

inline std::size_t sparsity_bracket(std::size_t l0, std::size_t p) {
    require(l0 <= p, "sparsity_bracket: l0 exceeds p");
    if (l0 <= 5) return 0;
    return std::min<std::size_t>(7, (l0 - 1) / 5);
}

/// [0,0.5), [0.5,1), ..., [2.5,3), [3,∞).
inline std::vector<Bracket> ratio_brackets() {
    return {{0.0, 0.5, "[0,0.5)"}, {0.5, 1.0, "[0.5,1)"}, {1.0, 1.5, "[1,1.5)"},
            {1.5, 2.0, "[1.5,2)"}, {2.0, 2.5, "[2,2.5)"}, {2.5, 3.0, "[2.5,3)"},
            {3.0, std::numeric_limits<double>::infinity(), "[3,inf)"}};
}

inline std::size_t ratio_bracket(double ratio) {
    require(ratio >= 0.0, "ratio_bracket: negative ratio");
    return std::min<std::size_t>(6, static_cast<std::size_t>(std::floor(ratio / 0.5)));
}

struct BracketHistogram {
    std::vector<Bracket> edges;
    std::vector<std::size_t> counts;
    std::size_t total = 0;

    explicit BracketHistogram(std::vector<Bracket> e) : edges(std::move(e)), counts(edges.size(), 0) {}

    void add(std::size_t bracket) {
        ++counts.at(bracket);
        ++total;
    }

    double frequency(std::size_t bracket) const {
        return total == 0 ? 0.0 : static_cast<double>(counts.at(bracket)) / static_cast<double>(total);
    }
};

/// max_j |n⁻¹ Σ x_ij ε_i| / λ̂.
inline double max_score_ratio(const Matrix& x, std::span<const double> eps, double lambda_hat) {
    require(lambda_hat > 0.0, "max_score_ratio: lambda_hat must be positive");
    require(eps.size() == x.rows(), "max_score_ratio: noise length does not match n");
    double best = 0.0;
    for (std::size_t j = 0; j < x.cols(); ++j)
        best = std::max(best, std::abs(dot(x.col(j), eps)) / static_cast<double>(x.rows()));
    return best / lambda_hat;
}

// ---------------------------------------------------------------------------
// Structural identities of the Lasso

/**
 * RHS − LHS of the two-point inequality
 *   ‖β̂ − b‖²_{2,n} ≤ Q(b) + λ‖b‖₁ − Q(β̂) − λ‖β̂‖₁,   Q(b) = n⁻¹Σ(y_i − x_i'b)².
 * Nonnegative at an exact optimum; see two_point_tolerance for inexact fits.
 */
inline double check_two_point(const Dataset& data, const LassoFit& fit, std::span<const double> probe) {
    require(probe.size() == data.p() && fit.beta.size() == data.p(),
            "check_two_point: dimension mismatch");
    Vector delta(data.p());
    for (std::size_t j = 0; j < data.p(); ++j) delta[j] = fit.beta[j] - probe[j];
    const double pn = prediction_norm(data.x, delta);
    const double rhs = lasso_objective(data, probe, fit.lambda) - lasso_objective(data, fit.beta, fit.lambda);
    return rhs - pn * pn;
}

/// A fit with KKT residual r can violate the inequality by at most r·‖β̂ − b‖₁.
inline double two_point_tolerance(const LassoFit& fit, std::span<const double> probe) {
    double l1 = 0.0;
    for (std::size_t j = 0; j < probe.size(); ++j) l1 += std::abs(fit.beta[j] - probe[j]);
    return std::max(fit.kkt_residual, 1e-12) * (l1 + 1.0);
}

/**
 * ‖fitted_b − fitted_a‖ / ‖ε_b − ε_a‖ for responses y = x·β + ε at a fixed
 * design. The fitted-value map is 1-Lipschitz, so this is at most one up to
 * solver tolerance. Returns 0 when ε_a = ε_b.
 */
inline double check_lipschitz(const Matrix& x, double lambda, std::span<const double> eps_a,
                              std::span<const double> eps_b, std::span<const double> beta,
                              const SolverSettings& settings = {}) {
    require(eps_a.size() == x.rows() && eps_b.size() == x.rows(), "check_lipschitz: noise length");
    double dn = 0.0;
    for (std::size_t i = 0; i < eps_a.size(); ++i) dn += (eps_b[i] - eps_a[i]) * (eps_b[i] - eps_a[i]);
    if (dn == 0.0) return 0.0;

    const Vector signal = multiply(x, beta);
    auto fitted = [&](std::span<const double> eps) {
        Vector y(signal);
        for (std::size_t i = 0; i < y.size(); ++i) y[i] += eps[i];
        const Dataset d(x, std::move(y));
        return multiply(x, fit_lasso(d, lambda, std::nullopt, settings).beta);
    };
    const Vector fa = fitted(eps_a);
    const Vector fb = fitted(eps_b);
    double fn = 0.0;
    for (std::size_t i = 0; i < fa.size(); ++i) fn += (fb[i] - fa[i]) * (fb[i] - fa[i]);
    return std::sqrt(fn / dn);
}

inline double check_lipschitz(const Matrix& x, double lambda, std::span<const double> eps_a,
                              std::span<const double> eps_b, const SolverSettings& settings = {}) {
    const Vector zero(x.cols(), 0.0);
    return check_lipschitz(x, lambda, eps_a, eps_b, zero, settings);
}

struct DfIdentityResult {
    double mean_l0 = 0.0;   ///< Monte-Carlo E‖β̂‖₀
    double mean_rhs = 0.0;  ///< Monte-Carlo σ⁻² Σ_i E[ε_i x_i'(β̂ − β)]
    double se = 0.0;        ///< standard error of mean_l0 − mean_rhs
    std::size_t draws = 0;
};

/**
 * Both sides of the degrees-of-freedom identity
 *   E[‖β̂(λ)‖₀ | X] = σ⁻² Σ_i E[ε_i X_i'(β̂(λ) − β) | X]
 * estimated over fresh N(0, σ²) noise at a fixed design.
 */
inline DfIdentityResult df_identity_mc(const Matrix& x, double lambda, std::span<const double> beta,
                                       double sigma, std::size_t draws, Rng& rng,
                                       const SolverSettings& settings = {}) {
    require(sigma > 0.0, "df_identity_mc: sigma must be positive");
    require(draws >= 1000, "df_identity_mc: need at least 1000 draws");
    require(beta.size() == x.cols(), "df_identity_mc: beta length does not match p");
    const std::size_t n = x.rows();
    const Vector signal = multiply(x, beta);
    const double inv_var = 1.0 / (sigma * sigma);

    double sum_l0 = 0.0, sum_rhs = 0.0, sum_d = 0.0, sum_d2 = 0.0;
    Vector eps(n), y(n), delta(x.cols());
    for (std::size_t r = 0; r < draws; ++r) {
        for (std::size_t i = 0; i < n; ++i) {
            eps[i] = sigma * rng.normal();
            y[i] = signal[i] + eps[i];
        }
        const Dataset d(x, y);
        const LassoFit fit = fit_lasso(d, lambda, std::nullopt, settings);
        for (std::size_t j = 0; j < delta.size(); ++j) delta[j] = fit.beta[j] - beta[j];
        const Vector xd = multiply(x, delta);
        const double rhs = inv_var * dot(eps, xd);
        const double l0 = static_cast<double>(count_nonzero(fit.beta));
        sum_l0 += l0;
        sum_rhs += rhs;
        sum_d += l0 - rhs;
        sum_d2 += (l0 - rhs) * (l0 - rhs);
    }
    const double m = static_cast<double>(draws);
    DfIdentityResult out;
    out.draws = draws;
    out.mean_l0 = sum_l0 / m;
    out.mean_rhs = sum_rhs / m;
    const double mean_d = sum_d / m;
    const double var_d = std::max(0.0, (sum_d2 - m * mean_d * mean_d) / (m - 1.0));
    out.se = std::sqrt(var_d / m);
    return out;
}

}  // namespace cvlasso
