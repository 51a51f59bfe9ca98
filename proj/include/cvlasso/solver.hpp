#pragma once

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <vector>

#include "core.hpp"

namespace cvlasso {

struct SolverSettings {
    double coord_tol = 1e-8;         ///< stop when no coordinate moves more than this in a sweep
    std::size_t max_sweeps = 100000;
    double kkt_tol = 1e-6;

    void validate() const {
        require(coord_tol > 0.0, "SolverSettings: coord_tol must be positive");
        require(kkt_tol > 0.0, "SolverSettings: kkt_tol must be positive");
        require(max_sweeps >= 1, "SolverSettings: max_sweeps must be at least 1");
    }
};

/// Solution of min_b n⁻¹‖y − xb‖² + λ‖b‖₁.
struct LassoFit {
    CoefVector beta;
    double lambda = 0.0;
    std::size_t iterations = 0;  ///< coordinate sweeps performed (full or active-set)
    double kkt_residual = 0.0;
    double objective = 0.0;
    bool converged = false;  ///< false: `beta` is the best iterate after max_sweeps
};

/// S(z, t) = sign(z)·max(|z| − t, 0).
inline double soft_threshold(double z, double t) noexcept {
    if (z > t) return z - t;
    if (z < -t) return z + t;
    return 0.0;
}

/**
 * Exact minimizer over one coordinate of the Lasso objective.
 *
 * `partial_residual_mean` is m = n⁻¹Σ x_ij r_i with r the residual excluding
 * coordinate j; `col_mean_square` is q = n⁻¹Σ x_ij². The squared loss carries
 * weight 1/n and the penalty weight λ, so the threshold is λ/2.
 */
inline double coordinate_update(double partial_residual_mean, double col_mean_square, double lambda) {
    require(col_mean_square > 0.0, "coordinate_update: col_mean_square must be positive");
    return soft_threshold(partial_residual_mean, 0.5 * lambda) / col_mean_square;
}

inline double lasso_objective(const Dataset& data, std::span<const double> beta, double lambda) {
    const Vector fit = multiply(data.x, beta);
    double rss = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const double r = data.y[i] - fit[i];
        rss += r * r;
    }
    return rss / static_cast<double>(data.n()) + lambda * coef_norms(beta).l1;
}

/// g_j = (2/n) Σ (y_i − x_i'β) x_ij.
inline Vector score_vector(const Dataset& data, std::span<const double> beta) {
    const Vector fit = multiply(data.x, beta);
    Vector resid(data.n());
    for (std::size_t i = 0; i < data.n(); ++i) resid[i] = data.y[i] - fit[i];
    Vector g(data.p());
    const double scale = 2.0 / static_cast<double>(data.n());
    for (std::size_t j = 0; j < data.p(); ++j) g[j] = scale * dot(data.x.col(j), resid);
    return g;
}

/// Largest violation of the Lasso optimality conditions at β.
inline double kkt_residual(const Dataset& data, std::span<const double> beta, double lambda) {
    require(beta.size() == data.p(), "kkt_residual: beta length does not match p");
    const Vector g = score_vector(data, beta);
    double worst = 0.0;
    for (std::size_t j = 0; j < data.p(); ++j) {
        double v;
        if (beta[j] > 0.0)
            v = std::abs(g[j] - lambda);
        else if (beta[j] < 0.0)
            v = std::abs(g[j] + lambda);
        else
            v = std::max(std::abs(g[j]) - lambda, 0.0);
        worst = std::max(worst, v);
    }
    return worst;
}

/// Smallest λ whose Lasso solution is exactly zero: 2·max_j |n⁻¹Σ x_ij y_i|.
inline double lambda_max(const Dataset& data) {
    double best = 0.0;
    const double inv_n = 1.0 / static_cast<double>(data.n());
    for (std::size_t j = 0; j < data.p(); ++j)
        best = std::max(best, std::abs(dot(data.x.col(j), data.y) * inv_n));
    return 2.0 * best;
}

namespace detail {

// Cyclic coordinate descent with glmnet-style active-set cycling: a full
// sweep, then repeated sweeps over the nonzero coordinates until they settle,
// then another full sweep. Converged when a full sweep moves nothing by more
// than coord_tol and the KKT residual is within kkt_tol.
class CoordinateDescent {
public:
    explicit CoordinateDescent(const Dataset& data) : data_(data), col_ms_(data.p()) {
        const double inv_n = 1.0 / static_cast<double>(data.n());
        for (std::size_t j = 0; j < data.p(); ++j) {
            auto c = data.x.col(j);
            col_ms_[j] = dot(c, c) * inv_n;
        }
    }

    LassoFit fit(double lambda, const CoefVector* warm, const SolverSettings& settings,
                 std::vector<double>* sweep_objectives = nullptr) const {
        require(lambda > 0.0, "fit_lasso: lambda must be positive");
        settings.validate();
        const std::size_t n = data_.n();
        const std::size_t p = data_.p();

        CoefVector beta(p, 0.0);
        if (warm) {
            require(warm->size() == p, "fit_lasso: warm start length does not match p");
            beta = *warm;
        }
        for (std::size_t j = 0; j < p; ++j)
            if (col_ms_[j] == 0.0) beta[j] = 0.0;

        Vector resid = data_.y;
        {
            const Vector f = multiply(data_.x, beta);
            for (std::size_t i = 0; i < n; ++i) resid[i] -= f[i];
        }
        if (sweep_objectives) sweep_objectives->push_back(lasso_objective(data_, beta, lambda));

        const double inv_n = 1.0 / static_cast<double>(n);
        auto update = [&](std::size_t j) -> double {
            const double q = col_ms_[j];
            if (q == 0.0) return 0.0;
            auto c = data_.x.col(j);
            const double old = beta[j];
            const double m = dot(c, resid) * inv_n + q * old;
            const double nb = coordinate_update(m, q, lambda);
            const double delta = nb - old;
            if (delta != 0.0) {
                for (std::size_t i = 0; i < n; ++i) resid[i] -= delta * c[i];
                beta[j] = nb;
            }
            return std::abs(delta);
        };

        LassoFit out;
        out.lambda = lambda;
        double tol = settings.coord_tol;
        std::vector<std::size_t> active;
        std::size_t sweeps = 0;

        while (sweeps < settings.max_sweeps) {
            double full_change = 0.0;
            for (std::size_t j = 0; j < p; ++j) full_change = std::max(full_change, update(j));
            ++sweeps;
            if (sweep_objectives) sweep_objectives->push_back(lasso_objective(data_, beta, lambda));

            if (full_change <= tol) {
                const double kkt = kkt_residual(data_, beta, lambda);
                if (kkt <= settings.kkt_tol) {
                    out.converged = true;
                    break;
                }
                // Coordinates have stalled short of certification: tighten and keep going.
                tol *= 0.1;
                resync(beta, resid);
                continue;
            }

            active.clear();
            for (std::size_t j = 0; j < p; ++j)
                if (beta[j] != 0.0) active.push_back(j);
            while (sweeps < settings.max_sweeps) {
                double change = 0.0;
                for (std::size_t j : active) change = std::max(change, update(j));
                ++sweeps;
                if (sweep_objectives)
                    sweep_objectives->push_back(lasso_objective(data_, beta, lambda));
                if (change <= tol) break;
            }
        }

        out.beta = std::move(beta);
        out.iterations = sweeps;
        out.kkt_residual = kkt_residual(data_, out.beta, lambda);
        out.objective = lasso_objective(data_, out.beta, lambda);
        if (out.kkt_residual > settings.kkt_tol) out.converged = false;
        return out;
    }

private:
    void resync(std::span<const double> beta, Vector& resid) const {
        const Vector f = multiply(data_.x, beta);
        for (std::size_t i = 0; i < data_.n(); ++i) resid[i] = data_.y[i] - f[i];
    }

    const Dataset& data_;
    Vector col_ms_;
};

}  // namespace detail

/**
 * Lasso fit at a single penalty by cyclic coordinate descent.
 *
 * Columns that are identically zero keep coefficient 0. If the sweep budget
 * runs out, the returned fit has `converged == false` and carries the last
 * iterate.
 */
inline LassoFit fit_lasso(const Dataset& data, double lambda,
                          const std::optional<CoefVector>& warm_start = std::nullopt,
                          const SolverSettings& settings = {},
                          std::vector<double>* sweep_objectives = nullptr) {
    return detail::CoordinateDescent(data).fit(lambda, warm_start ? &*warm_start : nullptr,
                                               settings, sweep_objectives);
}

/// Fits along a descending penalty sequence, each warm-started from the previous.
inline std::vector<LassoFit> fit_path(const Dataset& data, std::span<const double> lambdas,
                                      const SolverSettings& settings = {}) {
    require(!lambdas.empty(), "fit_path: empty penalty sequence");
    for (std::size_t l = 1; l < lambdas.size(); ++l)
        require(lambdas[l] < lambdas[l - 1], "fit_path: penalties must be strictly descending");
    detail::CoordinateDescent cd(data);
    std::vector<LassoFit> path;
    path.reserve(lambdas.size());
    for (std::size_t l = 0; l < lambdas.size(); ++l)
        path.push_back(cd.fit(lambdas[l], l == 0 ? nullptr : &path.back().beta, settings));
    return path;
}

}  // namespace cvlasso
