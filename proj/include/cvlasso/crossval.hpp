#pragma once

#include <numeric>
#include <optional>
#include <span>
#include <stdexcept>
#include <vector>

#include "core.hpp"
#include "penalty.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace cvlasso {

/// Partition of observation indices 0..n-1 into K folds (fold labels 0..K-1).
struct FoldPlan {
    std::vector<std::size_t> assignment;
    std::size_t K = 0;

    std::size_t n() const noexcept { return assignment.size(); }

    std::vector<std::size_t> held_out(std::size_t k) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] == k) idx.push_back(i);
        return idx;
    }

    std::vector<std::size_t> complement(std::size_t k) const {
        std::vector<std::size_t> idx;
        for (std::size_t i = 0; i < assignment.size(); ++i)
            if (assignment[i] != k) idx.push_back(i);
        return idx;
    }

    std::vector<std::size_t> fold_sizes() const {
        std::vector<std::size_t> sizes(K, 0);
        for (std::size_t f : assignment) ++sizes.at(f);
        return sizes;
    }
};

/// Uniformly random balanced partition: fold sizes differ by at most one.
inline FoldPlan make_folds(std::size_t n, std::size_t K, Rng& rng) {
    require(K >= 2, "make_folds: need K >= 2");
    if (n < K) throw std::invalid_argument("make_folds: fewer observations than folds");
    std::vector<std::size_t> perm(n);
    std::iota(perm.begin(), perm.end(), std::size_t{0});
    for (std::size_t i = n - 1; i > 0; --i) std::swap(perm[i], perm[rng.below(i + 1)]);
    FoldPlan plan{.assignment = std::vector<std::size_t>(n), .K = K};
    for (std::size_t pos = 0; pos < n; ++pos) plan.assignment[perm[pos]] = pos % K;
    return plan;
}

/// Lasso on every observation outside fold k, normalized by n − n_k.
inline LassoFit fold_fit(const Dataset& data, const FoldPlan& plan, std::size_t k, double lambda,
                         const std::optional<CoefVector>& warm = std::nullopt,
                         const SolverSettings& settings = {}) {
    require(k < plan.K, "fold_fit: fold index out of range");
    require(plan.n() == data.n(), "fold_fit: plan does not match dataset");
    const auto idx = plan.complement(k);
    return fit_lasso(data.subset(idx), lambda, warm, settings);
}

/// Σ_k Σ_{i∈I_k} (y_i − x_i'β̂_{-k})²; held-out sum of squares, unnormalized.
inline double cv_criterion(const Dataset& data, const FoldPlan& plan,
                           std::span<const LassoFit> fold_fits) {
    require(fold_fits.size() == plan.K, "cv_criterion: need one fit per fold");
    require(plan.n() == data.n(), "cv_criterion: plan does not match dataset");
    double total = 0.0;
    for (std::size_t i = 0; i < data.n(); ++i) {
        const auto& beta = fold_fits[plan.assignment[i]].beta;
        require(beta.size() == data.p(), "cv_criterion: coefficient length does not match p");
        double pred = 0.0;
        for (std::size_t j = 0; j < data.p(); ++j)
            if (beta[j] != 0.0) pred += data.x(i, j) * beta[j];
        const double r = data.y[i] - pred;
        total += r * r;
    }
    return total;
}

struct CvResult {
    double lambda_hat = 0.0;
    std::size_t index_hat = 0;  ///< position of lambda_hat in the grid
    Vector cv_curve;            ///< criterion per grid entry, grid order
    std::vector<bool> excluded; ///< entries with a non-converged fold fit
    std::vector<LassoFit> fold_fits_at_hat;
    LassoFit final_fit;
};

/**
 * K-fold cross-validated penalty choice and full-sample refit.
 *
 * Each fold runs its own warm-started chain down the grid. Entries where any
 * fold fit failed to converge are skipped in the minimization. Ties go to the
 * largest penalty. `full_path`, when given, must be fit_path(data, grid) and
 * supplies the refit instead of recomputing it.
 */
inline CvResult select_lambda(const Dataset& data, const FoldPlan& plan, const PenaltyGrid& grid,
                              const SolverSettings& settings = {},
                              const std::vector<LassoFit>* full_path = nullptr) {
    require(grid.size() >= 1, "select_lambda: empty grid");
    require(plan.n() == data.n(), "select_lambda: plan does not match dataset");
    const std::size_t L = grid.size();

    CvResult res;
    res.cv_curve.assign(L, 0.0);
    res.excluded.assign(L, false);

    std::vector<std::vector<LassoFit>> fold_paths(plan.K);
    for (std::size_t k = 0; k < plan.K; ++k) {
        const Dataset train = data.subset(plan.complement(k));
        fold_paths[k] = fit_path(train, grid.lambdas, settings);
    }

    // Held-out residuals accumulated observation by observation in index order,
    // so the value does not depend on how folds are labelled or scheduled.
    for (std::size_t l = 0; l < L; ++l) {
        std::vector<LassoFit> at_l;
        at_l.reserve(plan.K);
        for (std::size_t k = 0; k < plan.K; ++k) {
            if (!fold_paths[k][l].converged) res.excluded[l] = true;
            at_l.push_back(fold_paths[k][l]);
        }
        res.cv_curve[l] = cv_criterion(data, plan, at_l);
    }

    std::optional<std::size_t> best;
    for (std::size_t l = 0; l < L; ++l) {
        if (res.excluded[l]) continue;
        if (!best || res.cv_curve[l] < res.cv_curve[*best]) best = l;
    }
    if (!best) throw std::runtime_error("select_lambda: no grid entry converged on every fold");

    res.index_hat = *best;
    res.lambda_hat = grid.lambdas[*best];
    for (std::size_t k = 0; k < plan.K; ++k)
        res.fold_fits_at_hat.push_back(std::move(fold_paths[k][*best]));

    if (full_path) {
        require(full_path->size() == L, "select_lambda: full path does not match grid");
        res.final_fit = (*full_path)[*best];
    } else {
        auto prefix = fit_path(data, std::span<const double>(grid.lambdas).first(*best + 1), settings);
        res.final_fit = std::move(prefix.back());
    }
    return res;
}

}  // namespace cvlasso
