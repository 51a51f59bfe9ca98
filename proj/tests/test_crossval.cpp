#include <algorithm>
#include <set>

#include <gtest/gtest.h>

#include "cvlasso/audit.hpp"
#include "cvlasso/crossval.hpp"
#include "cvlasso/dgp.hpp"
#include "prox_grad_oracle.hpp"

using namespace cvlasso;

namespace {

Dataset random_dataset(std::size_t n, std::size_t p, std::uint64_t seed) {
    Rng rng(seed);
    return audit::random_instance(n, p, rng);
}

LassoFit fixed_fit(CoefVector beta) {
    LassoFit f;
    f.beta = std::move(beta);
    f.converged = true;
    return f;
}

}  // namespace

TEST(MakeFolds, BalancedPartition) {
    Rng rng(1);
    const FoldPlan plan = make_folds(100, 5, rng);
    EXPECT_EQ(plan.fold_sizes(), (std::vector<std::size_t>(5, 20)));

    Rng rng2(2);
    auto sizes = make_folds(7, 3, rng2).fold_sizes();
    std::sort(sizes.begin(), sizes.end());
    EXPECT_EQ(sizes, (std::vector<std::size_t>{2, 2, 3}));
}

TEST(MakeFolds, DeterministicGivenSeed) {
    Rng a(42), b(42), c(43);
    const auto pa = make_folds(53, 5, a), pb = make_folds(53, 5, b), pc = make_folds(53, 5, c);
    EXPECT_EQ(pa.assignment, pb.assignment);
    EXPECT_NE(pa.assignment, pc.assignment);
}

TEST(MakeFolds, PartitionProperty) {
    for (std::uint64_t seed = 0; seed < 200; ++seed) {
        Rng rng(seed);
        const std::size_t K = 2 + rng.below(8);
        const std::size_t n = K + rng.below(60);
        const FoldPlan plan = make_folds(n, K, rng);
        const auto sizes = plan.fold_sizes();
        const auto [mn, mx] = std::minmax_element(sizes.begin(), sizes.end());
        EXPECT_GE(*mn, 1u);
        EXPECT_LE(*mx - *mn, 1u);
        std::set<std::size_t> seen;
        for (std::size_t k = 0; k < K; ++k) {
            const auto in = plan.held_out(k), out = plan.complement(k);
            EXPECT_EQ(in.size() + out.size(), n);
            for (auto i : in) EXPECT_TRUE(seen.insert(i).second);
        }
        EXPECT_EQ(seen.size(), n);
    }
}

TEST(MakeFolds, ErrorsOnTooFewObservations) {
    Rng rng(0);
    EXPECT_THROW(make_folds(3, 5, rng), std::invalid_argument);
    EXPECT_THROW(make_folds(10, 1, rng), std::invalid_argument);
}

TEST(FoldFit, NullAboveComplementLambdaMax) {
    const Dataset d = random_dataset(20, 4, 3);
    Rng rng(4);
    const FoldPlan plan = make_folds(20, 2, rng);
    for (std::size_t k = 0; k < 2; ++k) {
        const double lmax = lambda_max(d.subset(plan.complement(k)));
        EXPECT_EQ(count_nonzero(fold_fit(d, plan, k, lmax * 1.01).beta), 0u);
    }
}

TEST(FoldFit, EqualsFitOnExtractedComplement) {
    const Dataset d = random_dataset(30, 6, 5);
    Rng rng(6);
    const FoldPlan plan = make_folds(30, 3, rng);
    const double lam = 0.1 * lambda_max(d);
    for (std::size_t k = 0; k < 3; ++k) {
        const LassoFit a = fold_fit(d, plan, k, lam);
        const LassoFit b = fit_lasso(d.subset(plan.complement(k)), lam);
        EXPECT_EQ(a.beta, b.beta);
    }
    EXPECT_THROW(fold_fit(d, plan, 3, lam), std::invalid_argument);
}

TEST(FoldFit, MatchesOracleOnComplement) {
    const Dataset d = random_dataset(30, 5, 7);
    Rng rng(8);
    const FoldPlan plan = make_folds(30, 5, rng);
    const double lam = 0.15 * lambda_max(d);
    for (std::size_t k = 0; k < 5; ++k) {
        const auto oracle = cvlasso::testing::prox_grad_lasso(d.subset(plan.complement(k)), lam, 1e-11);
        const LassoFit f = fold_fit(d, plan, k, lam);
        for (std::size_t j = 0; j < d.p(); ++j) EXPECT_NEAR(f.beta[j], oracle.beta[j], 1e-7);
    }
}

TEST(CvCriterion, NullFitsGiveSumOfSquares) {
    const Dataset d = random_dataset(12, 3, 9);
    Rng rng(10);
    const FoldPlan plan = make_folds(12, 3, rng);
    std::vector<LassoFit> fits(3, fixed_fit(CoefVector(3, 0.0)));
    EXPECT_NEAR(cv_criterion(d, plan, fits), dot(d.y, d.y), 1e-12);
}

TEST(CvCriterion, PerfectFitsGiveZero) {
    Rng rng(11);
    Matrix x(10, 3);
    for (std::size_t i = 0; i < 10; ++i)
        for (std::size_t j = 0; j < 3; ++j) x(i, j) = rng.normal();
    const CoefVector beta = {1.0, 0.0, -2.0};
    const Dataset d(x, multiply(x, beta));
    const FoldPlan plan = make_folds(10, 2, rng);
    std::vector<LassoFit> fits(2, fixed_fit(beta));
    EXPECT_NEAR(cv_criterion(d, plan, fits), 0.0, 1e-24);
}

TEST(CvCriterion, HandComputedToy) {
    Matrix x(4, 1);
    for (std::size_t i = 0; i < 4; ++i) x(i, 0) = double(i + 1);
    const Dataset d(x, Vector{1.0, 2.0, 2.0, 5.0});
    const FoldPlan plan{.assignment = {0, 1, 0, 1}, .K = 2};
    // fold 0 holds out {1,3}: (1-0.5)² + (2-1.5)² = 0.5; fold 1 holds out {2,4}: (2-2)² + (5-4)² = 1
    const std::vector<LassoFit> fits = {fixed_fit({0.5}), fixed_fit({1.0})};
    EXPECT_DOUBLE_EQ(cv_criterion(d, plan, fits), 1.5);
}

TEST(SelectLambda, SingletonGrid) {
    const Dataset d = random_dataset(25, 5, 12);
    Rng rng(13);
    const FoldPlan plan = make_folds(25, 5, rng);
    PenaltyGrid grid;
    grid.lambdas = {0.37};
    const CvResult r = select_lambda(d, plan, grid);
    EXPECT_EQ(r.lambda_hat, 0.37);
    EXPECT_EQ(r.final_fit.lambda, 0.37);
    EXPECT_EQ(r.cv_curve.size(), 1u);
    EXPECT_EQ(r.fold_fits_at_hat.size(), 5u);
}

TEST(SelectLambda, CurveAndSelectionInvariants) {
    for (std::uint64_t seed = 0; seed < 5; ++seed) {
        Rng rng(200 + seed);
        auto [d, truth] = generate({.id = DgpId::Gaussian, .n = 60, .p = 12}, rng);
        const FoldPlan plan = make_folds(60, 5, rng);
        const PenaltyGrid grid = build_grid(50.0, 0.85, 0.005, 60);
        const CvResult r = select_lambda(d, plan, grid);
        ASSERT_EQ(r.cv_curve.size(), grid.size());
        for (std::size_t l = 0; l < grid.size(); ++l) {
            EXPECT_GE(r.cv_curve[l], 0.0);
            EXPECT_FALSE(r.excluded[l]);
            EXPECT_LE(r.cv_curve[r.index_hat], r.cv_curve[l]);
            if (l < r.index_hat) {
                EXPECT_LT(r.cv_curve[r.index_hat], r.cv_curve[l]);  // ties → largest λ
            }
        }
        EXPECT_EQ(r.lambda_hat, grid.lambdas[r.index_hat]);
        EXPECT_EQ(r.final_fit.lambda, r.lambda_hat);
        EXPECT_TRUE(r.final_fit.converged);

        // the precomputed-path shortcut gives the same refit within solver tolerance
        const auto path = fit_path(d, grid.lambdas);
        const CvResult r2 = select_lambda(d, plan, grid, {}, &path);
        EXPECT_EQ(r2.index_hat, r.index_hat);
        for (std::size_t j = 0; j < d.p(); ++j) EXPECT_NEAR(r2.final_fit.beta[j], r.final_fit.beta[j], 1e-7);

        // curve entry at λ̂ equals the criterion of the stored fold fits
        EXPECT_NEAR(cv_criterion(d, plan, r.fold_fits_at_hat), r.cv_curve[r.index_hat], 1e-9);
    }
}

TEST(SelectLambda, TiesGoToLargestPenalty) {
    const Dataset d = random_dataset(20, 4, 14);
    Rng rng(15);
    const FoldPlan plan = make_folds(20, 4, rng);
    PenaltyGrid grid;
    const double lmax = 1e3;  // far above every fold's null penalty: all fits zero, all tied
    grid.lambdas = {4 * lmax, 2 * lmax, lmax};
    const CvResult r = select_lambda(d, plan, grid);
    EXPECT_EQ(r.index_hat, 0u);
}

TEST(SelectLambda, FoldLabelPermutationInvariance) {
    Rng rng(16);
    auto [d, truth] = generate({.id = DgpId::Uniform, .n = 40, .p = 8}, rng);
    const FoldPlan plan = make_folds(40, 4, rng);
    FoldPlan relabeled = plan;
    const std::vector<std::size_t> perm = {2, 0, 3, 1};
    for (auto& f : relabeled.assignment) f = perm[f];
    const PenaltyGrid grid = build_grid(20.0, 0.8, 0.005, 40);
    const CvResult a = select_lambda(d, plan, grid), b = select_lambda(d, relabeled, grid);
    EXPECT_EQ(a.index_hat, b.index_hat);
    EXPECT_EQ(a.cv_curve, b.cv_curve);
}

TEST(SelectLambda, ReorderingObservationsWithinFolds) {
    Rng rng(17);
    auto [d, truth] = generate({.id = DgpId::Gaussian, .n = 30, .p = 6}, rng);
    const FoldPlan plan = make_folds(30, 3, rng);
    // permute observations so that each lands on another position of the same fold
    std::vector<std::size_t> order(30);
    for (std::size_t k = 0; k < 3; ++k) {
        auto idx = plan.held_out(k);
        auto rotated = idx;
        std::rotate(rotated.begin(), rotated.begin() + 1, rotated.end());
        for (std::size_t t = 0; t < idx.size(); ++t) order[idx[t]] = rotated[t];
    }
    const Dataset shuffled = d.subset(order);
    const PenaltyGrid grid = build_grid(20.0, 0.8, 0.005, 30);
    const CvResult a = select_lambda(d, plan, grid), b = select_lambda(shuffled, plan, grid);
    EXPECT_EQ(a.index_hat, b.index_hat);
    for (std::size_t l = 0; l < grid.size(); ++l)
        EXPECT_NEAR(a.cv_curve[l], b.cv_curve[l], 1e-8 * (1.0 + a.cv_curve[l]));
    for (std::size_t j = 0; j < d.p(); ++j) EXPECT_NEAR(a.final_fit.beta[j], b.final_fit.beta[j], 1e-7);
}

TEST(SelectLambda, PureNoisePrefersLargePenalties) {
    const PenaltyGrid grid = build_grid(500.0, 0.9, 0.005, 100);
    int null_picks = 0;
    double mean_l0 = 0.0;
    const int seeds = 40;
    for (int s = 0; s < seeds; ++s) {
        Rng rng = Rng::child(777, s);
        const Matrix x = sample_design(100, 10, rng);
        Vector y = sample_noise(DgpId::Gaussian, 100, rng);
        const Dataset d(x, y);
        const FoldPlan plan = make_folds(100, 5, rng);
        const CvResult r = select_lambda(d, plan, grid);
        if (r.lambda_hat >= lambda_max(d)) ++null_picks;
        mean_l0 += double(count_nonzero(r.final_fit.beta)) / seeds;
    }
    EXPECT_GE(null_picks, seeds / 2);
    EXPECT_LE(mean_l0, 3.0);
    std::printf("null picks %d/%d, mean l0 %.2f\n", null_picks, seeds, mean_l0);
}

TEST(SelectLambda, NonConvergedEntriesAreExcluded) {
    const Dataset d = random_dataset(30, 10, 18);
    Rng rng(19);
    const FoldPlan plan = make_folds(30, 3, rng);
    const PenaltyGrid grid = build_grid(10.0, 0.5, 0.05, 30);
    SolverSettings s;
    s.max_sweeps = 2;
    try {
        const CvResult r = select_lambda(d, plan, grid, s);
        EXPECT_FALSE(r.excluded[r.index_hat]);
        EXPECT_TRUE(std::any_of(r.excluded.begin(), r.excluded.end(), [](bool b) { return b; }));
    } catch (const std::runtime_error&) {
        SUCCEED();  // every entry excluded
    }
}
