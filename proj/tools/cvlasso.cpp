// cvlasso: command-line front end for the cross-validated Lasso experiments.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "cvlasso/cvlasso.hpp"

using namespace cvlasso;

namespace {

struct CommonFlags {
    int dgp = 1;
    std::size_t n = 100;
    std::size_t p = 40;
    double brt_sigma = 0.0;  // 0: use the DGP noise level
};

void add_experiment_flags(CLI::App* cmd, ExperimentConfig& cfg, CommonFlags& f, bool with_n) {
    cmd->add_option("--dgp", f.dgp, "Data generating process (1: Gaussian noise, 2: uniform noise)")
        ->check(CLI::IsMember({1, 2}));
    if (with_n) cmd->add_option("--n", f.n, "Sample size")->check(CLI::PositiveNumber);
    cmd->add_option("--p", f.p, "Number of covariates (>= 4)")->check(CLI::Range(4, 1 << 20));
    cmd->add_option("--reps", cfg.reps, "Replications")->check(CLI::PositiveNumber);
    cmd->add_option("--k-folds", cfg.K, "Cross-validation folds")->check(CLI::Range(2, 1 << 20));
    cmd->add_option("--seed", cfg.master_seed, "Master seed");
    cmd->add_option("--workers", cfg.workers, "Worker threads")->check(CLI::PositiveNumber);
    cmd->add_option("--grid-C1", cfg.grid_C1, "Largest candidate penalty")->check(CLI::PositiveNumber);
    cmd->add_option("--grid-a", cfg.grid_a, "Geometric ratio of the candidate grid")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--grid-c1", cfg.grid_c1, "Grid floor: keep a^l >= c1/n")->check(CLI::PositiveNumber);
    cmd->add_option("--brt-c", cfg.brt_c, "Plug-in rule constant c (> 1)");
    cmd->add_option("--brt-alpha", cfg.brt_alpha, "Plug-in rule level alpha")->check(CLI::Range(0.0, 1.0));
    cmd->add_option("--brt-sigma", f.brt_sigma, "Noise level for the plug-in rule (default: DGP value)");
    cmd->add_option("--coord-tol", cfg.solver.coord_tol, "Coordinate-change stopping tolerance");
    cmd->add_option("--kkt-tol", cfg.solver.kkt_tol, "KKT certification tolerance");
    cmd->add_option("--max-sweeps", cfg.solver.max_sweeps, "Sweep budget per fit");
}

void finish_config(ExperimentConfig& cfg, const CommonFlags& f) {
    cfg.dgp = parse_dgp(f.dgp);
    cfg.n = f.n;
    cfg.p = f.p;
    if (f.brt_sigma > 0.0) cfg.brt_sigma = f.brt_sigma;
}

void print_summary(const TableSummary& s, const ExperimentConfig& cfg, const PenaltyGrid& grid) {
    std::printf("DGP%d (n, p) = (%zu, %zu), reps = %zu, K = %zu, grid %zu values [%s, %s]\n",
                static_cast<int>(cfg.dgp), cfg.n, cfg.p, s.reps, cfg.K, grid.size(),
                fmt6(grid.lambdas.back()).c_str(), fmt6(grid.lambdas.front()).c_str());
    std::printf("%-14s %12s %12s %12s %12s\n", "estimator", "pred_norm", "pred_norm_sq", "L2", "L1");
    auto row = [](const char* name, const ErrorMeans& m) {
        std::printf("%-14s %12s %12s %12s %12s\n", name, fmt6(m.pred_norm.mean).c_str(),
                    fmt6(m.pred_norm_sq.mean).c_str(), fmt6(m.l2.mean).c_str(), fmt6(m.l1.mean).c_str());
    };
    row("CV-Lasso", s.cv);
    row("lambda-Lasso", s.lambda_min);
    row("P-Lasso", s.plasso);
    std::printf("sparsity brackets:");
    for (std::size_t b = 0; b < s.sparsity.edges.size(); ++b)
        std::printf(" %s=%s", s.sparsity.edges[b].label.c_str(), fmt6(s.sparsity.frequency(b)).c_str());
    std::printf("\nscore-ratio brackets:");
    for (std::size_t b = 0; b < s.ratio.edges.size(); ++b)
        std::printf(" %s=%s", s.ratio.edges[b].label.c_str(), fmt6(s.ratio.frequency(b)).c_str());
    std::printf("\nmean lambda_hat = %s, non-converged fits = %zu, support-bound violations = %zu\n",
                fmt6(s.lambda_hat.mean).c_str(), s.nonconverged_fits, s.support_bound_violations);
}

std::vector<std::pair<std::size_t, std::size_t>> sizes_for(const std::vector<std::size_t>& ns, std::size_t p) {
    std::vector<std::pair<std::size_t, std::size_t>> out;
    for (auto n : ns) out.emplace_back(n, p);
    return out;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Cross-validated Lasso: solver, K-fold penalty selection and Monte-Carlo experiments"};
    app.require_subcommand(1);

    // run
    ExperimentConfig run_cfg;
    CommonFlags run_flags;
    std::string run_out;
    auto* run = app.add_subcommand("run", "Run a replicated experiment and write table CSVs");
    add_experiment_flags(run, run_cfg, run_flags, true);
    run->add_option("--out", run_out, "Output directory");

    // rate-study
    ExperimentConfig rate_cfg;
    CommonFlags rate_flags;
    std::vector<std::size_t> rate_ns = {100, 400};
    std::string rate_out;
    auto* rate = app.add_subcommand("rate-study", "Error scaling in n at fixed p");
    add_experiment_flags(rate, rate_cfg, rate_flags, false);
    rate->add_option("--ns", rate_ns, "Sample sizes")->delimiter(',');
    rate->add_option("--out", rate_out, "Output directory (one subdirectory per n)");

    // audit
    std::uint64_t audit_seed = 1;
    std::size_t audit_two_point = 1000, audit_lipschitz = 500, audit_df_draws = 20000, audit_support = 100;
    std::string audit_out;
    auto* aud = app.add_subcommand("audit", "Run the randomized property corpus for the Lasso identities");
    aud->add_option("--seed", audit_seed, "Corpus seed");
    aud->add_option("--two-point-cases", audit_two_point);
    aud->add_option("--lipschitz-pairs", audit_lipschitz);
    aud->add_option("--df-draws", audit_df_draws)->check(CLI::Range(1000, 100000000));
    aud->add_option("--support-cases", audit_support);
    aud->add_option("--out", audit_out, "CSV report path (default: stdout)");

    // generate
    CommonFlags gen_flags;
    std::uint64_t gen_seed = 1;
    std::string gen_out, gen_truth;
    auto* gen = app.add_subcommand("generate", "Write one simulated dataset as CSV");
    gen->add_option("--dgp", gen_flags.dgp)->check(CLI::IsMember({1, 2}));
    gen->add_option("--n", gen_flags.n)->check(CLI::PositiveNumber);
    gen->add_option("--p", gen_flags.p)->check(CLI::Range(4, 1 << 20));
    gen->add_option("--seed", gen_seed);
    gen->add_option("--out", gen_out, "Dataset CSV path")->required();
    gen->add_option("--truth", gen_truth, "Optional CSV of the true coefficients and realized noise");

    // fit
    std::string fit_data;
    double fit_lambda = 0.0;
    std::size_t fit_k = 5;
    std::uint64_t fit_seed = 1;
    double fit_C1 = 500.0, fit_a = 0.9, fit_c1 = 0.005;
    auto* fit = app.add_subcommand("fit", "Fit a CSV dataset at a given penalty or by cross-validation");
    fit->add_option("--data", fit_data, "Dataset CSV (header y,x1,...,xp)")->required()->check(CLI::ExistingFile);
    fit->add_option("--lambda", fit_lambda, "Penalty; omit to choose by K-fold cross-validation");
    fit->add_option("--k-folds", fit_k)->check(CLI::Range(2, 1 << 20));
    fit->add_option("--seed", fit_seed, "Seed for the fold partition");
    fit->add_option("--grid-C1", fit_C1);
    fit->add_option("--grid-a", fit_a);
    fit->add_option("--grid-c1", fit_c1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*run) {
            finish_config(run_cfg, run_flags);
            std::optional<std::filesystem::path> out;
            if (!run_out.empty()) out = run_out;
            const auto res = run_experiment(run_cfg, out);
            print_summary(res.summary, run_cfg, res.grid);
            if (out) std::printf("outputs written to %s\n", out->string().c_str());
        } else if (*rate) {
            finish_config(rate_cfg, rate_flags);
            std::optional<std::filesystem::path> out;
            if (!rate_out.empty()) out = rate_out;
            const auto study = rate_study(rate_cfg, sizes_for(rate_ns, rate_cfg.p), rate_cfg.reps, out);
            std::printf("%8s %8s %12s %12s %12s\n", "n", "p", "pred_norm", "L2", "L1");
            for (const auto& pt : study.points)
                std::printf("%8zu %8zu %12s %12s %12s\n", pt.n, pt.p, fmt6(pt.summary.cv.pred_norm.mean).c_str(),
                            fmt6(pt.summary.cv.l2.mean).c_str(), fmt6(pt.summary.cv.l1.mean).c_str());
            std::printf("log-log slope in n: L2 %s, prediction norm %s\n", fmt6(study.slope_l2).c_str(),
                        fmt6(study.slope_pred).c_str());
        } else if (*aud) {
            std::vector<audit::AuditRow> rows;
            auto append = [&rows](std::vector<audit::AuditRow> r) { rows.insert(rows.end(), r.begin(), r.end()); };
            append(audit::kkt(audit_seed, 200));
            append(audit::two_point(audit_seed, audit_two_point));
            append(audit::lipschitz(audit_seed, audit_lipschitz));
            append(audit::support_bound(audit_seed, audit_support));
            append(audit::df_identity_rows(audit::df_identity(audit_seed, audit_df_draws), audit_seed));
            if (audit_out.empty()) {
                audit::write_csv(std::cout, rows);
            } else {
                std::ofstream os(audit_out);
                if (!os) throw std::runtime_error("cannot open '" + audit_out + "' for writing");
                audit::write_csv(os, rows);
            }
            std::size_t failed = 0;
            for (const auto& r : rows) failed += !r.pass;
            std::fprintf(stderr, "audit: %zu checks, %zu failed\n", rows.size(), failed);
            return failed == 0 ? 0 : 1;
        } else if (*gen) {
            Rng rng(gen_seed);
            auto [data, truth] = generate({.id = parse_dgp(gen_flags.dgp), .n = gen_flags.n, .p = gen_flags.p}, rng);
            save_csv(gen_out, data);
            if (!gen_truth.empty()) {
                std::ofstream os(gen_truth);
                if (!os) throw std::runtime_error("cannot open '" + gen_truth + "' for writing");
                os << "kind,index,value\n";
                for (std::size_t j = 0; j < truth.beta_true.size(); ++j)
                    os << "beta," << j + 1 << ',' << truth.beta_true[j] << '\n';
                char buf[32];
                for (std::size_t i = 0; i < truth.eps.size(); ++i) {
                    std::snprintf(buf, sizeof buf, "%.17g", truth.eps[i]);
                    os << "eps," << i + 1 << ',' << buf << '\n';
                }
            }
        } else if (*fit) {
            const Dataset data = load_csv(fit_data);
            LassoFit result;
            if (fit_lambda > 0.0) {
                result = fit_lasso(data, fit_lambda);
            } else {
                Rng rng(fit_seed);
                const FoldPlan plan = make_folds(data.n(), fit_k, rng);
                const PenaltyGrid grid = build_grid(fit_C1, fit_a, fit_c1, data.n());
                const CvResult cv = select_lambda(data, plan, grid);
                result = cv.final_fit;
                std::printf("lambda_hat,%s\ncv_criterion,%s\n", fmt6(cv.lambda_hat).c_str(),
                            fmt6(cv.cv_curve[cv.index_hat]).c_str());
            }
            std::printf("lambda,%s\nconverged,%d\nkkt_residual,%s\nobjective,%s\n", fmt6(result.lambda).c_str(),
                        int(result.converged), fmt6(result.kkt_residual).c_str(), fmt6(result.objective).c_str());
            for (std::size_t j = 0; j < result.beta.size(); ++j)
                std::printf("x%zu,%s\n", j + 1, fmt6(result.beta[j]).c_str());
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "cvlasso: %s\n", e.what());
        return 2;
    }
    return 0;
}
