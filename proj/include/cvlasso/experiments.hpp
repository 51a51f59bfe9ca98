#pragma once

#include <algorithm>
#include <array>
#include <atomic>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "json.hpp"

#include "core.hpp"
#include "crossval.hpp"
#include "dgp.hpp"
#include "diagnostics.hpp"
#include "penalty.hpp"
#include "rng.hpp"
#include "solver.hpp"

namespace cvlasso {

struct ExperimentConfig {
    DgpId dgp = DgpId::Gaussian;
    std::size_t n = 100;
    std::size_t p = 40;
    std::size_t reps = 200;
    std::size_t K = 5;
    double grid_C1 = 500.0;
    double grid_a = 0.9;
    double grid_c1 = 0.005;
    double brt_c = 1.1;
    double brt_alpha = 0.1;
    std::optional<double> brt_sigma;  ///< defaults to the noise standard deviation of the DGP
    std::uint64_t master_seed = 20160601;
    std::size_t workers = 1;
    double noise_scale = 1.0;
    SolverSettings solver;

    double sigma() const { return brt_sigma.value_or(noise_sigma(dgp)); }

    DgpSpec dgp_spec() const { return {.id = dgp, .n = n, .p = p, .noise_scale = noise_scale}; }

    PenaltyGrid grid() const { return build_grid(grid_C1, grid_a, grid_c1, n); }

    void validate() const {
        dgp_spec().validate();
        require(reps >= 1, "ExperimentConfig: reps must be at least 1");
        require(K >= 2 && K <= n, "ExperimentConfig: need 2 <= K <= n");
        require(workers >= 1, "ExperimentConfig: workers must be at least 1");
        solver.validate();
    }
};

struct ReplicationRecord {
    std::size_t rep_index = 0;
    double lambda_hat = 0.0;
    std::size_t index_hat = 0;
    double lambda_plasso = 0.0;
    ErrorReport errors_cv;
    ErrorReport errors_plasso;
    std::vector<ErrorReport> errors_per_lambda;  ///< full-sample fit at each grid entry
    std::vector<bool> per_lambda_converged;
    double score_ratio = 0.0;
    std::size_t l0_cv = 0;
    bool cv_converged = true;
    bool plasso_converged = true;
    std::size_t nonconverged_fits = 0;  ///< across path, fold chains, and P-Lasso
    bool support_bound_ok = true;       ///< every fit has ‖β̂‖₀ ≤ min(n_fit, p)
};

/// One generate → folds → CV → P-Lasso → full path pass, seeded by (master_seed, rep_index).
inline ReplicationRecord run_replication(const ExperimentConfig& cfg, const PenaltyGrid& grid,
                                         std::size_t rep_index) {
    Rng rng = Rng::child(cfg.master_seed, rep_index);
    auto [data, truth] = generate(cfg.dgp_spec(), rng);
    const FoldPlan plan = make_folds(cfg.n, cfg.K, rng);

    ReplicationRecord rec;
    rec.rep_index = rep_index;

    auto support_ok = [&](const LassoFit& f, std::size_t rows) {
        return count_nonzero(f.beta) <= std::min(rows, cfg.p);
    };

    const std::vector<LassoFit> path = fit_path(data, grid.lambdas, cfg.solver);
    const CvResult cv = select_lambda(data, plan, grid, cfg.solver, &path);

    rec.errors_per_lambda.reserve(path.size());
    for (const auto& f : path) {
        rec.errors_per_lambda.push_back(estimation_errors(f, truth, data));
        rec.per_lambda_converged.push_back(f.converged);
        if (!f.converged) ++rec.nonconverged_fits;
        if (!support_ok(f, cfg.n)) rec.support_bound_ok = false;
    }
    for (bool ex : cv.excluded)
        if (ex) ++rec.nonconverged_fits;
    const auto sizes = plan.fold_sizes();
    for (std::size_t k = 0; k < plan.K; ++k)
        if (!support_ok(cv.fold_fits_at_hat[k], cfg.n - sizes[k])) rec.support_bound_ok = false;

    rec.lambda_hat = cv.lambda_hat;
    rec.index_hat = cv.index_hat;
    rec.errors_cv = estimation_errors(cv.final_fit, truth, data);
    rec.cv_converged = cv.final_fit.converged;
    rec.l0_cv = rec.errors_cv.l0;
    rec.score_ratio = max_score_ratio(data.x, truth.eps, cv.lambda_hat);

    rec.lambda_plasso = brt_lambda(cfg.n, cfg.p, cfg.sigma(), cfg.brt_c, cfg.brt_alpha);
    const LassoFit plasso = fit_lasso(data, rec.lambda_plasso, std::nullopt, cfg.solver);
    rec.errors_plasso = estimation_errors(plasso, truth, data);
    rec.plasso_converged = plasso.converged;
    if (!plasso.converged) ++rec.nonconverged_fits;
    if (!support_ok(plasso, cfg.n) || !support_ok(cv.final_fit, cfg.n)) rec.support_bound_ok = false;
    return rec;
}

inline ReplicationRecord run_replication(const ExperimentConfig& cfg, std::size_t rep_index) {
    return run_replication(cfg, cfg.grid(), rep_index);
}

// ---------------------------------------------------------------------------
// Aggregation

struct MeanSe {
    double mean = 0.0;
    double se = 0.0;
};

struct ErrorMeans {
    MeanSe pred_norm, pred_norm_sq, l2, l1, l0;
    std::size_t count = 0;  ///< records contributing (converged fits)
};

struct TableSummary {
    std::size_t reps = 0;
    ErrorMeans cv;
    ErrorMeans plasso;
    std::vector<ErrorMeans> per_lambda;
    ErrorMeans lambda_min;  ///< per norm: minimum over the grid of the per-λ mean
    std::array<std::size_t, 4> lambda_argmin{};  ///< grid index of each minimum (pred, pred_sq, l2, l1)
    BracketHistogram sparsity{sparsity_brackets(0)};
    BracketHistogram ratio{ratio_brackets()};
    std::vector<std::size_t> selection_counts;  ///< how often each grid index was λ̂
    MeanSe lambda_hat;
    MeanSe l0_cv;
    std::size_t nonconverged_fits = 0;
    std::size_t support_bound_violations = 0;
};

namespace detail {

inline MeanSe mean_se(const std::vector<double>& v) {
    MeanSe out;
    if (v.empty()) return out;
    double s = 0.0;
    for (double x : v) s += x;
    out.mean = s / static_cast<double>(v.size());
    if (v.size() > 1) {
        double ss = 0.0;
        for (double x : v) ss += (x - out.mean) * (x - out.mean);
        out.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
    }
    return out;
}

template <typename Pick>
ErrorMeans error_means(const std::vector<ReplicationRecord>& records, Pick pick) {
    std::vector<double> pn, pn2, l2, l1, l0;
    for (const auto& r : records) {
        const ErrorReport* e = pick(r);
        if (!e) continue;
        pn.push_back(e->pred_norm);
        pn2.push_back(e->pred_norm_sq);
        l2.push_back(e->l2);
        l1.push_back(e->l1);
        l0.push_back(static_cast<double>(e->l0));
    }
    return {mean_se(pn), mean_se(pn2), mean_se(l2), mean_se(l1), mean_se(l0), pn.size()};
}

}  // namespace detail

/**
 * Table-level statistics over replications, accumulated in rep_index order.
 *
 * The λ-Lasso entry takes the mean over replications at each grid value
 * first and then the minimum over the grid. Non-converged fits are left out
 * of every mean and tallied in `nonconverged_fits`.
 */
inline TableSummary aggregate(std::vector<ReplicationRecord> records, const ExperimentConfig& cfg,
                              std::size_t grid_size) {
    require(!records.empty(), "aggregate: no records");
    std::sort(records.begin(), records.end(),
              [](const auto& a, const auto& b) { return a.rep_index < b.rep_index; });

    TableSummary s;
    s.reps = records.size();
    s.cv = detail::error_means(records, [](const ReplicationRecord& r) {
        return r.cv_converged ? &r.errors_cv : nullptr;
    });
    s.plasso = detail::error_means(records, [](const ReplicationRecord& r) {
        return r.plasso_converged ? &r.errors_plasso : nullptr;
    });

    s.per_lambda.resize(grid_size);
    for (std::size_t l = 0; l < grid_size; ++l) {
        s.per_lambda[l] = detail::error_means(records, [l](const ReplicationRecord& r) {
            require(r.errors_per_lambda.size() > l, "aggregate: record shorter than grid");
            return r.per_lambda_converged[l] ? &r.errors_per_lambda[l] : nullptr;
        });
    }
    const std::array<MeanSe ErrorMeans::*, 4> fields = {&ErrorMeans::pred_norm, &ErrorMeans::pred_norm_sq,
                                                        &ErrorMeans::l2, &ErrorMeans::l1};
    for (std::size_t f = 0; f < fields.size(); ++f) {
        std::size_t best = 0;
        for (std::size_t l = 1; l < grid_size; ++l)
            if ((s.per_lambda[l].*fields[f]).mean < (s.per_lambda[best].*fields[f]).mean) best = l;
        s.lambda_argmin[f] = best;
        s.lambda_min.*fields[f] = s.per_lambda[best].*fields[f];
    }
    s.lambda_min.l0 = s.per_lambda[s.lambda_argmin[2]].l0;
    s.lambda_min.count = s.per_lambda[s.lambda_argmin[2]].count;

    s.sparsity = BracketHistogram(sparsity_brackets(cfg.p));
    s.ratio = BracketHistogram(ratio_brackets());
    s.selection_counts.assign(grid_size, 0);
    std::vector<double> lam, l0;
    for (const auto& r : records) {
        s.sparsity.add(sparsity_bracket(r.l0_cv, cfg.p));
        s.ratio.add(ratio_bracket(r.score_ratio));
        ++s.selection_counts.at(r.index_hat);
        lam.push_back(r.lambda_hat);
        l0.push_back(static_cast<double>(r.l0_cv));
        s.nonconverged_fits += r.nonconverged_fits;
        if (!r.support_bound_ok) ++s.support_bound_violations;
    }
    s.lambda_hat = detail::mean_se(lam);
    s.l0_cv = detail::mean_se(l0);
    return s;
}

// ---------------------------------------------------------------------------
// Output

inline std::string fmt6(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", v);
    return buf;
}

namespace detail {

inline std::ofstream open_out(const std::filesystem::path& path) {
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
    return os;
}

inline void close_out(std::ofstream& os, const std::filesystem::path& path) {
    os.close();
    if (!os) throw std::runtime_error("write failed for '" + path.string() + "'");
}

inline void write_error_cols(std::ostream& os, const ErrorReport& e) {
    os << ',' << fmt6(e.pred_norm) << ',' << fmt6(e.pred_norm_sq) << ',' << fmt6(e.l2) << ','
       << fmt6(e.l1) << ',' << e.l0;
}

inline void write_means_row(std::ostream& os, const std::string& name, const ErrorMeans& m) {
    os << name << ',' << fmt6(m.pred_norm.mean) << ',' << fmt6(m.pred_norm_sq.mean) << ','
       << fmt6(m.l2.mean) << ',' << fmt6(m.l1.mean) << ',' << fmt6(m.pred_norm.se) << ','
       << fmt6(m.pred_norm_sq.se) << ',' << fmt6(m.l2.se) << ',' << fmt6(m.l1.se) << ',' << m.count
       << '\n';
}

inline void write_histogram(std::ostream& os, const BracketHistogram& h) {
    os << "bracket,lo,hi,count,frequency\n";
    for (std::size_t b = 0; b < h.edges.size(); ++b)
        os << h.edges[b].label << ',' << fmt6(h.edges[b].lo) << ',' << fmt6(h.edges[b].hi) << ','
           << h.counts[b] << ',' << fmt6(h.frequency(b)) << '\n';
}

}  // namespace detail

/// One row per replication; per-λ columns are suffixed with the grid index.
inline void write_records_csv(std::ostream& os, const std::vector<ReplicationRecord>& records) {
    const std::size_t L = records.empty() ? 0 : records.front().errors_per_lambda.size();
    os << "rep,lambda_hat,index_hat,lambda_plasso,score_ratio,cv_converged,plasso_converged,"
          "nonconverged_fits,support_bound_ok";
    for (const char* est : {"cv", "plasso"})
        for (const char* f : {"pred_norm", "pred_norm_sq", "l2", "l1", "l0"}) os << ',' << est << '_' << f;
    for (std::size_t l = 0; l < L; ++l) {
        for (const char* f : {"pred_norm", "pred_norm_sq", "l2", "l1", "l0"})
            os << ",lam" << l << '_' << f;
        os << ",lam" << l << "_converged";
    }
    os << '\n';
    for (const auto& r : records) {
        os << r.rep_index << ',' << fmt6(r.lambda_hat) << ',' << r.index_hat << ','
           << fmt6(r.lambda_plasso) << ',' << fmt6(r.score_ratio) << ',' << int(r.cv_converged) << ','
           << int(r.plasso_converged) << ',' << r.nonconverged_fits << ',' << int(r.support_bound_ok);
        detail::write_error_cols(os, r.errors_cv);
        detail::write_error_cols(os, r.errors_plasso);
        for (std::size_t l = 0; l < L; ++l) {
            detail::write_error_cols(os, r.errors_per_lambda[l]);
            os << ',' << int(r.per_lambda_converged[l]);
        }
        os << '\n';
    }
}

/// Inverse of write_records_csv (values carry the 6 significant digits written).
inline std::vector<ReplicationRecord> read_records_csv(std::istream& is) {
    std::string line;
    if (!std::getline(is, line)) throw std::runtime_error("read_records_csv: empty input");
    std::size_t cols = 1;
    for (char ch : line) cols += (ch == ',');
    constexpr std::size_t fixed = 9 + 10;
    if (cols < fixed || (cols - fixed) % 6 != 0)
        throw std::runtime_error("read_records_csv: unexpected column count");
    const std::size_t L = (cols - fixed) / 6;

    std::vector<ReplicationRecord> out;
    std::size_t lineno = 1;
    while (std::getline(is, line)) {
        ++lineno;
        if (line.empty()) continue;
        std::vector<double> v;
        std::stringstream ss(line);
        std::string cell;
        while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
        if (v.size() != cols)
            throw std::runtime_error("read_records_csv: wrong field count on line " + std::to_string(lineno));
        std::size_t c = 0;
        auto next = [&] { return v[c++]; };
        auto next_size = [&] { return static_cast<std::size_t>(v[c++]); };
        auto next_err = [&] {
            ErrorReport e;
            e.pred_norm = next();
            e.pred_norm_sq = next();
            e.l2 = next();
            e.l1 = next();
            e.l0 = next_size();
            return e;
        };
        ReplicationRecord r;
        r.rep_index = next_size();
        r.lambda_hat = next();
        r.index_hat = next_size();
        r.lambda_plasso = next();
        r.score_ratio = next();
        r.cv_converged = next() != 0.0;
        r.plasso_converged = next() != 0.0;
        r.nonconverged_fits = next_size();
        r.support_bound_ok = next() != 0.0;
        r.errors_cv = next_err();
        r.errors_plasso = next_err();
        r.l0_cv = r.errors_cv.l0;
        for (std::size_t l = 0; l < L; ++l) {
            r.errors_per_lambda.push_back(next_err());
            r.per_lambda_converged.push_back(next() != 0.0);
        }
        out.push_back(std::move(r));
    }
    return out;
}

inline nlohmann::ordered_json summary_json(const TableSummary& s, const ExperimentConfig& cfg,
                                           const PenaltyGrid& grid) {
    using nlohmann::ordered_json;
    auto means = [](const ErrorMeans& m) {
        return ordered_json{{"pred_norm", m.pred_norm.mean},       {"pred_norm_sq", m.pred_norm_sq.mean},
                            {"l2", m.l2.mean},                     {"l1", m.l1.mean},
                            {"l0", m.l0.mean},                     {"pred_norm_se", m.pred_norm.se},
                            {"pred_norm_sq_se", m.pred_norm_sq.se}, {"l2_se", m.l2.se},
                            {"l1_se", m.l1.se},                    {"count", m.count}};
    };
    ordered_json j;
    j["config"] = {{"dgp", static_cast<int>(cfg.dgp)},
                   {"n", cfg.n},
                   {"p", cfg.p},
                   {"reps", cfg.reps},
                   {"k_folds", cfg.K},
                   {"grid_C1", cfg.grid_C1},
                   {"grid_a", cfg.grid_a},
                   {"grid_c1", cfg.grid_c1},
                   {"brt_c", cfg.brt_c},
                   {"brt_alpha", cfg.brt_alpha},
                   {"brt_sigma", cfg.sigma()},
                   {"seed", cfg.master_seed},
                   {"coord_tol", cfg.solver.coord_tol},
                   {"kkt_tol", cfg.solver.kkt_tol},
                   {"max_sweeps", cfg.solver.max_sweeps}};
    j["grid"] = {{"size", grid.size()}, {"lambda_max", grid.lambdas.front()}, {"lambda_min", grid.lambdas.back()}};
    j["cv_lasso"] = means(s.cv);
    j["lambda_lasso_min"] = means(s.lambda_min);
    j["lambda_lasso_argmin"] = {{"pred_norm", s.lambda_argmin[0]}, {"pred_norm_sq", s.lambda_argmin[1]},
                                {"l2", s.lambda_argmin[2]},        {"l1", s.lambda_argmin[3]}};
    j["p_lasso"] = means(s.plasso);
    j["lambda_hat"] = {{"mean", s.lambda_hat.mean}, {"se", s.lambda_hat.se}};
    j["l0_cv"] = {{"mean", s.l0_cv.mean}, {"se", s.l0_cv.se}};
    auto freqs = [](const BracketHistogram& h) {
        ordered_json o;
        for (std::size_t b = 0; b < h.edges.size(); ++b) o[h.edges[b].label] = h.frequency(b);
        return o;
    };
    j["sparsity_brackets"] = freqs(s.sparsity);
    j["ratio_brackets"] = freqs(s.ratio);
    j["nonconverged_fits"] = s.nonconverged_fits;
    j["support_bound_violations"] = s.support_bound_violations;
    return j;
}

/**
 * Writes records.csv, table51.csv, table52.csv, table53.csv, cv_curve.csv and
 * summary.json into `dir`, creating it if needed.
 */
inline void write_outputs(const std::filesystem::path& dir, const TableSummary& s,
                          const std::vector<ReplicationRecord>& records, const ExperimentConfig& cfg,
                          const PenaltyGrid& grid) {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw std::runtime_error("cannot create '" + dir.string() + "': " + ec.message());

    {
        const auto path = dir / "records.csv";
        auto os = detail::open_out(path);
        write_records_csv(os, records);
        detail::close_out(os, path);
    }
    {
        const auto path = dir / "table51.csv";
        auto os = detail::open_out(path);
        os << "estimator,pred_norm,pred_norm_sq,l2,l1,pred_norm_se,pred_norm_sq_se,l2_se,l1_se,count\n";
        detail::write_means_row(os, "CV-Lasso", s.cv);
        detail::write_means_row(os, "lambda-Lasso", s.lambda_min);
        detail::write_means_row(os, "P-Lasso", s.plasso);
        detail::close_out(os, path);
    }
    {
        const auto path = dir / "table52.csv";
        auto os = detail::open_out(path);
        detail::write_histogram(os, s.sparsity);
        detail::close_out(os, path);
    }
    {
        const auto path = dir / "table53.csv";
        auto os = detail::open_out(path);
        detail::write_histogram(os, s.ratio);
        detail::close_out(os, path);
    }
    {
        // order counts from the smallest λ (order 1) upward; grid_index from the largest (0).
        const auto path = dir / "cv_curve.csv";
        auto os = detail::open_out(path);
        os << "order,grid_index,lambda,pred_norm,pred_norm_sq,l2,l1,l0,count,selected\n";
        const std::size_t L = grid.size();
        for (std::size_t ord = 1; ord <= L; ++ord) {
            const std::size_t l = L - ord;
            const auto& m = s.per_lambda[l];
            os << ord << ',' << l << ',' << fmt6(grid.lambdas[l]) << ',' << fmt6(m.pred_norm.mean) << ','
               << fmt6(m.pred_norm_sq.mean) << ',' << fmt6(m.l2.mean) << ',' << fmt6(m.l1.mean) << ','
               << fmt6(m.l0.mean) << ',' << m.count << ',' << s.selection_counts[l] << '\n';
        }
        detail::close_out(os, path);
    }
    {
        const auto path = dir / "summary.json";
        auto os = detail::open_out(path);
        os << summary_json(s, cfg, grid).dump(2) << '\n';
        detail::close_out(os, path);
    }
}

struct ExperimentResult {
    PenaltyGrid grid;
    std::vector<ReplicationRecord> records;  ///< ordered by rep_index
    TableSummary summary;
};

/**
 * Runs cfg.reps replications on cfg.workers threads. Each replication draws
 * from its own child stream, and records are merged in index order, so the
 * result does not depend on the worker count.
 */
inline ExperimentResult run_experiment(const ExperimentConfig& cfg,
                                       const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
    cfg.validate();
    ExperimentResult res;
    res.grid = cfg.grid();
    res.records.resize(cfg.reps);

    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(cfg.workers);
    auto work = [&](std::size_t w) {
        try {
            for (std::size_t r; (r = next.fetch_add(1)) < cfg.reps;)
                res.records[r] = run_replication(cfg, res.grid, r);
        } catch (...) {
            errors[w] = std::current_exception();
            next.store(cfg.reps);
        }
    };
    if (cfg.workers == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (std::size_t w = 0; w < cfg.workers; ++w) pool.emplace_back(work, w);
    }
    for (auto& e : errors)
        if (e) std::rethrow_exception(e);

    res.summary = aggregate(res.records, cfg, res.grid.size());
    if (out_dir) write_outputs(*out_dir, res.summary, res.records, cfg, res.grid);
    return res;
}

// ---------------------------------------------------------------------------
// Rate scaling

struct RatePoint {
    std::size_t n = 0;
    std::size_t p = 0;
    TableSummary summary;
};

struct RateStudy {
    std::vector<RatePoint> points;
    double slope_l2 = 0.0;    ///< least-squares slope of log(mean CV-Lasso L² error) on log n
    double slope_pred = 0.0;  ///< same for the prediction norm
};

inline double log_log_slope(const std::vector<double>& xs, const std::vector<double>& ys) {
    require(xs.size() == ys.size() && xs.size() >= 2, "log_log_slope: need at least two points");
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += std::log(xs[i]);
        my += std::log(ys[i]);
    }
    mx /= double(xs.size());
    my /= double(xs.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        const double dx = std::log(xs[i]) - mx;
        sxy += dx * (std::log(ys[i]) - my);
        sxx += dx * dx;
    }
    require(sxx > 0.0, "log_log_slope: need at least two distinct x values");
    return sxy / sxx;
}

/// Runs `base` at each (n, p) with `reps` replications; all p must agree.
inline RateStudy rate_study(const ExperimentConfig& base,
                            const std::vector<std::pair<std::size_t, std::size_t>>& sizes, std::size_t reps,
                            const std::optional<std::filesystem::path>& out_dir = std::nullopt) {
    require(sizes.size() >= 2, "rate_study: need at least two configurations");
    for (const auto& sz : sizes)
        require(sz.second == sizes.front().second, "rate_study: p must be the same in every configuration");
    RateStudy study;
    std::vector<double> ns, l2, pred;
    for (const auto& [n, p] : sizes) {
        ExperimentConfig cfg = base;
        cfg.n = n;
        cfg.p = p;
        cfg.reps = reps;
        std::optional<std::filesystem::path> sub;
        if (out_dir) sub = *out_dir / ("n" + std::to_string(n) + "_p" + std::to_string(p));
        auto res = run_experiment(cfg, sub);
        ns.push_back(double(n));
        l2.push_back(res.summary.cv.l2.mean);
        pred.push_back(res.summary.cv.pred_norm.mean);
        study.points.push_back({n, p, std::move(res.summary)});
    }
    study.slope_l2 = log_log_slope(ns, l2);
    study.slope_pred = log_log_slope(ns, pred);
    return study;
}

}  // namespace cvlasso
