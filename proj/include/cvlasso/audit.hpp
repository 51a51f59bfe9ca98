#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <ostream>
#include <string>
#include <vector>

#include "core.hpp"
#include "dgp.hpp"
#include "diagnostics.hpp"
#include "experiments.hpp"
#include "rng.hpp"
#include "solver.hpp"

// Randomized property corpus for the structural Lasso identities: two-point
// inequality, unit-Lipschitz fitted values, the degrees-of-freedom identity,
// and the support bound. Each check reports one row per case.

namespace cvlasso::audit {

struct AuditRow {
    std::string check;
    std::uint64_t instance_seed = 0;
    double statistic = 0.0;
    bool pass = false;
    bool support_ok = true;  ///< every fit behind the row has ‖β̂‖₀ ≤ min(n, p)
};

inline bool within_support_bound(const LassoFit& fit, std::size_t n) {
    return count_nonzero(fit.beta) <= std::min(n, fit.beta.size());
}

inline void write_csv(std::ostream& os, const std::vector<AuditRow>& rows) {
    os << "check,instance_seed,statistic,pass\n";
    for (const auto& r : rows)
        os << r.check << ',' << r.instance_seed << ',' << fmt6(r.statistic) << ',' << (r.pass ? "pass" : "fail")
           << '\n';
}

inline bool all_pass(const std::vector<AuditRow>& rows) {
    return std::all_of(rows.begin(), rows.end(), [](const AuditRow& r) { return r.pass; });
}

/// n×p matrix of i.i.d. standard normals.
inline Matrix gaussian_matrix(std::size_t n, std::size_t p, Rng& rng) {
    Matrix x(n, p);
    for (std::size_t j = 0; j < p; ++j)
        for (auto& v : x.col(j)) v = rng.normal();
    return x;
}

/// Small random regression instance with a sparse-ish truth and N(0,1) noise.
inline Dataset random_instance(std::size_t n, std::size_t p, Rng& rng) {
    Matrix x = gaussian_matrix(n, p, rng);
    CoefVector b(p, 0.0);
    for (auto& v : b)
        if (rng.uniform() < 0.4) v = rng.normal() * 2.0;
    Vector y = multiply(x, b);
    for (auto& v : y) v += rng.normal();
    return Dataset(std::move(x), std::move(y));
}

/// Penalty log-uniform on [lo_frac, hi_frac]·lambda_max.
inline double random_lambda(const Dataset& d, double lo_frac, double hi_frac, Rng& rng) {
    const double lmax = std::max(lambda_max(d), 1e-12);
    const double t = rng.uniform();
    return lmax * std::exp(std::log(lo_frac) + t * (std::log(hi_frac) - std::log(lo_frac)));
}

/// Slack of the two-point inequality must stay above −tolerance.
inline std::vector<AuditRow> two_point(std::uint64_t seed, std::size_t cases, double tolerance = 1e-5,
                                       const SolverSettings& settings = {}) {
    std::vector<AuditRow> rows;
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng = Rng::child(seed, c);
        const std::size_t n = 5 + rng.below(36);
        const std::size_t p = 2 + rng.below(14);
        const Dataset d = random_instance(n, p, rng);
        const LassoFit fit = fit_lasso(d, random_lambda(d, 0.01, 1.0, rng), std::nullopt, settings);
        CoefVector probe(p, 0.0);
        switch (c % 3) {
            case 0:
                break;  // b = 0
            case 1:
                for (auto& v : probe) v = rng.normal();
                break;
            default:
                for (std::size_t j = 0; j < p; ++j) probe[j] = fit.beta[j] + 0.1 * rng.normal();
        }
        const double slack = check_two_point(d, fit, probe);
        rows.push_back({"two_point", c, slack, fit.converged && slack >= -tolerance, within_support_bound(fit, n)});
    }
    return rows;
}

/**
 * Noise pairs on fixed 30×10 Gaussian designs (one design per block of 50
 * pairs). The ratio of fitted-value distance to noise distance must stay
 * within 1 + tolerance.
 */
inline std::vector<AuditRow> lipschitz(std::uint64_t seed, std::size_t pairs, double tolerance = 1e-4,
                                       const SolverSettings& settings = {}) {
    constexpr std::size_t n = 30, p = 10, block = 50;
    std::vector<AuditRow> rows;
    Matrix x;
    CoefVector beta(p, 0.0);
    for (std::size_t c = 0; c < pairs; ++c) {
        if (c % block == 0) {
            Rng design_rng = Rng::child(seed ^ 0xD1B54A32D192ED03ULL, c / block);
            x = gaussian_matrix(n, p, design_rng);
            for (std::size_t j = 0; j < p; ++j) beta[j] = j < 3 ? design_rng.normal() : 0.0;
        }
        Rng rng = Rng::child(seed, c);
        Vector ea(n), eb(n);
        for (auto& v : ea) v = rng.normal();
        const double spread = std::exp(rng.uniform(-3.0, 1.0));
        for (std::size_t i = 0; i < n; ++i) eb[i] = ea[i] + spread * rng.normal();
        // moderate penalty: a fraction of the null-penalty of the first response
        Vector ya = multiply(x, beta);
        for (std::size_t i = 0; i < n; ++i) ya[i] += ea[i];
        const double lambda = lambda_max(Dataset(x, ya)) * rng.uniform(0.05, 0.6);
        const double ratio = check_lipschitz(x, lambda, ea, eb, beta, settings);
        rows.push_back({"lipschitz", c, ratio, ratio <= 1.0 + tolerance});
    }
    return rows;
}

/// Per-penalty outcome of the degrees-of-freedom Monte-Carlo check.
struct DfAudit {
    double lambda = 0.0;
    DfIdentityResult result;
    bool pass = false;  ///< |mean_l0 − mean_rhs| ≤ 3·se
};

/// n=20, p=5 fixed AR design with the (1,−1,2,−2,0) truth and σ = 1.
inline std::vector<DfAudit> df_identity(std::uint64_t seed, std::size_t draws,
                                        const std::vector<double>& lambdas = {0.1, 0.5, 1.5},
                                        const SolverSettings& settings = {}) {
    Rng design_rng = Rng::child(seed, 0);
    const Matrix x = sample_design(20, 5, design_rng);
    const CoefVector beta = true_beta(5);
    std::vector<DfAudit> out;
    for (std::size_t l = 0; l < lambdas.size(); ++l) {
        Rng rng = Rng::child(seed, l + 1);
        DfAudit a;
        a.lambda = lambdas[l];
        a.result = df_identity_mc(x, lambdas[l], beta, 1.0, draws, rng, settings);
        a.pass = std::abs(a.result.mean_l0 - a.result.mean_rhs) <= 3.0 * a.result.se;
        out.push_back(a);
    }
    return out;
}

inline std::vector<AuditRow> df_identity_rows(const std::vector<DfAudit>& audits, std::uint64_t seed) {
    std::vector<AuditRow> rows;
    for (const auto& a : audits) {
        const double z = a.result.se > 0.0 ? (a.result.mean_l0 - a.result.mean_rhs) / a.result.se : 0.0;
        rows.push_back({"df_identity_z", seed, z, a.pass});
    }
    return rows;
}

/// ‖β̂‖₀ ≤ min(n, p) across a path, including p > n designs.
inline std::vector<AuditRow> support_bound(std::uint64_t seed, std::size_t cases,
                                           const SolverSettings& settings = {}) {
    std::vector<AuditRow> rows;
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng = Rng::child(seed, c);
        const std::size_t n = 5 + rng.below(20);
        const std::size_t p = n + 1 + rng.below(40);
        const Dataset d = random_instance(n, p, rng);
        const double lmax = lambda_max(d);
        Vector lambdas;
        for (int l = 0; l < 30; ++l) lambdas.push_back(lmax * std::pow(0.8, l));
        std::size_t worst = 0;
        bool ok = true;
        for (const auto& f : fit_path(d, lambdas, settings)) {
            const std::size_t l0 = count_nonzero(f.beta);
            worst = std::max(worst, l0);
            ok = ok && l0 <= std::min(n, p);
        }
        rows.push_back({"support_bound", c, double(worst) / double(std::min(n, p)), ok, ok});
    }
    return rows;
}

/// KKT certification of fits across random instances and penalties.
inline std::vector<AuditRow> kkt(std::uint64_t seed, std::size_t cases, const SolverSettings& settings = {}) {
    std::vector<AuditRow> rows;
    for (std::size_t c = 0; c < cases; ++c) {
        Rng rng = Rng::child(seed, c);
        const Dataset d = random_instance(5 + rng.below(36), 2 + rng.below(14), rng);
        const LassoFit fit = fit_lasso(d, random_lambda(d, 0.01, 1.0, rng), std::nullopt, settings);
        rows.push_back({"kkt", c, fit.kkt_residual, fit.converged && fit.kkt_residual <= settings.kkt_tol,
                        within_support_bound(fit, d.n())});
    }
    return rows;
}

}  // namespace cvlasso::audit
