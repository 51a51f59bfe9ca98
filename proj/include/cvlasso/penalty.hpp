#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "core.hpp"

namespace cvlasso {

/// Geometric candidate set {C1·a^l : l = 0, 1, ...; a^l ≥ c1/n}, stored largest first.
struct PenaltyGrid {
    Vector lambdas;
    double C1 = 0.0;
    double a = 0.0;
    double c1 = 0.0;
    std::size_t n = 0;

    std::size_t size() const noexcept { return lambdas.size(); }
};

inline PenaltyGrid build_grid(double C1, double a, double c1, std::size_t n) {
    require(C1 > 0.0, "build_grid: C1 must be positive");
    require(a > 0.0 && a < 1.0, "build_grid: a must lie in (0, 1)");
    require(c1 > 0.0, "build_grid: c1 must be positive");
    require(n >= 1, "build_grid: n must be at least 1");
    const double floor = c1 / static_cast<double>(n);
    if (!(1.0 >= floor))
        throw std::invalid_argument("build_grid: c1/n exceeds 1, candidate set is empty");

    PenaltyGrid grid{.lambdas = {}, .C1 = C1, .a = a, .c1 = c1, .n = n};
    for (int l = 0;; ++l) {
        const double al = std::pow(a, l);
        if (al < floor) break;
        grid.lambdas.push_back(C1 * al);
    }
    return grid;
}

inline double normal_cdf(double x) noexcept { return 0.5 * std::erfc(-x / std::numbers::sqrt2); }

/**
 * Standard normal quantile.
 *
 * Acklam's rational approximation (relative error ~1e-9) followed by two
 * Halley steps on erfc, which brings |Φ(x) − q| down to round-off.
 */
inline double inv_normal_cdf(double q) {
    if (!(q > 0.0 && q < 1.0)) throw std::domain_error("inv_normal_cdf: q must lie in (0, 1)");
    if (q > 0.5) return -inv_normal_cdf(1.0 - q);  // 1 − q is exact here

    static constexpr std::array<double, 6> a = {-3.969683028665376e+01, 2.209460984245205e+02,
                                                -2.759285104469687e+02, 1.383577518672690e+02,
                                                -3.066479806614716e+01, 2.506628277459239e+00};
    static constexpr std::array<double, 5> b = {-5.447609879822406e+01, 1.615858368580409e+02,
                                                -1.556989798598866e+02, 6.680131188771972e+01,
                                                -1.328068155288572e+01};
    static constexpr std::array<double, 6> c = {-7.784894002430293e-03, -3.223964580411365e-01,
                                                -2.400758277161838e+00, -2.549732539343734e+00,
                                                4.374664141464968e+00,  2.938163982698783e+00};
    static constexpr std::array<double, 4> d = {7.784695709041462e-03, 3.224671290700398e-01,
                                                2.445134137142996e+00, 3.754408661907416e+00};
    constexpr double p_low = 0.02425;

    double x;
    if (q < p_low) {
        const double t = std::sqrt(-2.0 * std::log(q));
        x = (((((c[0] * t + c[1]) * t + c[2]) * t + c[3]) * t + c[4]) * t + c[5]) /
            ((((d[0] * t + d[1]) * t + d[2]) * t + d[3]) * t + 1.0);
    } else {
        const double u = q - 0.5;
        const double r = u * u;
        x = (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * u /
            (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
    }

    const double inv_sqrt_2pi = 1.0 / std::sqrt(2.0 * std::numbers::pi);
    for (int step = 0; step < 2; ++step) {
        const double e = normal_cdf(x) - q;
        const double u = e / (inv_sqrt_2pi * std::exp(-0.5 * x * x));
        x -= u / (1.0 + 0.5 * x * u);
    }
    return x;
}

/// Plug-in penalty 2cσ n^{-1/2} Φ⁻¹(1 − α/(2p)).
inline double brt_lambda(std::size_t n, std::size_t p, double sigma, double c, double alpha) {
    require(n >= 1 && p >= 1, "brt_lambda: n and p must be positive");
    require(sigma > 0.0, "brt_lambda: sigma must be positive");
    require(c > 1.0, "brt_lambda: c must exceed 1");
    require(alpha > 0.0 && alpha < 1.0, "brt_lambda: alpha must lie in (0, 1)");
    const double z = inv_normal_cdf(1.0 - alpha / (2.0 * static_cast<double>(p)));
    return 2.0 * c * sigma / std::sqrt(static_cast<double>(n)) * z;
}

}  // namespace cvlasso
