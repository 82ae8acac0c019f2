#pragma once

#include <span>
#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab {

/// Coefficients D_2..D_N of the expansion of phi at u = 0 in the main
/// regime. Independent of phi(0). Requires c > 0 and N >= 2.
std::vector<double> main_series_coefficients(const ModelParams& params, int order);

struct U0Choice {
    double u0;
    bool fallback;
};

/// Largest u in a geometric candidate grid on [1e-4 m, 0.1 m] at which the
/// last retained term satisfies |D_N u^N / N| lambda/c <= tol and the term
/// magnitudes are non-increasing over the final third of the series.
/// Falls back to min(1e-3, m/100) when no candidate qualifies.
U0Choice choose_u0(std::span<const double> coeffs, const ModelParams& params, double tol);

/// Truncated expansion
///   phi(u) = C0 [1 + (lambda/c)(u + sum_{k>=2} D_k u^k / k)]
/// trusted on [0, u0].
class SeriesExpansion {
   public:
    SeriesExpansion(const ModelParams& params, std::vector<double> coeffs, U0Choice u0);

    const ModelParams& params() const noexcept { return params_; }
    int order() const noexcept { return static_cast<int>(coeffs_.size()) + 1; }
    double u0() const noexcept { return u0_; }
    bool u0_fallback() const noexcept { return fallback_; }

    /// D_2..D_N.
    std::span<const double> coeffs() const noexcept { return coeffs_; }
    double D(int k) const;

    /// Throws std::domain_error for u outside [0, u0].
    PhiJet eval(double C0, double u) const;
    double third_derivative(double C0, double u) const;

   private:
    void check_domain(double u) const;

    ModelParams params_;
    std::vector<double> coeffs_;
    double u0_;
    bool fallback_;
};

constexpr int default_series_order = 20;
constexpr double default_series_tol = 1e-12;

SeriesExpansion series_coeffs_main(const ModelParams& params, int order = default_series_order,
                                   double tol = default_series_tol);

}  // namespace ruinlab
