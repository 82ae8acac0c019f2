#pragma once

#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/ode.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab {

/// Exponent mu1 of phi'(u) ~ u^(mu1 - 1) at zero, and the coefficients
/// d1 = mu1 + a/b^2, d2 = mu1 + 2a/b^2 - 1 of the eta equation.
struct CapitalStockExponents {
    double mu1;
    double d1;
    double d2;
};

CapitalStockExponents capital_stock_exponents(const ModelParams& params);

/// Coefficients P_2..P_N of eta(u) = 1 + sum_{k>=1} P_{k+1} u^k.
std::vector<double> eta_series(const ModelParams& params, int order);

class CapitalStockExpansion {
   public:
    CapitalStockExpansion(const ModelParams& params, int order = 30, double tol = 1e-14);

    const CapitalStockExponents& exponents() const noexcept { return exp_; }
    /// P_2..P_N.
    const std::vector<double>& coeffs() const noexcept { return coeffs_; }
    double u0() const noexcept { return u0_; }
    double m() const noexcept { return m_; }

    /// (eta, eta') at 0 <= u <= u0.
    std::pair<double, double> eta(double u) const;
    /// int_0^u s^(mu1 - 1) eta(s) ds for 0 <= u <= u0, integrated termwise.
    double weighted_integral(double u) const;

   private:
    CapitalStockExponents exp_;
    std::vector<double> coeffs_;
    double u0_;
    double m_;
};

/// eta on [u0, u_max] started from the series at u0.
Trajectory solve_eta(const CapitalStockExpansion& expansion, double u_max, Tolerances tol = {});

struct CapitalStockOptions {
    Tolerances tol{1e-11, 1e-250};
    double U = 0.0;                // tail start; 0 selects 200 m
    double stability_tol = 1e-4;   // relative change of P1 under U -> 2U
    int max_doublings = 6;
};

/// phi(u) = int_0^u s^(mu1-1) eta ds / int_0^inf s^(mu1-1) eta ds.
class CapitalStockSolution {
   public:
    CapitalStockSolution(const ModelParams& params, CapitalStockOptions options = {});

    double P1() const noexcept { return P1_; }
    double U() const noexcept { return U_; }
    double tail_constant() const noexcept { return tail_C_; }
    /// P1 relative change over the last U doubling.
    double stability() const noexcept { return stability_; }
    /// Relative discrepancy of the tail constant calibrated at U and U/2,
    /// scaled by the tail's share of the full integral.
    double error_estimate() const noexcept { return error_estimate_; }
    const CapitalStockExpansion& expansion() const noexcept { return expansion_; }
    const Trajectory& eta_trajectory() const noexcept { return eta_; }

    /// Valid for all u >= 0; beyond U uses the power-law tail.
    PhiJet eval(double u) const;
    /// Unnormalized int_0^u s^(mu1-1) eta(s) ds.
    double weighted_integral(double u) const;

   private:
    double tail_integral(double from) const;
    /// Asymptotic series of eta u^d2 / C in powers of m/u, summed at u.
    double tail_shape(double u) const;
    void build_cumulative();
    double panel_integral(double lo, double hi) const;

    ModelParams params_;
    CapitalStockExpansion expansion_;
    Trajectory eta_;
    std::vector<double> cumulative_;  // weighted integral at each eta node
    double U_ = 0.0;
    double tail_C_ = 0.0;
    std::vector<double> tail_series_;  // coefficients of u^-n, optimally truncated at U
    double P1_ = 0.0;
    double stability_ = 0.0;
    double error_estimate_ = 0.0;
};

/// Samples the capital-stock solution onto `grid`.
SolutionGrid phi_capital_stock(const ModelParams& params, const std::vector<double>& grid,
                               CapitalStockOptions options = {});

}  // namespace ruinlab
