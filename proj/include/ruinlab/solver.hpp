#pragma once

#include <vector>

#include "ruinlab/capital_stock.hpp"
#include "ruinlab/model.hpp"
#include "ruinlab/series.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab {

struct SolveOptions {
    GridSpec grid{};
    Tolerances tol{};
    int series_order = default_series_order;
    double series_tol = default_series_tol;
    double U = 0.0;                // tail matching abscissa; 0 selects 200 m
    double stability_tol = 1e-4;   // relative change of A between U/2 and U
    int max_doublings = 6;
    /// eta decays like u^-d2 with d2 up to ~2a/b^2, so the capital stock
    /// integration runs under relative control only.
    Tolerances capital_stock_tol{1e-11, 1e-250};
};

/// phi''(0+) = (lambda - a - c/m) lambda C0 / c^2. Requires c > 0.
double phi_second_derivative_at_zero(const ModelParams& params, double C0);

/// Main regime: series transfer to u0, one integration of the third-order
/// ODE with phi(0) = 1, limit A at infinity from the leading tail term, then
/// rescaling by 1/A.
SolutionGrid solve_main(const ModelParams& params, const SolveOptions& options = {});

/// Dispatches on classify_regime. Nonrobust shares give the zero solution;
/// nonpositive classical safety loading throws NoSolution; borderline
/// robustness throws Refused.
SolutionGrid solve(const ModelParams& params, const SolveOptions& options = {});

}  // namespace ruinlab
