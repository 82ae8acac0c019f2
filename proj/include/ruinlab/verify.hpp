#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "ruinlab/model.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab {

struct ResidualReport {
    std::vector<double> u;
    std::vector<double> residual;
    double sup_norm = 0.0;
    double sup_rel = 0.0;  // sup_norm / lambda
};

/// r(u) = (b^2/2) u^2 phi'' + (a u + c) phi' - lambda phi + lambda (J_m phi)(u)
/// with J_m phi obtained by integrating the companion Volterra ODE against
/// the solution's dense evaluator. `grid` must be sorted and start at >= 0.
ResidualReport ide_residual(const SolutionGrid& solution, std::span<const double> grid,
                            Tolerances tol = {1e-12, 1e-15});

struct McOptions {
    std::size_t n_paths = 100'000;
    double T = 0.0;   // 0: default_horizon(params)
    double dt = 0.0;  // 0: default_time_step(params)
    std::uint64_t seed = 42;
    unsigned threads = 0;  // 0: hardware concurrency
};

struct McEstimate {
    double u = 0.0;
    std::size_t n_paths = 0;
    double T = 0.0;
    double dt = 0.0;
    std::uint64_t seed = 0;
    double p_hat = 0.0;
    double std_error = 0.0;  // sqrt(p(1-p)/n)
};

/// Fraction of simulated surplus paths started at u that stay nonnegative up
/// to T. Each path draws from its own generator seeded by (seed, path index),
/// so the estimate does not depend on the thread count.
McEstimate mc_survival(const ModelParams& params, double u, const McOptions& options = {});

/// 400 / min(lambda, 1/m, r) where r is the net drift rate (c - lambda m)/m
/// in the classical regime. A thin loading makes ruin late, so the horizon
/// must scale with it there; with investment income the other two rates bound
/// the time scale.
double default_horizon(const ModelParams& params);

/// 0.01 / max(lambda, 1/m, a, b^2).
double default_time_step(const ModelParams& params);

struct HorizonCheck {
    McEstimate at_T;
    McEstimate at_2T;
    bool stable = false;  // |p(2T) - p(T)| within one combined standard error
};

/// Runs the estimator at T and 2T with the same seed.
HorizonCheck mc_horizon_check(const ModelParams& params, double u, const McOptions& options = {});

/// true when the surplus path started at u survives to T. Exposed for tests.
bool simulate_path(const ModelParams& params, double u, double T, double dt, std::uint64_t seed,
                   std::uint64_t path);

struct TailExponentFit {
    double slope = 0.0;
    double K = 0.0;
    std::size_t samples = 0;
};

/// Least squares of log(1 - phi) on log u over [lo, hi] (log-spaced samples).
/// Throws NumericalFailure if 1 - phi <= floor anywhere in the window.
TailExponentFit tail_exponent(const std::function<double(double)>& phi, double lo, double hi,
                              double floor = 1e-11, std::size_t samples = 64);

/// Rejects regimes whose tail is exponential rather than a power law.
TailExponentFit tail_exponent(const SolutionGrid& solution, double lo, double hi, double floor = 1e-11,
                              std::size_t samples = 64);

}  // namespace ruinlab
