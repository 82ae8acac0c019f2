#include "ruinlab/solver.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "ruinlab/closed_form.hpp"
#include "ruinlab/error.hpp"
#include "ruinlab/ode.hpp"

namespace ruinlab {

double phi_second_derivative_at_zero(const ModelParams& p, double C0) {
    if (!(p.c() > 0.0)) throw InvalidParams("phi''(0) requires c > 0");
    return (p.lambda() - p.a() - p.c() / p.m()) * p.lambda() * C0 / (p.c() * p.c());
}

namespace {

struct MainPipeline {
    SeriesExpansion series;
    Trajectory trajectory;  // unnormalized, phi(0) = 1
    double scale;           // 1/A
    double K;
    double p;               // 2a/b^2

    PhiJet eval(double u) const {
        if (!(u >= 0.0)) throw std::domain_error("solution evaluated at negative u");
        if (u <= series.u0()) return series.eval(scale, u);
        if (u <= trajectory.u_end()) {
            std::array<double, 3> y{};
            trajectory.at(u, y);
            return {scale * y[0], scale * y[1], scale * y[2]};
        }
        const double tail = K * std::pow(u, 1.0 - p);
        return {1.0 - tail, (p - 1.0) * tail / u, -p * (p - 1.0) * tail / (u * u)};
    }
};

// Limit of phi at infinity from phi' ~ d u^-p.
double limit_estimate(const Trajectory& tr, double u, double p) {
    std::array<double, 3> y{};
    tr.at(u, y);
    return y[0] + y[1] * u / (p - 1.0);
}

SolutionGrid wrap_closed_form(const ClosedFormSolution& closed, const std::vector<double>& grid) {
    auto shared = std::make_shared<const ClosedFormSolution>(closed);
    SolutionGrid out;
    out.regime = closed.regime();
    out.params = closed.params();
    out.C0 = closed.C0();
    out.evaluate = [shared](double u) { return shared->eval(u); };
    out.span_end = std::numeric_limits<double>::infinity();
    sample(out, grid);
    return out;
}

SolutionGrid zero_solution(const ModelParams& params, NoSolutionReason reason, const std::vector<double>& grid) {
    SolutionGrid out;
    out.regime = Regime::NoSolution;
    out.reason = reason;
    out.params = params;
    out.C0 = 0.0;
    out.evaluate = [](double) { return PhiJet{}; };
    out.span_end = std::numeric_limits<double>::infinity();
    sample(out, grid);
    return out;
}

}  // namespace

SolutionGrid solve_main(const ModelParams& params, const SolveOptions& options) {
    if (classify_regime(params).regime != Regime::Main)
        throw RegimeMismatch("solve_main requires b > 0, c > 0 and 2a/b^2 > 1");
    const auto grid = make_grid(options.grid);
    const double p = params.robustness();

    auto series = series_coeffs_main(params, options.series_order, options.series_tol);
    const double u0 = series.u0();
    const PhiJet start = series.eval(1.0, u0);
    const std::array<double, 3> y0 = {start.phi, start.dphi, start.ddphi};

    double U = options.U > 0.0 ? options.U : 200.0 * params.m();
    U = std::max({U, grid.back(), 2.0 * u0});
    const auto field = main_ode_field(params);
    auto trajectory = integrate(field, u0, y0, U, options.tol);

    double A = limit_estimate(trajectory, U, p);
    double stability = std::abs(A - limit_estimate(trajectory, 0.5 * U, p)) / std::abs(A);
    for (int i = 0; i < options.max_doublings && !(stability < options.stability_tol); ++i) {
        U *= 2.0;
        extend(trajectory, field, U, options.tol);
        A = limit_estimate(trajectory, U, p);
        stability = std::abs(A - limit_estimate(trajectory, 0.5 * U, p)) / std::abs(A);
    }
    if (!(A > 0.0)) throw NumericalFailure("limit of the unnormalized solution is not positive");
    if (!(stability < options.stability_tol))
        throw NumericalFailure("limit estimate did not stabilize under U doubling");

    const double dphi_U = trajectory.component(U, 1);
    const double K_hat = dphi_U * std::pow(U, p) / (p - 1.0);

    auto pipeline = std::make_shared<const MainPipeline>(
        MainPipeline{std::move(series), std::move(trajectory), 1.0 / A, K_hat / A, p});

    SolutionGrid out;
    out.regime = Regime::Main;
    out.params = params;
    out.C0 = 1.0 / A;
    out.tail = TailFit{A, K_hat / A, 1.0 - p, U, stability};
    out.diagnostics.u0 = u0;
    out.diagnostics.order = pipeline->series.order();
    out.diagnostics.u0_fallback = pipeline->series.u0_fallback();
    out.diagnostics.U = U;
    out.diagnostics.tolerances = options.tol;
    out.diagnostics.steps = pipeline->trajectory.steps();
    out.diagnostics.error_estimate = stability;
    out.evaluate = [pipeline](double u) { return pipeline->eval(u); };
    out.span_end = std::numeric_limits<double>::infinity();
    sample(out, grid);
    return out;
}

SolutionGrid solve(const ModelParams& params, const SolveOptions& options) {
    const auto cls = classify_regime(params);
    switch (cls.regime) {
        case Regime::Main:
            return solve_main(params, options);
        case Regime::ClassicalCL:
            return wrap_closed_form(classical_exact(params), make_grid(options.grid));
        case Regime::RiskFree:
            return wrap_closed_form(riskfree_exact(params), make_grid(options.grid));
        case Regime::CapitalStock: {
            CapitalStockOptions cs;
            cs.tol = options.capital_stock_tol;
            cs.U = options.U;
            cs.stability_tol = options.stability_tol;
            cs.max_doublings = options.max_doublings;
            return phi_capital_stock(params, make_grid(options.grid), cs);
        }
        case Regime::NoSolution:
            break;
    }
    switch (cls.reason) {
        case NoSolutionReason::SafetyLoadingNonpositive:
            throw NoSolution("no solution: c <= lambda*m");
        case NoSolutionReason::BorderlineRobustness:
            throw Refused("refused: 2a/b^2 = 1 (borderline robustness)");
        default:
            return zero_solution(params, cls.reason, make_grid(options.grid));
    }
}

}  // namespace ruinlab
