#include "ruinlab/model.hpp"

#include <cmath>
#include <limits>
#include <string>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

void require(bool ok, const char* what) {
    if (!ok) throw InvalidParams(what);
}

int sign(double x) noexcept { return (x > 0.0) - (x < 0.0); }

}  // namespace

ModelParams::ModelParams(double a, double b, double c, double lambda, double m)
    : a_(a), b_(b), c_(c), lambda_(lambda), m_(m) {
    require(std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(lambda) &&
                std::isfinite(m),
            "model parameters must be finite");
    require(a >= 0.0, "a must be >= 0");
    require(b >= 0.0, "b must be >= 0");
    require(c >= 0.0, "c must be >= 0");
    require(lambda > 0.0, "lambda must be > 0");
    require(m > 0.0, "m must be > 0");
}

double ModelParams::robustness() const noexcept {
    if (b_ == 0.0) return std::numeric_limits<double>::infinity();
    return 2.0 * a_ / (b_ * b_);
}

std::string_view to_string(Regime regime) noexcept {
    switch (regime) {
        case Regime::Main: return "Main";
        case Regime::ClassicalCL: return "ClassicalCL";
        case Regime::RiskFree: return "RiskFree";
        case Regime::CapitalStock: return "CapitalStock";
        case Regime::NoSolution: return "NoSolution";
    }
    return "?";
}

std::string_view to_string(NoSolutionReason reason) noexcept {
    switch (reason) {
        case NoSolutionReason::None: return "none";
        case NoSolutionReason::SafetyLoadingNonpositive: return "safety loading nonpositive";
        case NoSolutionReason::SharesNotRobust: return "shares not robust";
        case NoSolutionReason::BorderlineRobustness: return "borderline robustness";
    }
    return "?";
}

Classification classify_regime(const ModelParams& p) {
    if (p.b() == 0.0) {
        if (p.a() == 0.0) {
            if (p.c() > p.lambda() * p.m()) return {Regime::ClassicalCL};
            return {Regime::NoSolution, NoSolutionReason::SafetyLoadingNonpositive};
        }
        return {Regime::RiskFree};
    }
    // 2a/b^2 = 1 up to rounding, so decimal inputs such as a = 0.005, b = 0.1 count.
    const double r = p.robustness();
    if (std::abs(r - 1.0) <= 8.0 * std::numeric_limits<double>::epsilon())
        return {Regime::NoSolution, NoSolutionReason::BorderlineRobustness};
    if (r < 1.0) return {Regime::NoSolution, NoSolutionReason::SharesNotRobust};
    return {p.c() > 0.0 ? Regime::Main : Regime::CapitalStock};
}

PortfolioSpec::PortfolioSpec(double mu, double sigma, double r, double alpha)
    : mu_(mu), sigma_(sigma), r_(r), alpha_(alpha) {
    require(std::isfinite(mu) && std::isfinite(sigma) && std::isfinite(r) && std::isfinite(alpha),
            "portfolio parameters must be finite");
    require(alpha >= 0.0 && alpha <= 1.0, "alpha must lie in [0, 1]");
    require(sigma >= 0.0, "sigma must be >= 0");
    require(r >= 0.0, "r must be >= 0");
}

ModelParams effective_params(const PortfolioSpec& p, double c, double lambda, double m) {
    const double a = p.alpha() * p.mu() + (1.0 - p.alpha()) * p.r();
    const double b = p.alpha() * p.sigma();
    return ModelParams(a, b, c, lambda, m);
}

LoadingSigns safety_loading_sign(const ModelParams& p) noexcept {
    return {sign(p.c() - p.lambda() * p.m()), sign(p.m() * (p.a() - p.lambda()) + p.c())};
}

}  // namespace ruinlab
