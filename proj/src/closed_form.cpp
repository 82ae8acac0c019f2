#include "ruinlab/closed_form.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ruinlab/error.hpp"
#include "ruinlab/specfun.hpp"

namespace ruinlab {

namespace {

// log I(u) with I(u) = m^p e^(c/(a m)) Gamma(p, u/m + c/(a m)), p = lambda/a.
double log_Ic(const ModelParams& p, double u) {
    const double shape = p.lambda() / p.a();
    const double shift = p.c() / (p.a() * p.m());
    return shape * std::log(p.m()) + shift + std::log(upper_incomplete_gamma(shape, u / p.m() + shift));
}

}  // namespace

ClosedFormSolution classical_exact(const ModelParams& params) {
    if (params.a() != 0.0 || params.b() != 0.0) throw RegimeMismatch("classical_exact requires a = b = 0");
    if (!(params.c() > params.lambda() * params.m())) throw NoSolution("no solution: c <= lambda*m");
    ClosedFormSolution s(Regime::ClassicalCL, params);
    s.C0_ = 1.0 - params.lambda() * params.m() / params.c();
    return s;
}

ClosedFormSolution riskfree_exact(const ModelParams& params) {
    if (params.b() != 0.0) throw RegimeMismatch("riskfree_exact requires b = 0");
    if (!(params.a() > 0.0)) throw InvalidParams("riskfree_exact requires a > 0");
    ClosedFormSolution s(Regime::RiskFree, params);
    const double shape = params.lambda() / params.a();
    const double ic0 = std::exp(log_Ic(params, 0.0));
    const double boundary = params.c() > 0.0
                                ? (params.a() / params.lambda()) * std::pow(params.c() / params.a(), shape)
                                : 0.0;
    s.Ic0_ = ic0;
    s.normalizer_ = ic0 + boundary;
    s.log_normalizer_ = std::log(*s.normalizer_);
    s.C0_ = boundary / *s.normalizer_;
    return s;
}

std::optional<double> ClosedFormSolution::lundberg_coefficient() const {
    if (regime_ != Regime::ClassicalCL) return std::nullopt;
    const auto& p = params_;
    return (p.c() - p.lambda() * p.m()) / (p.m() * p.c());
}

PhiJet ClosedFormSolution::eval(double u) const {
    if (!(u >= 0.0)) throw std::domain_error("closed form evaluated at negative u");
    const auto& p = params_;
    if (regime_ == Regime::ClassicalCL) {
        const double R = *lundberg_coefficient();
        const double ruin = p.lambda() * p.m() / p.c() * std::exp(-R * u);
        return {1.0 - ruin, R * ruin, -R * R * ruin};
    }

    const double shape = p.lambda() / p.a();
    const double x = u + p.c() / p.a();
    const double phi = 1.0 - std::exp(log_Ic(p, u) - log_normalizer_);
    if (x > 0.0) {
        const double dphi = std::exp((shape - 1.0) * std::log(x) - u / p.m() - log_normalizer_);
        return {phi, dphi, dphi * ((shape - 1.0) / x - 1.0 / p.m())};
    }
    // c = 0 at u = 0: phi'(u) ~ u^(shape - 1) / N.
    const double inv_n = 1.0 / *normalizer_;
    const double dphi = std::pow(0.0, shape - 1.0) * inv_n;
    const double ddphi = shape == 1.0 ? -inv_n / p.m()
                                      : ((shape - 1.0) * std::pow(0.0, shape - 2.0) - std::pow(0.0, shape - 1.0) / p.m()) * inv_n;
    return {phi, dphi, ddphi};
}

double riskfree_tail(const ModelParams& params, double u) {
    const auto sol = riskfree_exact(params);
    const double M = params.m() / *sol.normalizer();
    const double shape = params.lambda() / params.a();
    return 1.0 - M * std::pow(u, shape - 1.0) * std::exp(-u / params.m());
}

}  // namespace ruinlab
