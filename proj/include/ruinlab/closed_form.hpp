#pragma once

#include <optional>

#include "ruinlab/model.hpp"
#include "ruinlab/solution.hpp"

namespace ruinlab {

/// Exact survival probability for the two b = 0 regimes.
///
/// ClassicalCL: phi(u) = 1 - (lambda m/c) exp(-R u), R = (c - lambda m)/(m c).
///
/// RiskFree: phi(u) = 1 - I(u)/N with
///   I(u) = int_u^inf (x + c/a)^(lambda/a - 1) e^(-x/m) dx
///        = m^(lambda/a) e^(c/(a m)) Gamma(lambda/a, u/m + c/(a m)),
///   N    = I(0) + (a/lambda)(c/a)^(lambda/a).
/// For c = 0 and a > lambda the derivative at 0 is reported as +inf.
class ClosedFormSolution {
   public:
    Regime regime() const noexcept { return regime_; }
    const ModelParams& params() const noexcept { return params_; }
    double C0() const noexcept { return C0_; }

    PhiJet eval(double u) const;

    /// Lundberg coefficient, ClassicalCL only.
    std::optional<double> lundberg_coefficient() const;
    /// I(0) and N, RiskFree only.
    std::optional<double> Ic0() const { return Ic0_; }
    std::optional<double> normalizer() const { return normalizer_; }

   private:
    friend ClosedFormSolution classical_exact(const ModelParams&);
    friend ClosedFormSolution riskfree_exact(const ModelParams&);

    ClosedFormSolution(Regime regime, const ModelParams& params) : regime_(regime), params_(params) {}

    Regime regime_;
    ModelParams params_;
    double C0_ = 0.0;
    std::optional<double> Ic0_;
    std::optional<double> normalizer_;
    double log_normalizer_ = 0.0;
};

/// Throws NoSolution("no solution: c <= lambda*m") when the safety loading
/// is not positive, RegimeMismatch unless a = b = 0.
ClosedFormSolution classical_exact(const ModelParams& params);

/// Requires b = 0 and a > 0 (c >= 0).
ClosedFormSolution riskfree_exact(const ModelParams& params);

/// Large-u approximant 1 - M u^(lambda/a - 1) e^(-u/m), M = m/N.
double riskfree_tail(const ModelParams& params, double u);

}  // namespace ruinlab
