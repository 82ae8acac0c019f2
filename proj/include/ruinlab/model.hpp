#pragma once

#include <string_view>

namespace ruinlab {

/// Parameters of the surplus process with investment:
/// dX = (aX + c) dt + bX dw - dS, claims of rate lambda with mean size m.
class ModelParams {
   public:
    /// Throws InvalidParams unless a, b, c >= 0 and lambda, m > 0 (all finite).
    ModelParams(double a, double b, double c, double lambda, double m);

    double a() const noexcept { return a_; }
    double b() const noexcept { return b_; }
    double c() const noexcept { return c_; }
    double lambda() const noexcept { return lambda_; }
    double m() const noexcept { return m_; }

    /// 2a/b^2; infinite when b == 0.
    double robustness() const noexcept;

    bool operator==(const ModelParams&) const = default;

   private:
    double a_, b_, c_, lambda_, m_;
};

enum class Regime { Main, ClassicalCL, RiskFree, CapitalStock, NoSolution };

enum class NoSolutionReason {
    None,
    SafetyLoadingNonpositive,  // a = b = 0 and c <= lambda m
    SharesNotRobust,           // b > 0 and 2a/b^2 < 1
    BorderlineRobustness,      // b > 0 and 2a/b^2 == 1
};

struct Classification {
    Regime regime;
    NoSolutionReason reason = NoSolutionReason::None;

    bool operator==(const Classification&) const = default;
};

std::string_view to_string(Regime regime) noexcept;
std::string_view to_string(NoSolutionReason reason) noexcept;

/// Zero tests are exact: degenerate regimes need literal zeros.
Classification classify_regime(const ModelParams& params);

/// Share characteristics and the fraction alpha of surplus held in shares;
/// the rest earns the risk-free rate r.
class PortfolioSpec {
   public:
    PortfolioSpec(double mu, double sigma, double r, double alpha);

    double mu() const noexcept { return mu_; }
    double sigma() const noexcept { return sigma_; }
    double r() const noexcept { return r_; }
    double alpha() const noexcept { return alpha_; }

   private:
    double mu_, sigma_, r_, alpha_;
};

/// a = alpha mu + (1 - alpha) r, b = alpha sigma.
ModelParams effective_params(const PortfolioSpec& portfolio, double c, double lambda, double m);

struct LoadingSigns {
    int safety_loading;  // sign of c - lambda m
    int concavity;       // sign of m (a - lambda) + c; >= 0 means concave solution
};

LoadingSigns safety_loading_sign(const ModelParams& params) noexcept;

}  // namespace ruinlab
