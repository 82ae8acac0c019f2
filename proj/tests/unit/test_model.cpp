#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <limits>

#include "ruinlab/error.hpp"
#include "ruinlab/model.hpp"
#include "support.hpp"

using namespace ruinlab;
using support::Gen;

TEST_CASE("parameter validation") {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    const double inf = std::numeric_limits<double>::infinity();
    CHECK_NOTHROW(ModelParams(0, 0, 0, 0.09, 1));
    CHECK_THROWS_AS(ModelParams(-0.01, 0.1, 0.1, 0.09, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, -0.1, 0.1, 0.09, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, 0.1, -0.1, 0.09, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, 0.1, 0.1, 0.0, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, 0.1, 0.1, 0.09, 0.0), InvalidParams);
    CHECK_THROWS_AS(ModelParams(nan, 0.1, 0.1, 0.09, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, 0.1, inf, 0.09, 1), InvalidParams);
    CHECK_THROWS_AS(ModelParams(0.02, 0.1, 0.1, 0.09, nan), InvalidParams);
}

TEST_CASE("robustness ratio") {
    CHECK(support::fig1_II().robustness() == doctest::Approx(4.0));
    CHECK(std::isinf(support::fig1_I().robustness()));
}

TEST_CASE("classify_regime examples") {
    CHECK(classify_regime(support::fig1_II()) == Classification{Regime::Main});
    CHECK(classify_regime(support::fig1_I()) == Classification{Regime::ClassicalCL});
    CHECK(classify_regime({0, 0, 0.05, 0.09, 1}) ==
          Classification{Regime::NoSolution, NoSolutionReason::SafetyLoadingNonpositive});
}

TEST_CASE("classify_regime covers every branch") {
    CHECK(classify_regime(support::fig3_I()).regime == Regime::RiskFree);
    CHECK(classify_regime(support::fig4_II()).regime == Regime::RiskFree);
    CHECK(classify_regime(support::fig5_I()).regime == Regime::CapitalStock);
    // c = lambda m exactly has no positive loading
    CHECK(classify_regime({0, 0, 0.09, 0.09, 1}).reason == NoSolutionReason::SafetyLoadingNonpositive);
    CHECK(classify_regime({0.004, 0.1, 0.1, 0.09, 1}) ==
          Classification{Regime::NoSolution, NoSolutionReason::SharesNotRobust});
    CHECK(classify_regime({0.005, 0.1, 0.1, 0.09, 1}) ==
          Classification{Regime::NoSolution, NoSolutionReason::BorderlineRobustness});
    CHECK(classify_regime({0.004, 0.1, 0.0, 0.09, 1}).reason == NoSolutionReason::SharesNotRobust);
    // a = b = c = 0: nothing offsets the claims
    CHECK(classify_regime({0, 0, 0, 0.09, 1}).reason == NoSolutionReason::SafetyLoadingNonpositive);
    // no literal zero, no degenerate regime
    CHECK(classify_regime({0.02, 1e-8, 0.1, 0.09, 1}).regime == Regime::Main);
    CHECK(classify_regime({1e-20, 1e-12, 0.1, 0.09, 1}).regime == Regime::Main);
}

TEST_CASE("classify_regime is total and deterministic") {
    Gen gen(1);
    for (int i = 0; i < 2000; ++i) {
        const double zero_mask = gen.uniform(0, 1);
        const double a = zero_mask < 0.3 ? 0.0 : gen.uniform(0, 0.3);
        const double b = gen.uniform(0, 1) < 0.3 ? 0.0 : gen.uniform(0, 0.5);
        const double c = gen.uniform(0, 1) < 0.3 ? 0.0 : gen.uniform(0, 0.3);
        const ModelParams p(a, b, c, gen.uniform(0.01, 1), gen.uniform(0.1, 5));
        const auto first = classify_regime(p);
        CHECK(first == classify_regime(p));
        CHECK((first.regime == Regime::NoSolution) == (first.reason != NoSolutionReason::None));
        if (b > 0 && p.robustness() > 1) CHECK(first.regime == (c > 0 ? Regime::Main : Regime::CapitalStock));
        if (b == 0 && a > 0) CHECK(first.regime == Regime::RiskFree);
    }
}

TEST_CASE("to_string") {
    CHECK(to_string(Regime::Main) == "Main");
    CHECK(to_string(NoSolutionReason::SafetyLoadingNonpositive) == "safety loading nonpositive");
    CHECK(to_string(NoSolutionReason::SharesNotRobust) == "shares not robust");
    CHECK(to_string(NoSolutionReason::BorderlineRobustness) == "borderline robustness");
}

TEST_CASE("effective_params examples") {
    const auto p = effective_params(PortfolioSpec(0.05, 0.2, 0.01, 0.5), 0.1, 0.09, 1);
    CHECK(p.a() == doctest::Approx(0.03).epsilon(1e-15));
    CHECK(p.b() == doctest::Approx(0.1).epsilon(1e-15));
    CHECK(p.c() == 0.1);
    CHECK(p.lambda() == 0.09);
    CHECK(p.m() == 1.0);

    const auto none = effective_params(PortfolioSpec(0.05, 0.2, 0.01, 0.0), 0.1, 0.09, 1);
    CHECK(none.a() == 0.01);
    CHECK(none.b() == 0.0);
    CHECK(classify_regime(none).regime == Regime::RiskFree);

    const auto all = effective_params(PortfolioSpec(0.05, 0.2, 0.01, 1.0), 0.1, 0.09, 1);
    CHECK(all.a() == 0.05);
    CHECK(all.b() == 0.2);
}

TEST_CASE("portfolio validation") {
    CHECK_THROWS_AS(PortfolioSpec(0.05, 0.2, 0.01, 1.5), InvalidParams);
    CHECK_THROWS_AS(PortfolioSpec(0.05, 0.2, 0.01, -0.1), InvalidParams);
    CHECK_THROWS_AS(PortfolioSpec(0.05, -0.2, 0.01, 0.5), InvalidParams);
    CHECK_THROWS_AS(PortfolioSpec(0.05, 0.2, -0.01, 0.5), InvalidParams);
}

TEST_CASE("effective_params property: interior alpha shrinks volatility") {
    Gen gen(2);
    for (int i = 0; i < 1000; ++i) {
        const double mu = gen.uniform(0, 0.3), sigma = gen.uniform(0.01, 1), r = gen.uniform(0, 0.1);
        const double alpha = gen.uniform(1e-6, 1 - 1e-6);
        const auto p = effective_params(PortfolioSpec(mu, sigma, r, alpha), 0.1, 0.09, 1);
        CHECK(p.b() < sigma);
        CHECK(p.a() >= std::min(mu, r) - 1e-15);
        CHECK(p.a() <= std::max(mu, r) + 1e-15);
    }
}

TEST_CASE("safety_loading_sign examples") {
    auto s = safety_loading_sign(support::fig1_II());
    CHECK(s.safety_loading == 1);
    CHECK(s.concavity == 1);
    s = safety_loading_sign(support::fig2_I());
    CHECK(s.safety_loading == -1);
    CHECK(s.concavity == -1);
    // c = lambda m and a = lambda: m (a - lambda) + c reduces to c > 0
    s = safety_loading_sign({0.09, 0.1, 0.09, 0.09, 1});
    CHECK(s.safety_loading == 0);
    CHECK(s.concavity == 1);
    // both boundaries at once need a + c/m = lambda and c = lambda m, i.e. a = 0
    s = safety_loading_sign({0.0, 0.1, 0.09, 0.09, 1});
    CHECK(s.safety_loading == 0);
    CHECK(s.concavity == 0);
}
