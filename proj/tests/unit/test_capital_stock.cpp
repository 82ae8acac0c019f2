#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <boost/math/quadrature/tanh_sinh.hpp>
#include <boost/math/special_functions/hypergeometric_1F1.hpp>
#include <cmath>

#include "ruinlab/capital_stock.hpp"
#include "ruinlab/error.hpp"
#include "support.hpp"

using namespace ruinlab;
using support::Gen;
using support::rel_err;

namespace {

// eta solves Kummer's equation in -u/m.
double eta_exact(const CapitalStockExponents& e, double m, double u) {
    return boost::math::hypergeometric_1F1(e.d2, 2 * e.d1, -u / m);
}

// 1/P1 = int_0^inf s^(mu1-1) 1F1(d2; 2d1; -s/m) ds, a Mellin transform of 1F1.
double P1_exact(const CapitalStockExponents& e, double m) {
    const double log_integral = std::lgamma(e.mu1) + std::lgamma(2 * e.d1) + std::lgamma(e.d2 - e.mu1) -
                                std::lgamma(e.d2) - std::lgamma(2 * e.d1 - e.mu1) + e.mu1 * std::log(m);
    return std::exp(-log_integral);
}

}  // namespace

TEST_CASE("exponents example") {
    const auto e = capital_stock_exponents(support::fig5_I());
    CHECK(e.mu1 == doctest::Approx(3.0).epsilon(1e-14));
    CHECK(e.d1 == doctest::Approx(5.0).epsilon(1e-14));
    CHECK(e.d2 == doctest::Approx(6.0).epsilon(1e-14));
    CHECK_THROWS_AS(capital_stock_exponents(support::fig4_I()), RegimeMismatch);
}

TEST_CASE("exponents: small lambda and large robustness") {
    CHECK(capital_stock_exponents({0.02, 0.1, 0.0, 1e-12, 1}).mu1 == doctest::Approx(0.0).epsilon(1e-10));
    // a/b^2 = 1e6: the naive radical cancels catastrophically
    const double a = 1e4, b = 0.1, lambda = 0.09;
    // Newton on b^2/2 mu^2 + (a - b^2/2) mu - lambda = 0 from mu = 0
    const long double B = 0.5L * b * b, A = static_cast<long double>(a) - B;
    long double mu = 0.0L;
    for (int i = 0; i < 20; ++i) mu -= (B * mu * mu + A * mu - lambda) / (2.0L * B * mu + A);
    const auto e = capital_stock_exponents({a, b, 0.0, lambda, 1});
    CHECK(rel_err(e.mu1, static_cast<double>(mu)) < 1e-12);
    CHECK(e.mu1 > 0);
}

TEST_CASE("mu1 < 1 exactly when lambda < a") {
    for (double a : {0.01, 0.05, 0.2})
        for (double lambda = 0.005; lambda < 0.4; lambda *= 1.37) {
            const double b = std::sqrt(a);  // 2a/b^2 = 2
            const auto e = capital_stock_exponents({a, b, 0.0, lambda, 1});
            CHECK((e.mu1 < 1.0) == (lambda < a));
            CHECK(e.d1 == doctest::Approx(e.mu1 + a / (b * b)));
            CHECK(e.d2 == doctest::Approx(e.mu1 + 2 * a / (b * b) - 1));
        }
}

TEST_CASE("eta series examples") {
    const auto P = eta_series(support::fig5_I(), 10);
    REQUIRE(P.size() == 9);
    CHECK(P[0] == doctest::Approx(-0.6).epsilon(1e-14));
    CHECK(P[1] == doctest::Approx(0.6 * 7 / 22).epsilon(1e-14));
    for (std::size_t k = 1; k < P.size(); ++k) CHECK(P[k] * P[k - 1] < 0);
}

TEST_CASE("eta series matches the hypergeometric expansion") {
    Gen gen(51);
    for (int i = 0; i < 50; ++i) {
        const auto p = gen.capital_stock_params();
        const CapitalStockExpansion ex(p);
        const auto& e = ex.exponents();
        for (double f : {0.0, 0.3, 1.0}) {
            const double u = f * ex.u0();
            CHECK(rel_err(ex.eta(u).first, eta_exact(e, p.m(), u)) < 1e-13);
        }
        CHECK(ex.eta(0.0).first == 1.0);
        CHECK(ex.eta(0.0).second == doctest::Approx(ex.coeffs()[0]).epsilon(1e-15));
        CHECK_THROWS_AS(ex.eta(ex.u0() * 1.01), std::domain_error);
    }
}

TEST_CASE("termwise weighted integral against quadrature") {
    Gen gen(52);
    boost::math::quadrature::tanh_sinh<double> integrator;
    for (int i = 0; i < 30; ++i) {
        const auto p = gen.capital_stock_params();
        const CapitalStockExpansion ex(p);
        const auto& e = ex.exponents();
        const double u = ex.u0();
        const double ref = integrator.integrate(
            [&](double s) { return std::pow(s, e.mu1 - 1) * eta_exact(e, p.m(), s); }, 0.0, u);
        CHECK(rel_err(ex.weighted_integral(u), ref) < 1e-10);
    }
}

TEST_CASE("integrated eta against the hypergeometric function") {
    Gen gen(53);
    std::vector<ModelParams> cases = {support::fig5_I(), support::fig5_II()};
    for (int i = 0; i < 10; ++i) cases.push_back(gen.capital_stock_params());
    for (const auto& p : cases) {
        const CapitalStockExpansion ex(p);
        const auto t = solve_eta(ex, 50 * p.m(), {1e-11, 1e-250});
        for (double u : {ex.u0() * 1.5, 1.0, 5.0, 20.0, 50.0 * p.m()}) {
            if (u < t.u_begin() || u > t.u_end()) continue;
            CHECK(rel_err(t.component(u, 0), eta_exact(ex.exponents(), p.m(), u)) < 1e-8);
        }
    }
}

TEST_CASE("eta decays like u^-d2") {
    const auto p = support::fig5_I();
    const CapitalStockExpansion ex(p);
    const auto t = solve_eta(ex, 200.0, {1e-11, 1e-250});
    const double u = 200.0;
    const double slope = u * t.component(u, 1) / t.component(u, 0);
    CHECK(std::abs(slope + ex.exponents().d2) <= 0.05 * ex.exponents().d2);
}

TEST_CASE("P1 against the Mellin closed form") {
    const CapitalStockSolution I(support::fig5_I());
    CHECK(rel_err(I.P1(), 5.0 / 84.0) < 1e-7);
    const CapitalStockSolution II(support::fig5_II());
    CHECK(rel_err(II.P1(), 0.8609562572088) < 1e-7);

    Gen gen(54);
    for (int i = 0; i < 15; ++i) {
        const auto p = gen.capital_stock_params();
        const CapitalStockSolution s(p);
        CHECK(rel_err(s.P1(), P1_exact(s.expansion().exponents(), p.m())) < 1e-6);
        CHECK(s.stability() < 1e-3);
    }
}

TEST_CASE("solution shape") {
    for (const auto& p : {support::fig5_I(), support::fig5_II()}) {
        const CapitalStockSolution s(p);
        CHECK(s.eval(0.0).phi == 0.0);
        if (p.a() < p.lambda())
            CHECK(s.eval(0.0).dphi == 0.0);
        else
            CHECK(std::isinf(s.eval(0.0).dphi));
        double prev = 0.0;
        int sign_changes = 0;
        double prev_dd = s.eval(1e-6).ddphi;
        for (double u = 1e-3; u < 1e4; u *= 1.05) {
            const auto j = s.eval(u);
            CHECK(j.phi >= prev);
            CHECK(j.phi <= 1.0 + 1e-12);
            CHECK(j.dphi > 0.0);
            if (std::abs(j.ddphi) > 1e-12 && std::abs(prev_dd) > 1e-12 && (j.ddphi > 0) != (prev_dd > 0))
                ++sign_changes;
            if (std::abs(j.ddphi) > 1e-12) prev_dd = j.ddphi;
            prev = j.phi;
        }
        CHECK(s.eval(1e7).phi == doctest::Approx(1.0).epsilon(1e-9));
        CHECK(sign_changes == (p.a() < p.lambda() ? 1 : 0));
    }
}

TEST_CASE("weighted integral is positive and increasing") {
    const CapitalStockSolution s(support::fig5_II());
    double prev = 0.0;
    for (std::size_t i = 0; i < s.eta_trajectory().nodes().size(); ++i) {
        CHECK(s.eta_trajectory().node_state(i)[0] > 0.0);
        const double w = s.weighted_integral(s.eta_trajectory().nodes()[i]);
        CHECK(w >= prev);
        prev = w;
    }
}

TEST_CASE("sampled grid and errors") {
    const std::vector<double> grid{0.0, 1.0, 10.0, 100.0};
    const auto g = phi_capital_stock(support::fig5_I(), grid);
    CHECK(g.regime == Regime::CapitalStock);
    REQUIRE(g.P1);
    CHECK(rel_err(*g.P1, 5.0 / 84.0) < 1e-7);
    CHECK(g.C0 == 0.0);
    REQUIRE(g.tail);
    CHECK(g.tail->exponent == doctest::Approx(-3.0));
    CHECK(g.phi.size() == grid.size());
    CHECK_THROWS_AS(phi_capital_stock({0.004, 0.1, 0.0, 0.09, 1}, grid), NoSolution);
    CHECK_THROWS_AS(phi_capital_stock(support::fig1_II(), grid), RegimeMismatch);
}
