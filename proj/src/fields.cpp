#include <cmath>
#include <stdexcept>
#include <string>

#include "ruinlab/capital_stock.hpp"
#include "ruinlab/error.hpp"
#include "ruinlab/ode.hpp"

namespace ruinlab {

namespace {

void require_positive_u(double u, const char* field) {
    if (!(u > 0.0)) throw std::domain_error(std::string(field) + ": singular at u <= 0");
}

}  // namespace

OdeSystem main_ode_field(const ModelParams& p) {
    if (!(p.b() > 0.0) || !(p.c() > 0.0)) throw RegimeMismatch("main_ode_field requires b > 0 and c > 0");
    const double a = p.a(), b2 = p.b() * p.b(), c = p.c(), lam = p.lambda(), m = p.m();
    auto rhs = [=](double u, std::span<const double> y, std::span<double> dy) {
        require_positive_u(u, "main_ode_field");
        const double lead = 0.5 * b2 * u * u;
        const double q2 = c + (b2 + a) * u + b2 * u * u / (2.0 * m);
        const double q1 = a - lam + c / m + a * u / m;
        dy[0] = y[1];
        dy[1] = y[2];
        dy[2] = -(q2 * y[2] + q1 * y[1]) / lead;
    };
    return {3, rhs, "main"};
}

OdeSystem companion_volterra_field(double m, std::function<double(double)> phi, double lo, double hi) {
    if (!(m > 0.0)) throw InvalidParams("companion_volterra_field: m must be > 0");
    auto rhs = [m, phi = std::move(phi), lo, hi](double u, std::span<const double> y, std::span<double> dy) {
        if (u < lo || u > hi)
            throw std::out_of_range("companion_volterra_field: u = " + std::to_string(u) + " outside phi span");
        dy[0] = (phi(u) - y[0]) / m;
    };
    return {1, rhs, "volterra"};
}

OdeSystem eta_ode_field(double d1, double d2, double m) {
    if (!(m > 0.0)) throw InvalidParams("eta_ode_field: m must be > 0");
    auto rhs = [=](double u, std::span<const double> y, std::span<double> dy) {
        require_positive_u(u, "eta_ode_field");
        dy[0] = y[1];
        dy[1] = -((2.0 * d1 + u / m) * y[1] / u + d2 * y[0] / (m * u));
    };
    return {2, rhs, "eta"};
}

OdeSystem eta_ode_field(const ModelParams& params) {
    const auto e = capital_stock_exponents(params);
    return eta_ode_field(e.d1, e.d2, params.m());
}

}  // namespace ruinlab
