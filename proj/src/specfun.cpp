#include "ruinlab/specfun.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr int max_iterations = 10'000;

// gamma(p, z) by its power series; converges fast for z < p + 1.
double lower_gamma_series(double p, double z) {
    double ap = p;
    double term = 1.0 / p;
    double sum = term;
    for (int n = 0; n < max_iterations; ++n) {
        ap += 1.0;
        term *= z / ap;
        sum += term;
        if (std::abs(term) < std::abs(sum) * eps) return sum * std::exp(p * std::log(z) - z);
    }
    throw NumericalFailure("incomplete gamma series did not converge");
}

// Gamma(p, z) by the modified Lentz continued fraction; z >= p + 1.
double upper_gamma_fraction(double p, double z) {
    constexpr double tiny = std::numeric_limits<double>::min() / eps;
    double b = z + 1.0 - p;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i < max_iterations; ++i) {
        const double an = -i * (i - p);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < eps) return std::exp(p * std::log(z) - z) * h;
    }
    throw NumericalFailure("incomplete gamma continued fraction did not converge");
}

}  // namespace

double complete_gamma(double p) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("complete_gamma: p must be > 0");
    return std::tgamma(p);
}

double upper_incomplete_gamma(double p, double z) {
    if (!(p > 0.0) || !std::isfinite(p)) throw std::domain_error("upper_incomplete_gamma: p must be > 0");
    if (!(z >= 0.0)) throw std::domain_error("upper_incomplete_gamma: z must be >= 0");
    if (z == 0.0) return complete_gamma(p);
    if (std::isinf(z)) return 0.0;
    if (z < p + 1.0) return complete_gamma(p) - lower_gamma_series(p, z);
    return upper_gamma_fraction(p, z);
}

}  // namespace ruinlab
