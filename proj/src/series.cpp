#include "ruinlab/series.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "ruinlab/error.hpp"

namespace ruinlab {

std::vector<double> main_series_coefficients(const ModelParams& p, int order) {
    if (order < 2) throw std::invalid_argument("series order must be >= 2");
    if (!(p.c() > 0.0)) throw RegimeMismatch("main series requires c > 0");
    const double a = p.a(), b2 = p.b() * p.b(), c = p.c(), lam = p.lambda(), m = p.m();

    // D_0 = 0 and D_1 = 1 turn the D_2 and D_3 formulas into instances of
    // the general two-term recurrence.
    std::vector<double> D(static_cast<std::size_t>(order) + 1, 0.0);
    D[1] = 1.0;
    for (int k = 2; k <= order; ++k) {
        const double kk = k;
        const double near = (kk - 1) * (kk - 2) * b2 / 2 + (kk - 1) * a - lam + c / m;
        const double far = ((kk - 3) * b2 / 2 + a) / m;
        D[k] = -(D[k - 1] * near + D[k - 2] * far) / (c * (kk - 1));
    }
    return {D.begin() + 2, D.end()};
}

U0Choice choose_u0(std::span<const double> coeffs, const ModelParams& p, double tol) {
    const int N = static_cast<int>(coeffs.size()) + 1;
    const double scale = p.lambda() / p.c();
    const double lo = 1e-4 * p.m();
    const double hi = 0.1 * p.m();
    constexpr int candidates = 61;
    const int tail_from = N - (N - 1) / 3;

    for (int i = candidates - 1; i >= 0; --i) {
        const double u = lo * std::pow(hi / lo, static_cast<double>(i) / (candidates - 1));
        auto term = [&](int k) { return std::abs(coeffs[k - 2]) * std::pow(u, k) / k; };
        if (!(term(N) * scale <= tol)) continue;
        bool decreasing = true;
        for (int k = std::max(3, tail_from); k <= N && decreasing; ++k) decreasing = term(k) <= term(k - 1);
        if (decreasing) return {u, false};
    }
    return {std::min(1e-3, p.m() / 100.0), true};
}

SeriesExpansion::SeriesExpansion(const ModelParams& params, std::vector<double> coeffs, U0Choice u0)
    : params_(params), coeffs_(std::move(coeffs)), u0_(u0.u0), fallback_(u0.fallback) {
    if (coeffs_.empty()) throw std::invalid_argument("SeriesExpansion needs at least D_2");
    if (!(u0_ > 0.0)) throw std::invalid_argument("SeriesExpansion: u0 must be > 0");
}

double SeriesExpansion::D(int k) const {
    if (k == 1) return 1.0;
    if (k < 1 || k > order()) throw std::out_of_range("series coefficient index");
    return coeffs_[static_cast<std::size_t>(k - 2)];
}

void SeriesExpansion::check_domain(double u) const {
    if (!(u >= 0.0) || u > u0_)
        throw std::domain_error("series evaluated at u = " + std::to_string(u) + " outside [0, u0]");
}

PhiJet SeriesExpansion::eval(double C0, double u) const {
    check_domain(u);
    const double scale = C0 * params_.lambda() / params_.c();
    double s0 = u, s1 = 1.0, s2 = 0.0;
    double pw = 1.0;  // u^(k-2)
    for (int k = 2; k <= order(); ++k) {
        const double d = coeffs_[static_cast<std::size_t>(k - 2)];
        s2 += (k - 1) * d * pw;
        s1 += d * pw * u;
        s0 += d * pw * u * u / k;
        pw *= u;
    }
    return {C0 + scale * s0, scale * s1, scale * s2};
}

double SeriesExpansion::third_derivative(double C0, double u) const {
    check_domain(u);
    const double scale = C0 * params_.lambda() / params_.c();
    double s3 = 0.0, pw = 1.0;  // u^(k-3)
    for (int k = 3; k <= order(); ++k) {
        s3 += (k - 1) * (k - 2) * coeffs_[static_cast<std::size_t>(k - 2)] * pw;
        pw *= u;
    }
    return scale * s3;
}

SeriesExpansion series_coeffs_main(const ModelParams& params, int order, double tol) {
    auto coeffs = main_series_coefficients(params, order);
    const auto u0 = choose_u0(coeffs, params, tol);
    return SeriesExpansion(params, std::move(coeffs), u0);
}

}  // namespace ruinlab
