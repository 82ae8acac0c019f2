#include "ruinlab/capital_stock.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <memory>
#include <stdexcept>

#include "ruinlab/error.hpp"

namespace ruinlab {

namespace {

// 5-point Gauss-Legendre on [0, 1].
constexpr std::array<double, 5> gl_nodes = {0.5 - 0.5 * 0.9061798459386640, 0.5 - 0.5 * 0.5384693101056831, 0.5,
                                            0.5 + 0.5 * 0.5384693101056831, 0.5 + 0.5 * 0.9061798459386640};
constexpr std::array<double, 5> gl_weights = {0.5 * 0.2369268850561891, 0.5 * 0.4786286704993665,
                                              0.5 * 0.5688888888888889, 0.5 * 0.4786286704993665,
                                              0.5 * 0.2369268850561891};

void require_capital_stock(const ModelParams& p) {
    if (!(p.b() > 0.0)) throw RegimeMismatch("capital stock model requires b > 0");
}

}  // namespace

CapitalStockExponents capital_stock_exponents(const ModelParams& p) {
    require_capital_stock(p);
    const double b2 = p.b() * p.b();
    const double q = 0.5 - p.a() / b2;
    const double s = 2.0 * p.lambda() / b2;
    const double root = std::sqrt(q * q + s);
    // q + root cancels when q is large and negative.
    const double mu1 = q < 0.0 ? s / (root - q) : q + root;
    return {mu1, mu1 + p.a() / b2, mu1 + 2.0 * p.a() / b2 - 1.0};
}

std::vector<double> eta_series(const ModelParams& p, int order) {
    if (order < 2) throw std::invalid_argument("eta series order must be >= 2");
    const auto e = capital_stock_exponents(p);
    const double m = p.m();
    std::vector<double> P;
    P.reserve(static_cast<std::size_t>(order) - 1);
    double prev = 1.0;  // coefficient of u^0
    for (int k = 1; k < order; ++k) {
        prev = -prev * (k - 1 + e.d2) / (m * k * (k - 1 + 2.0 * e.d1));
        P.push_back(prev);
    }
    return P;
}

CapitalStockExpansion::CapitalStockExpansion(const ModelParams& params, int order, double tol)
    : exp_(capital_stock_exponents(params)), coeffs_(eta_series(params, order)), m_(params.m()) {
    // The series is entire; take the largest candidate where the last term
    // is below tol and the final third of the terms decreases.
    const double lo = 1e-3 * m_, hi = m_;
    constexpr int candidates = 31;
    const int N = order;
    u0_ = lo;
    for (int i = candidates - 1; i >= 0; --i) {
        const double u = lo * std::pow(hi / lo, static_cast<double>(i) / (candidates - 1));
        auto term = [&](int k) { return std::abs(coeffs_[static_cast<std::size_t>(k - 2)]) * std::pow(u, k - 1); };
        if (!(term(N) <= tol)) continue;
        bool decreasing = true;
        for (int k = std::max(3, N - (N - 1) / 3); k <= N && decreasing; ++k) decreasing = term(k) <= term(k - 1);
        if (decreasing) {
            u0_ = u;
            break;
        }
    }
}

std::pair<double, double> CapitalStockExpansion::eta(double u) const {
    if (!(u >= 0.0) || u > u0_) throw std::domain_error("eta series evaluated outside [0, u0]");
    double eta = 1.0, deta = 0.0, pw = 1.0;  // u^(k-1)
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const double k = static_cast<double>(j + 1);
        deta += k * coeffs_[j] * pw;
        pw *= u;
        eta += coeffs_[j] * pw;
    }
    return {eta, deta};
}

double CapitalStockExpansion::weighted_integral(double u) const {
    if (!(u >= 0.0) || u > u0_) throw std::domain_error("eta series evaluated outside [0, u0]");
    if (u == 0.0) return 0.0;
    const double mu1 = exp_.mu1;
    double sum = 1.0 / mu1, pw = 1.0;
    for (std::size_t j = 0; j < coeffs_.size(); ++j) {
        const double k = static_cast<double>(j + 1);
        pw *= u;
        sum += coeffs_[j] * pw / (mu1 + k);
    }
    return sum * std::pow(u, mu1);
}

Trajectory solve_eta(const CapitalStockExpansion& expansion, double u_max, Tolerances tol) {
    const auto& e = expansion.exponents();
    const double u0 = expansion.u0();
    if (!(u_max > u0)) throw std::invalid_argument("solve_eta: u_max must exceed u0");
    const auto [eta, deta] = expansion.eta(u0);
    const std::array<double, 2> y0 = {eta, deta};
    return integrate(eta_ode_field(e.d1, e.d2, expansion.m()), u0, y0, u_max, tol);
}

CapitalStockSolution::CapitalStockSolution(const ModelParams& params, CapitalStockOptions options)
    : params_(params), expansion_(params) {
    if (params.c() != 0.0) throw RegimeMismatch("capital stock model requires c = 0");
    if (!(params.robustness() > 1.0))
        throw NoSolution("no solution: 2a/b^2 <= 1, tail integral diverges");

    const auto& e = expansion_.exponents();
    const auto field = eta_ode_field(e.d1, e.d2, params.m());
    U_ = options.U > 0.0 ? options.U : 200.0 * params.m();
    U_ = std::max(U_, 2.0 * expansion_.u0());
    eta_ = solve_eta(expansion_, U_, options.tol);
    build_cumulative();

    auto denominator = [&] { return weighted_integral(U_) + tail_integral(U_); };
    double total = denominator();
    stability_ = std::numeric_limits<double>::infinity();
    for (int i = 0; i < options.max_doublings; ++i) {
        U_ *= 2.0;
        extend(eta_, field, U_, options.tol);
        build_cumulative();
        const double next = denominator();
        stability_ = std::abs(next - total) / std::abs(next);
        total = next;
        if (stability_ < options.stability_tol) break;
    }
    if (!(stability_ < options.stability_tol))
        throw NumericalFailure("capital stock normalization did not stabilize under U doubling");
    if (!(total > 0.0)) throw NumericalFailure("capital stock normalization is not positive");
    P1_ = 1.0 / total;

    const double half = 0.5 * U_;
    const double C_half = eta_.component(half, 0) * std::pow(half, e.d2) / tail_shape(half);
    const double tail = tail_integral(U_);
    error_estimate_ = std::abs(tail_C_ - C_half) / std::abs(tail_C_) * tail / total;
}

void CapitalStockSolution::build_cumulative() {
    const auto nodes = eta_.nodes();
    cumulative_.assign(nodes.size(), 0.0);
    for (std::size_t k = 0; k + 1 < nodes.size(); ++k)
        cumulative_[k + 1] = cumulative_[k] + panel_integral(nodes[k], nodes[k + 1]);
    const auto& e = expansion_.exponents();
    // 1F1(d2; 2d1; -z) ~ z^-d2 sum_n (d2)_n (d2 - 2d1 + 1)_n / n! z^-n
    tail_series_.assign(1, 1.0);
    const double m = params_.m();
    double term = 1.0;
    for (int n = 1; n <= 24; ++n) {
        const double next = term * (e.d2 + n - 1) * (e.d2 - 2.0 * e.d1 + n) / n * m;
        if (next == 0.0) break;
        if (std::abs(next) * std::pow(U_, -n) >= std::abs(term) * std::pow(U_, 1 - n)) break;
        tail_series_.push_back(next);
        term = next;
    }
    tail_C_ = eta_.node_state(eta_.steps())[0] * std::pow(U_, e.d2) / tail_shape(U_);
}

double CapitalStockSolution::tail_integral(double from) const {
    const double p = params_.robustness();
    double sum = 0.0;
    for (std::size_t n = 0; n < tail_series_.size(); ++n) {
        const double k = static_cast<double>(n);
        sum += tail_series_[n] * std::pow(from, 1.0 - p - k) / (p - 1.0 + k);
    }
    return tail_C_ * sum;
}

double CapitalStockSolution::tail_shape(double u) const {
    double sum = 0.0;
    for (std::size_t n = tail_series_.size(); n-- > 0;) sum = sum / u + tail_series_[n];
    return sum;
}

double CapitalStockSolution::weighted_integral(double u) const {
    const double u0 = expansion_.u0();
    if (u <= u0) return expansion_.weighted_integral(u);
    const double panel = expansion_.weighted_integral(u0);
    if (u > U_) return panel + cumulative_.back() + tail_integral(U_) - tail_integral(u);

    const std::size_t k = eta_.step_containing(u);
    return panel + cumulative_[k] + panel_integral(eta_.nodes()[k], u);
}

double CapitalStockSolution::panel_integral(double lo, double hi) const {
    // late steps are long; keep each Gauss panel within 10% of its left end
    const double mu1 = expansion_.exponents().mu1;
    const double width = hi - lo;
    if (!(width > 0.0)) return 0.0;
    const auto pieces = static_cast<std::size_t>(std::ceil(width / (0.1 * lo)));
    const double h = width / static_cast<double>(pieces);
    double total = 0.0;
    for (std::size_t i = 0; i < pieces; ++i) {
        const double a = lo + static_cast<double>(i) * h;
        double s = 0.0;
        for (std::size_t j = 0; j < gl_nodes.size(); ++j) {
            const double x = a + gl_nodes[j] * h;
            const double eta = eta_.component(x, 0);
            if (!(eta > 0.0)) throw NumericalFailure("eta crossed zero at u = " + std::to_string(x));
            s += gl_weights[j] * std::pow(x, mu1 - 1.0) * eta;
        }
        total += s * h;
    }
    return total;
}

PhiJet CapitalStockSolution::eval(double u) const {
    if (!(u >= 0.0)) throw std::domain_error("capital stock solution evaluated at negative u");
    const double mu1 = expansion_.exponents().mu1;
    const double phi = P1_ * weighted_integral(u);
    if (u > U_) {
        const double p = params_.robustness();
        const double d = P1_ * tail_C_ * std::pow(u, -p);
        double slope = 0.0;
        for (std::size_t n = 0; n < tail_series_.size(); ++n)
            slope -= (p + static_cast<double>(n)) * tail_series_[n] * std::pow(u, -static_cast<double>(n));
        return {phi, d * tail_shape(u), d * slope / u};
    }
    double eta, deta;
    if (u <= expansion_.u0()) {
        std::tie(eta, deta) = expansion_.eta(u);
    } else {
        const auto y = eta_.at(u);
        eta = y[0];
        deta = y[1];
    }
    const double w = std::pow(u, mu1 - 1.0);
    const double dphi = P1_ * w * eta;
    const double curvature = mu1 == 1.0 ? 0.0 : (mu1 - 1.0) * std::pow(u, mu1 - 2.0) * eta;
    return {phi, dphi, P1_ * (curvature + w * deta)};
}

SolutionGrid phi_capital_stock(const ModelParams& params, const std::vector<double>& grid,
                               CapitalStockOptions options) {
    auto sol = std::make_shared<const CapitalStockSolution>(params, options);
    const double p = params.robustness();

    SolutionGrid out;
    out.regime = Regime::CapitalStock;
    out.params = params;
    out.C0 = 0.0;
    out.P1 = sol->P1();
    out.tail = TailFit{1.0 / sol->P1(), sol->P1() * sol->tail_constant() / (p - 1.0), 1.0 - p, sol->U(),
                       sol->stability()};
    out.diagnostics.u0 = sol->expansion().u0();
    out.diagnostics.order = static_cast<int>(sol->expansion().coeffs().size()) + 1;
    out.diagnostics.U = sol->U();
    out.diagnostics.tolerances = options.tol;
    out.diagnostics.steps = sol->eta_trajectory().steps();
    out.diagnostics.error_estimate = sol->error_estimate();
    out.evaluate = [sol](double u) { return sol->eval(u); };
    out.span_end = std::numeric_limits<double>::infinity();
    sample(out, grid);
    return out;
}

}  // namespace ruinlab
