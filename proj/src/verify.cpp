#include "ruinlab/verify.hpp"

#include <algorithm>
#include <array>
#include <boost/random/normal_distribution.hpp>
#include <cmath>
#include <random>
#include <stdexcept>
#include <thread>

#include "ruinlab/error.hpp"
#include "ruinlab/ode.hpp"

namespace ruinlab {

ResidualReport ide_residual(const SolutionGrid& solution, std::span<const double> grid, Tolerances tol) {
    if (!solution.evaluate) throw std::invalid_argument("ide_residual: solution has no evaluator");
    if (grid.empty()) throw std::invalid_argument("ide_residual: empty grid");
    if (!(grid.front() >= 0.0) || grid.back() > solution.span_end)
        throw std::out_of_range("ide_residual: grid outside the solution span");
    if (!std::is_sorted(grid.begin(), grid.end())) throw std::invalid_argument("ide_residual: grid must be sorted");

    const auto& p = solution.params;
    const double hi = grid.back();
    const auto& evaluate = solution.evaluate;

    Trajectory convolution;
    if (hi > 0.0) {
        auto field = companion_volterra_field(p.m(), [&evaluate](double u) { return evaluate(u).phi; }, 0.0, hi);
        const std::array<double, 1> y0 = {0.0};
        convolution = integrate(field, 0.0, y0, hi, tol);
    }

    ResidualReport report;
    report.u.assign(grid.begin(), grid.end());
    report.residual.reserve(grid.size());
    const double half_b2 = 0.5 * p.b() * p.b();
    for (double u : grid) {
        const PhiJet j = evaluate(u);
        const double J = u > 0.0 ? convolution.component(u, 0) : 0.0;
        double r;
        if (u == 0.0) {
            // u^2 phi'' and u phi' vanish at the origin in every regime.
            r = (p.c() > 0.0 ? p.c() * j.dphi : 0.0) - p.lambda() * j.phi;
        } else {
            r = half_b2 * u * u * j.ddphi + (p.a() * u + p.c()) * j.dphi - p.lambda() * j.phi + p.lambda() * J;
        }
        report.residual.push_back(r);
        report.sup_norm = std::max(report.sup_norm, std::abs(r));
    }
    report.sup_rel = report.sup_norm / p.lambda();
    return report;
}

bool simulate_path(const ModelParams& params, double u, double T, double dt, std::uint64_t seed,
                   std::uint64_t path) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(path), static_cast<std::uint32_t>(path >> 32)};
    std::mt19937_64 rng(seq);
    std::exponential_distribution<double> arrival(params.lambda());
    std::exponential_distribution<double> claim(1.0 / params.m());
    boost::random::normal_distribution<double> normal;

    const double a = params.a(), b = params.b(), c = params.c();
    double t = 0.0;
    double x = u;
    if (x < 0.0) return false;
    while (true) {
        const double next = t + arrival(rng);
        const double span = std::min(next, T) - t;
        if (b == 0.0) {
            if (a > 0.0) {
                const double g = std::exp(a * span);
                x = x * g + c * (g - 1.0) / a;
            } else {
                x += c * span;
            }
        } else if (span > 0.0) {
            const auto steps = static_cast<std::size_t>(std::ceil(span / dt));
            const double h = span / static_cast<double>(steps);
            const double drift = a * h, vol = b * std::sqrt(h), inflow = c * h;
            for (std::size_t i = 0; i < steps; ++i) {
                x += drift * x + inflow + vol * x * normal(rng);
                if (x < 0.0) return false;
            }
        }
        if (next > T) return true;
        x -= claim(rng);
        if (x < 0.0) return false;
        t = next;
    }
}

double default_horizon(const ModelParams& params) {
    double rate = std::min(params.lambda(), 1.0 / params.m());
    if (classify_regime(params).regime == Regime::ClassicalCL)
        rate = std::min(rate, (params.c() - params.lambda() * params.m()) / params.m());
    return 400.0 / rate;
}

double default_time_step(const ModelParams& params) {
    const double b2 = params.b() * params.b();
    return 0.01 / std::max({params.lambda(), 1.0 / params.m(), params.a(), b2});
}

McEstimate mc_survival(const ModelParams& params, double u, const McOptions& given) {
    McOptions options = given;
    if (options.T == 0.0) options.T = default_horizon(params);
    if (options.dt == 0.0) options.dt = default_time_step(params);
    if (options.n_paths < 1) throw std::invalid_argument("mc_survival: n_paths must be >= 1");
    if (!(options.T > 0.0) || !(options.dt > 0.0)) throw std::invalid_argument("mc_survival: T and dt must be > 0");
    if (!(u >= 0.0) || !std::isfinite(u)) throw std::invalid_argument("mc_survival: u must be >= 0");

    const std::size_t n = options.n_paths;
    unsigned threads = options.threads ? options.threads : std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, n));

    std::vector<std::size_t> survivors(threads, 0);
    auto work = [&](unsigned w) {
        const std::size_t begin = n * w / threads, end = n * (w + 1) / threads;
        std::size_t count = 0;
        for (std::size_t i = begin; i < end; ++i)
            count += simulate_path(params, u, options.T, options.dt, options.seed, i) ? 1 : 0;
        survivors[w] = count;
    };
    if (threads == 1) {
        work(0);
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < threads; ++w) pool.emplace_back(work, w);
    }

    std::size_t total = 0;
    for (auto s : survivors) total += s;
    McEstimate est;
    est.u = u;
    est.n_paths = n;
    est.T = options.T;
    est.dt = options.dt;
    est.seed = options.seed;
    est.p_hat = static_cast<double>(total) / static_cast<double>(n);
    est.std_error = std::sqrt(est.p_hat * (1.0 - est.p_hat) / static_cast<double>(n));
    return est;
}

HorizonCheck mc_horizon_check(const ModelParams& params, double u, const McOptions& options) {
    HorizonCheck check;
    check.at_T = mc_survival(params, u, options);
    McOptions doubled = options;
    doubled.T = 2.0 * check.at_T.T;
    doubled.dt = check.at_T.dt;
    check.at_2T = mc_survival(params, u, doubled);
    const double se = std::hypot(check.at_T.std_error, check.at_2T.std_error);
    check.stable = std::abs(check.at_2T.p_hat - check.at_T.p_hat) <= se;
    return check;
}

TailExponentFit tail_exponent(const std::function<double(double)>& phi, double lo, double hi, double floor,
                              std::size_t samples) {
    if (!(lo > 0.0) || !(hi > lo)) throw std::invalid_argument("tail_exponent: need 0 < lo < hi");
    if (samples < 2) throw std::invalid_argument("tail_exponent: need at least 2 samples");
    std::vector<double> x(samples), y(samples);
    for (std::size_t i = 0; i < samples; ++i) {
        const double u = lo * std::pow(hi / lo, static_cast<double>(i) / static_cast<double>(samples - 1));
        const double gap = 1.0 - phi(u);
        if (!(gap > floor))
            throw NumericalFailure("tail_exponent: 1 - phi below the noise floor at u = " + std::to_string(u));
        x[i] = std::log(u);
        y[i] = std::log(gap);
    }
    double mx = 0.0, my = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        mx += x[i];
        my += y[i];
    }
    mx /= static_cast<double>(samples);
    my /= static_cast<double>(samples);
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < samples; ++i) {
        sxy += (x[i] - mx) * (y[i] - my);
        sxx += (x[i] - mx) * (x[i] - mx);
    }
    const double slope = sxy / sxx;
    return {slope, std::exp(my - slope * mx), samples};
}

TailExponentFit tail_exponent(const SolutionGrid& solution, double lo, double hi, double floor,
                              std::size_t samples) {
    if (solution.regime != Regime::Main && solution.regime != Regime::CapitalStock)
        throw RegimeMismatch("tail_exponent: power-law tail only exists for b > 0 (regime " +
                             std::string(to_string(solution.regime)) + ")");
    if (hi > solution.span_end) throw std::out_of_range("tail_exponent: window beyond the solution span");
    const auto& evaluate = solution.evaluate;
    return tail_exponent([&evaluate](double u) { return evaluate(u).phi; }, lo, hi, floor, samples);
}

}  // namespace ruinlab
