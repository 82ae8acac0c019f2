#pragma once

#include <array>
#include <cmath>
#include <memory>
#include <vector>

#include "ruinlab/ode.hpp"
#include "ruinlab/solver.hpp"
#include "ruinlab/verify.hpp"

namespace support {

struct DecayFit {
    double slope = 0.0;       // of log|r| against u
    double initial = 0.0;     // |r| just after the kick
    std::size_t samples = 0;
};

/// Kicks phi'' of the solved main-case curve by delta at u_kick and follows
/// the third-order ODE from there. The integro-differential residual of the
/// kicked curve then obeys r' = -r/m, so log|r| falls with slope -1/m.
/// The unkicked residual is subtracted to remove the common noise floor.
inline DecayFit g_residual_decay(const ruinlab::ModelParams& p, double u_kick, double delta, double span) {
    using namespace ruinlab;
    const SolutionGrid base = solve(p);
    const PhiJet at = base.evaluate(u_kick);
    const std::array<double, 3> y0{at.phi, at.dphi, at.ddphi + delta};
    auto kicked = std::make_shared<Trajectory>(
        integrate(main_ode_field(p), u_kick, y0, u_kick + span, {1e-12, 1e-16}));

    SolutionGrid composite = base;
    auto base_eval = base.evaluate;
    composite.evaluate = [base_eval, kicked, u_kick](double u) {
        if (u <= u_kick) return base_eval(u);
        const auto y = kicked->at(u);
        return PhiJet{y[0], y[1], y[2]};
    };
    composite.span_end = u_kick + span;

    std::vector<double> grid;
    const std::size_t n = 2000;
    for (std::size_t i = 0; i <= n; ++i) grid.push_back((u_kick + span) * static_cast<double>(i) / n);
    const auto r_kicked = ide_residual(composite, grid);
    const auto r_base = ide_residual(base, grid);

    DecayFit fit;
    fit.initial = 0.5 * p.b() * p.b() * u_kick * u_kick * std::abs(delta);
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i <= n; ++i) {
        const double u = grid[i];
        if (u < u_kick + 0.25 * p.m()) continue;
        const double diff = std::abs(r_kicked.residual[i] - r_base.residual[i]);
        if (!(diff > 1e-5 * fit.initial)) continue;  // stay well above rounding
        xs.push_back(u);
        ys.push_back(std::log(diff));
    }
    fit.samples = xs.size();
    if (xs.size() < 2) return fit;
    double mx = 0, my = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        mx += xs[i];
        my += ys[i];
    }
    mx /= static_cast<double>(xs.size());
    my /= static_cast<double>(xs.size());
    double sxy = 0, sxx = 0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        sxy += (xs[i] - mx) * (ys[i] - my);
        sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.slope = sxy / sxx;
    return fit;
}

}  // namespace support
