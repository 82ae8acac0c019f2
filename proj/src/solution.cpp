#include "ruinlab/solution.hpp"

#include <cmath>
#include <stdexcept>

namespace ruinlab {

std::vector<double> make_grid(const GridSpec& spec) {
    if (spec.points < 2) throw std::invalid_argument("grid needs at least 2 points");
    if (!(spec.u_max > 0.0) || !std::isfinite(spec.u_max)) throw std::invalid_argument("grid u_max must be > 0");
    const std::size_t n = spec.points;
    std::vector<double> u(n, 0.0);
    if (spec.spacing == Spacing::Uniform) {
        for (std::size_t i = 1; i < n; ++i) u[i] = spec.u_max * static_cast<double>(i) / static_cast<double>(n - 1);
    } else {
        for (std::size_t i = 1; i < n; ++i) {
            const double t = n == 2 ? 1.0 : static_cast<double>(i - 1) / static_cast<double>(n - 2);
            u[i] = spec.u_max * std::pow(10.0, -4.0 * (1.0 - t));
        }
    }
    u.back() = spec.u_max;
    return u;
}

void sample(SolutionGrid& s, const std::vector<double>& grid) {
    if (!s.evaluate) throw std::logic_error("solution has no evaluator");
    s.u = grid;
    s.phi.resize(grid.size());
    s.dphi.resize(grid.size());
    s.ddphi.resize(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) {
        if (i > 0 && !(grid[i] > grid[i - 1])) throw std::invalid_argument("grid must be strictly increasing");
        if (grid[i] > s.span_end) throw std::out_of_range("grid extends beyond the solution span");
        const PhiJet j = s.evaluate(grid[i]);
        s.phi[i] = j.phi;
        s.dphi[i] = j.dphi;
        s.ddphi[i] = j.ddphi;
    }
}

}  // namespace ruinlab
