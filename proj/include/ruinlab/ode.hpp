#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "ruinlab/solution.hpp"

namespace ruinlab {

/// dy/du = rhs(u, y), written into the third argument.
struct OdeSystem {
    std::size_t dimension = 0;
    std::function<void(double, std::span<const double>, std::span<double>)> rhs;
    std::string name;

    std::vector<double> operator()(double u, std::span<const double> y) const;
};

struct IntegrateOptions {
    double initial_step = 0.0;  // 0 selects a starting step automatically
    std::size_t max_steps = 2'000'000;
};

/// Accepted steps of a Dormand-Prince 5(4) run with the pair's quartic
/// continuous extension. Node states are stored exactly; off-node queries
/// use the extension of the enclosing step.
class Trajectory {
   public:
    Trajectory() = default;

    std::size_t dimension() const noexcept { return dim_; }
    std::size_t steps() const noexcept { return nodes_.empty() ? 0 : nodes_.size() - 1; }
    double u_begin() const { return nodes_.front(); }
    double u_end() const { return nodes_.back(); }
    std::span<const double> nodes() const noexcept { return nodes_; }
    std::span<const double> node_state(std::size_t i) const;

    /// Dense output at u; throws std::out_of_range outside [u_begin, u_end].
    void at(double u, std::span<double> out) const;
    std::vector<double> at(double u) const;
    double component(double u, std::size_t i) const;

    /// Step index k such that nodes[k] <= u <= nodes[k+1].
    std::size_t step_containing(double u) const;

    /// Last accepted step size, used to resume integration.
    double last_step() const noexcept { return h_last_; }

   private:
    friend class DormandPrince;
    Trajectory(std::size_t dim, double u_start, std::span<const double> y0)
        : dim_(dim), nodes_{u_start}, states_(y0.begin(), y0.end()) {}
    friend Trajectory integrate(const OdeSystem&, double, std::span<const double>, double, Tolerances,
                                IntegrateOptions);

    std::size_t dim_ = 0;
    std::vector<double> nodes_;
    std::vector<double> states_;  // dim_ per node
    std::vector<double> dense_;   // 5 * dim_ per step
    double h_last_ = 0.0;
};

/// Adaptive explicit integration from u_start to u_end (u_end > u_start).
/// Every accepted step satisfies |err_i| <= atol + rtol max(|y_i|) per
/// component. Throws IntegrationError on step-size underflow or a
/// non-finite state.
Trajectory integrate(const OdeSystem& system, double u_start, std::span<const double> y0, double u_end,
                     Tolerances tol = {}, IntegrateOptions options = {});

/// Continues `trajectory` from its last node up to u_end.
void extend(Trajectory& trajectory, const OdeSystem& system, double u_end, Tolerances tol = {},
            IntegrateOptions options = {});

// Vector fields ---------------------------------------------------------------

/// Third-order ODE for phi with state (phi, phi', phi''); defined for u > 0.
OdeSystem main_ode_field(const ModelParams& params);

/// y' = (phi(u) - y)/m, whose solution from y(0) = 0 is the exponential
/// convolution (J_m phi)(u). `phi` must be defined on [lo, hi].
OdeSystem companion_volterra_field(double m, std::function<double(double)> phi, double lo, double hi);

/// Second-order ODE u^2 eta'' + (2 d1 + u/m) u eta' + (d2 u/m) eta = 0 with
/// state (eta, eta'); defined for u > 0.
OdeSystem eta_ode_field(const ModelParams& params);
OdeSystem eta_ode_field(double d1, double d2, double m);

}  // namespace ruinlab
