#pragma once

#include <cstddef>
#include <functional>
#include <optional>
#include <vector>

#include "ruinlab/model.hpp"

namespace ruinlab {

/// phi and its first two derivatives at one abscissa.
struct PhiJet {
    double phi = 0.0;
    double dphi = 0.0;
    double ddphi = 0.0;
};

struct Tolerances {
    double rtol = 1e-10;
    double atol = 1e-12;
};

/// Large-u behaviour 1 - phi(u) ~ K u^exponent.
struct TailFit {
    double A = 0.0;  // limit of the unnormalized solution
    double K = 0.0;
    double exponent = 0.0;
    double U = 0.0;  // abscissa where the tail was matched
    double stability = 0.0;  // relative change of A between U/2 and U
};

struct Diagnostics {
    double u0 = 0.0;
    int order = 0;
    bool u0_fallback = false;
    double U = 0.0;
    Tolerances tolerances{};
    std::size_t steps = 0;
    double error_estimate = 0.0;
};

enum class Spacing { Uniform, Log };

struct GridSpec {
    double u_max = 100.0;
    std::size_t points = 201;
    Spacing spacing = Spacing::Uniform;
};

/// Nodes start at 0 and end at u_max. Log spacing puts the first interior
/// node at u_max * 1e-4.
std::vector<double> make_grid(const GridSpec& spec);

struct SolutionGrid {
    Regime regime = Regime::NoSolution;
    NoSolutionReason reason = NoSolutionReason::None;
    ModelParams params{0.0, 0.0, 0.0, 1.0, 1.0};

    std::vector<double> u;
    std::vector<double> phi;
    std::vector<double> dphi;
    std::vector<double> ddphi;

    double C0 = 0.0;  // phi(0)
    std::optional<double> P1;  // capital stock normalization
    std::optional<TailFit> tail;
    Diagnostics diagnostics{};

    /// Dense evaluation on [0, span_end]; span_end is infinite when the
    /// evaluator carries an asymptotic tail.
    std::function<PhiJet(double)> evaluate;
    double span_end = 0.0;

    bool ruin_certain() const noexcept { return regime == Regime::NoSolution; }
};

/// Fills u/phi/dphi/ddphi from `evaluate`.
void sample(SolutionGrid& solution, const std::vector<double>& grid);

}  // namespace ruinlab
