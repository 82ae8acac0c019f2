#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "ruinlab/model.hpp"

namespace support {

using ruinlab::ModelParams;

// Reference parameter sets; m = 1 and lambda = 0.09 throughout.
inline ModelParams fig1_I() { return {0.0, 0.0, 0.1, 0.09, 1.0}; }
inline ModelParams fig1_II() { return {0.02, 0.1, 0.1, 0.09, 1.0}; }
inline ModelParams fig2_I() { return {0.02, 0.1, 0.02, 0.09, 1.0}; }
inline ModelParams fig2_II() { return {0.1, 0.1, 0.02, 0.09, 1.0}; }
inline ModelParams fig3_I() { return {0.02, 0.0, 0.02, 0.09, 1.0}; }
inline ModelParams fig3_II() { return {0.1, 0.0, 0.02, 0.09, 1.0}; }
inline ModelParams fig4_I() { return {0.02, 0.0, 0.0, 0.09, 1.0}; }
inline ModelParams fig4_II() { return {0.1, 0.0, 0.0, 0.09, 1.0}; }
inline ModelParams fig5_I() { return {0.02, 0.1, 0.0, 0.09, 1.0}; }
inline ModelParams fig5_II() { return {0.1, 0.1, 0.0, 0.09, 1.0}; }

inline double rel_err(double x, double ref) { return std::abs(x - ref) / std::abs(ref); }

/// Seeded source of random parameter sets for property tests.
class Gen {
   public:
    explicit Gen(std::uint64_t seed) : rng_(seed) {}

    double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng_); }
    double log_uniform(double lo, double hi) { return std::exp(uniform(std::log(lo), std::log(hi))); }
    int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(rng_); }

    /// b > 0, c > 0 and 2a/b^2 in [1.5, 8].
    ModelParams main_params() {
        const double b = uniform(0.08, 0.3);
        const double a = uniform(0.75, 4.0) * b * b;
        return {a, b, uniform(0.02, 0.3), uniform(0.03, 0.3), uniform(0.5, 2.0)};
    }

    ModelParams classical_params() {
        const double lambda = uniform(0.03, 0.5), m = uniform(0.2, 3.0);
        return {0.0, 0.0, lambda * m * uniform(1.05, 3.0), lambda, m};
    }

    ModelParams riskfree_params(bool with_premium) {
        return {uniform(0.02, 0.3), 0.0, with_premium ? uniform(0.01, 0.3) : 0.0, uniform(0.03, 0.3),
                uniform(0.5, 2.0)};
    }

    /// c = 0, b > 0, 2a/b^2 in [1.5, 6].
    ModelParams capital_stock_params() {
        const double b = uniform(0.1, 0.3);
        const double a = uniform(0.75, 3.0) * b * b;
        return {a, b, 0.0, uniform(0.03, 0.3), uniform(0.5, 2.0)};
    }

    std::mt19937_64& engine() { return rng_; }

   private:
    std::mt19937_64 rng_;
};

}  // namespace support
