#pragma once

namespace ruinlab {

/// Upper incomplete gamma Gamma(p, z) = int_z^inf x^(p-1) e^-x dx for p > 0,
/// z >= 0. Lower-gamma power series below z = p + 1, Lentz continued
/// fraction above. Throws std::domain_error outside the domain.
double upper_incomplete_gamma(double p, double z);

/// Euler Gamma(p) for p > 0.
double complete_gamma(double p);

}  // namespace ruinlab
