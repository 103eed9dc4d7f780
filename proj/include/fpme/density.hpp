#pragma once

#include "fpme/field.hpp"
#include "fpme/grid.hpp"

namespace fpme {

enum class DensityKind { constant, power_tail };

// Decay class of the density tail relative to the operator order sigma:
//   A1           alpha < sigma   (slow decay: mass is conserved)
//   bounded_only alpha == sigma  (borderline, no claim either way)
//   A2           alpha > sigma   (fast decay: mass can escape)
//   A2star       alpha > N       (very fast decay, subcase of A2)
enum class TailClass { A1, A2, A2star, bounded_only };

const char* to_string(TailClass t);

// rho(x) = c * (s0^2 + |x|^2)^(-alpha/2): strictly positive, continuous,
// smooth at the origin, asymptotically c|x|^(-alpha).
struct DensityProfile {
    DensityKind kind = DensityKind::constant;
    double c = 1.0;      // level
    double alpha = 0.0;  // tail exponent (0 for constant)
    double s0 = 1.0;     // regularization scale

    double value_r2(double r2) const;  // evaluate from |x|^2
    double value(const double* x, int N) const;

    TailClass tail_class(double sigma, int N) const;

    // constants realized by this profile in the two-sided tail comparison
    // c_hat * |x|^-alpha <= rho(x) for |x| >= Rhat,  rho(x) <= c_check * |x|^-alpha
    double c_hat(double Rhat) const;
    double c_check() const;
};

DensityProfile constant_density(double c);
DensityProfile power_tail_density(double c, double alpha, double s0);

ScalarField sample_density(const DensityProfile& profile, const Grid& grid);

}  // namespace fpme
