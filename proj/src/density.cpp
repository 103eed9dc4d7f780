#include "fpme/density.hpp"

#include <cmath>
#include <stdexcept>

namespace fpme {

const char* to_string(TailClass t) {
    switch (t) {
        case TailClass::A1: return "A1";
        case TailClass::A2: return "A2";
        case TailClass::A2star: return "A2star";
        case TailClass::bounded_only: return "bounded_only";
    }
    return "?";
}

double DensityProfile::value_r2(double r2) const {
    if (kind == DensityKind::constant || alpha == 0.0) return c;
    return c * std::pow(s0 * s0 + r2, -alpha / 2.0);
}

double DensityProfile::value(const double* x, int N) const {
    double r2 = x[0] * x[0];
    if (N == 2) r2 += x[1] * x[1];
    return value_r2(r2);
}

TailClass DensityProfile::tail_class(double sigma, int N) const {
    double a = (kind == DensityKind::constant) ? 0.0 : alpha;
    if (a < sigma) return TailClass::A1;
    if (a == sigma) return TailClass::bounded_only;
    return a > N ? TailClass::A2star : TailClass::A2;
}

double DensityProfile::c_hat(double Rhat) const {
    // rho(x)|x|^alpha = c (1 + s0^2/|x|^2)^(-alpha/2) increases in |x|,
    // so its value at |x| = Rhat bounds it from below beyond Rhat
    if (kind == DensityKind::constant || alpha == 0.0) return c;
    return c * std::pow(1.0 + s0 * s0 / (Rhat * Rhat), -alpha / 2.0);
}

double DensityProfile::c_check() const { return c; }

DensityProfile constant_density(double c) {
    if (!(c > 0.0)) throw std::invalid_argument("density level must be positive");
    return DensityProfile{DensityKind::constant, c, 0.0, 1.0};
}

DensityProfile power_tail_density(double c, double alpha, double s0) {
    if (!(c > 0.0)) throw std::invalid_argument("density level must be positive");
    if (!(alpha >= 0.0)) throw std::invalid_argument("tail exponent must be >= 0");
    if (!(s0 > 0.0)) throw std::invalid_argument("regularization scale must be positive");
    return DensityProfile{DensityKind::power_tail, c, alpha, s0};
}

ScalarField sample_density(const DensityProfile& profile, const Grid& grid) {
    ScalarField f(grid, 0.0, true);
    double x[2];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid.coords(i, x);
        f[i] = profile.value(x, grid.N);
    }
    return f;
}

}  // namespace fpme
