#pragma once

#include <functional>
#include <vector>

namespace fpme {

// Whole-space function handed to the singular-integral evaluator. The
// evaluator needs to know the limit at infinity to close the tail of the
// integral analytically; `scale` is the characteristic length of variation
// (it sets the finite-difference step of the near-field Taylor term).
struct AnalyticFunction {
    int N = 1;
    std::function<double(const double*)> eval;
    double limit_at_infinity = 0.0;
    bool has_limit = true;
    double scale = 1.0;
};

// Radial quadrature layout for the principal-value integral: the ball
// |z - x| < eps is handled by second-order Taylor cancellation, geometric
// Gauss panels cover [eps, X] (near panels up to the geometric midpoint, far
// panels beyond), and the tail past X is closed analytically assuming the
// function has settled at its limit. kink_radii lists spheres |z| = c where
// the integrand loses smoothness (e.g. cutoff seams); panel edges are placed
// on them.
struct QuadratureSpec {
    double eps = 1e-5;
    double X = 50.0;
    int near_panels = 16;
    int far_panels = 16;
    int gauss_points = 32;
    int angular_points = 32;  // half-circle nodes, N=2 only
    std::vector<double> kink_radii;
};

QuadratureSpec default_quadrature(double scale);

// C_{N,sigma} = 2^(sigma-1) sigma Gamma((N+sigma)/2) / (pi^(N/2) Gamma(1-sigma/2))
double normalization_constant(int N, double sigma);

// C_{N,sigma} * P.V. integral of (f(x) - f(z)) / |x-z|^(N+sigma) dz.
// If f has no limit at infinity the tail is closed with limit 0 and
// *tail_flag (when given) is set: the result is then only an estimate.
double apply_singular_integral(const AnalyticFunction& f, const double* x,
                               double sigma, const QuadratureSpec& spec,
                               bool* tail_flag = nullptr);

// |A[phi_R](x) - R^(-sigma) A[phi_1](x/R)| with both sides evaluated through
// apply_singular_integral on deliberately different quadrature layouts, so
// the scaling identity is checked rather than reproduced arithmetically.
double cutoff_scaling_residual(double R, const double* x, int N, double sigma,
                               const QuadratureSpec& spec);

}  // namespace fpme
