#pragma once

#include "fpme/density.hpp"
#include "fpme/evolve.hpp"
#include "fpme/field.hpp"
#include "fpme/grid.hpp"

namespace fpme {

// Quadrature helper for integrals against the kernel |x-y|^(sigma-N): plain
// cell sums away from the singularity, and the analytic integral of the
// kernel over the host cell (times the local density) where x falls.
struct RieszEvaluator {
    Grid grid;
    double sigma = 1.0;
    double singular_weight = 0.0;  // integral of |z|^(sigma-N) over the h-cell at 0
};

// requires sigma in (0,2) and sigma < N
RieszEvaluator make_riesz_evaluator(const Grid& grid, double sigma);

// gamma(N,sigma) = pi^(N/2) 2^sigma Gamma(sigma/2) / Gamma((N-sigma)/2), the
// constant making gamma^(-1) |x|^(sigma-N) the inverse kernel of the
// fractional Laplacian
double riesz_inversion_constant(int N, double sigma);

// integral of rho(y) |x-y|^(sigma-N) dy: cell sum over the inscribed disk of
// the grid, plus the analytic tail of the profile beyond it (when given; with
// no tail profile the plain full-box sum is used). N = 2 only.
double riesz_potential(const RieszEvaluator& ev, const ScalarField& rho,
                       const DensityProfile* tail, const double* x);

// admissible-exponent query for the potential decay predictions
struct DecayQuery {
    int N = 2;
    double sigma = 1.0;
    double alpha = 2.0;          // density tail exponent
    TailClass regime = TailClass::A2;  // A2 or A2star
};

DecayQuery make_decay_query(int N, double sigma, double alpha, TailClass regime);

// The decay statements hold for every admissible (r, nu); the best (most
// negative) exponent is approached on the boundary of the admissible set.
// `infimum` is that limit in closed form; `exponent` is the value realized by
// an explicit admissible witness pulled inside by the margin eps = 0.01.
struct PredictedDecay {
    double infimum = 0.0;
    double exponent = 0.0;
    double r = 0.0;
    double nu = 0.0;
};

PredictedDecay predicted_decay(const DecayQuery& q);
double predicted_exponent(const DecayQuery& q);

// U(x) = int_tau^t u(x,s)^m ds by the trapezoid rule on the stored sample
// times; tau and t must lie on the sample grid, tau <= t
ScalarField accumulate_U(const Trajectory& traj, double m, double tau, double t);

// max over window nodes |x| <= window of
//   |U(x) - gamma^(-1) int |x-y|^(sigma-N) rho(y) (u(y,tau) - u(y,t)) dy|
// normalized by the max of U over the window
double green_identity_residual(const Trajectory& traj, const ScalarField& rho,
                               const DensityProfile& profile, const PhysParams& params,
                               double tau, double t, double window);

}  // namespace fpme
