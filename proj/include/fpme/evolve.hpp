#pragma once

#include <vector>

#include "fpme/density.hpp"
#include "fpme/field.hpp"
#include "fpme/grid.hpp"
#include "fpme/initial_data.hpp"
#include "fpme/spectral.hpp"

namespace fpme {

// problem data: rho du/dt + A_sigma(u^m) = 0 with G(s) = s^m
struct PhysParams {
    double sigma = 1.0;
    double m = 1.0;
};

PhysParams make_phys_params(double sigma, double m);

struct StepperConfig {
    double dt = 1e-2;
    double newton_tol = 1e-10;  // relative residual target per step
    int newton_max = 30;
    double cg_tol = 1e-12;  // inner Krylov tolerance, relative
    int cg_max = 5000;
    double floor = 0.0;  // projection level for the iterates (stays at 0)
};

struct StepStats {
    int newton_iters = 0;  // total Newton updates, all substeps included
    int substeps = 1;      // accepted backward-Euler substeps
    double residual = 0.0; // final relative residual of the last substep
};

// One backward-Euler step of length cfg.dt from u_prev, by damped projected
// Newton; on nonconvergence the step is halved and retried (two substeps),
// at most 10 levels deep.
ScalarField step(const ScalarField& u_prev, const ScalarField& rho,
                 const PhysParams& params, const SpectralOperator& op,
                 const StepperConfig& cfg, StepStats* stats = nullptr);

struct StepRecord {
    double t = 0.0;        // time after the step
    double dt = 0.0;       // macro step length
    int newton_iters = 0;
    int substeps = 1;
    double residual = 0.0;
    double mass = 0.0;     // weighted L1 mass
    double sup = 0.0;      // L-infinity norm
    double hs2_um = 0.0;   // squared fractional seminorm of u^m
};

struct SamplePolicy {
    enum class Kind { every_step, geometric };
    Kind kind = Kind::every_step;
    double t0 = 1e-2;  // first geometric sample; later ones at t0 * 2^(j/4)
};

struct Trajectory {
    Grid grid;
    std::vector<double> times;        // sample times, starting at 0
    std::vector<ScalarField> fields;  // one per sample time
    std::vector<StepRecord> steps;    // one per macro step

    const ScalarField& initial() const { return fields.front(); }
    const ScalarField& final() const { return fields.back(); }
};

// Run ceil(T/dt) macro steps on a fixed box, enforcing the a priori bounds
// (nonnegativity, nonincreasing sup norm bounded by the initial one,
// nonincreasing weighted mass) and recording per-step diagnostics.
Trajectory solve_dirichlet(const ScalarField& u0, const ScalarField& rho,
                           const PhysParams& params, const SpectralOperator& op,
                           const StepperConfig& cfg, double T,
                           const SamplePolicy& sampling = {});

// Exhaustion of the whole space by boxes R_1 < ... < R_J at fixed spacing:
// n grows with R so nodes of smaller boxes are nodes of larger ones. The
// solutions increase with R; the largest-radius run approximates the minimal
// whole-space solution.
struct ExhaustionConfig {
    int N = 1;
    std::vector<double> radii;  // integer multiples of radii[0], increasing
    int n1 = 255;               // interior nodes of the smallest box, odd
    double T = 1.0;
    SamplePolicy sampling;
};

struct ExhaustionReport {
    std::vector<double> radii;
    double window = 0.0;  // comparison region |x| <= R1/2
    double tol = 1e-8;    // allowed pointwise monotonicity slack
    // per successive radius pair, extremes of u_{j+1} - u_j over the window
    // and all common sample times
    std::vector<double> min_increment;
    std::vector<double> sup_increment;
    bool monotone = true;  // all min increments >= -tol
    Trajectory minimal;    // largest-radius trajectory
};

ExhaustionReport solve_exhaustion(const InitialDatum& u0, const DensityProfile& rho,
                                  const PhysParams& params, const StepperConfig& cfg,
                                  const ExhaustionConfig& ex);

// Merely-integrable data (sigma = 1): run the bounded solver on the datum
// truncated at an increasing sequence of caps and report the L1rho gaps
// between successive runs at every sample time, next to the contraction
// bound given by the gaps of the truncated data themselves.
struct L1DatumConfig {
    std::vector<double> caps;  // M1 < M2 < ..., at least two
    double T = 1.0;
    SamplePolicy sampling;
};

struct L1DatumReport {
    std::vector<double> caps;
    std::vector<Trajectory> runs;
    std::vector<double> datum_gaps;              // L1rho gaps of truncated data
    std::vector<std::vector<double>> run_gaps;   // [pair][sample time]
    bool contraction_holds = true;  // every run gap <= datum gap + slack
};

L1DatumReport solve_l1_datum(const InitialDatum& u0, const DensityProfile& rho,
                             const Grid& grid, const PhysParams& params,
                             const StepperConfig& cfg, const L1DatumConfig& lc);

}  // namespace fpme
