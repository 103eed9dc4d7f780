#pragma once

#include <string>
#include <vector>

#include "fpme/evolve.hpp"
#include "fpme/potentials.hpp"

namespace fpme {

enum class Verdict { pass, fail, informational };

const char* to_string(Verdict v);

// Outcome of one claim check over a trajectory. The convention is
// verdict == pass exactly when measured <= tolerance; informational checks
// report numbers without gating anything.
struct CheckReport {
    std::string name;
    std::string claim;   // the statement under test, self-contained
    double measured = 0.0;
    double tolerance = 0.0;
    Verdict verdict = Verdict::pass;
    std::vector<double> series;  // supporting values, one per sample or pair
    std::string note;
};

// key-value block, one "key = value" line per field, series inlined
std::string to_key_value(const CheckReport& r);

// one line of the aggregate summary: check,cited_claim,measured,tolerance,verdict
std::string summary_row(const CheckReport& r);

// Weighted mass at every sample time. Slowly decaying densities (class A1)
// conserve mass: gated verdict on the max relative drift. Fast-decaying
// ones are expected to lose mass: the drift is reported informationally.
CheckReport mass_series(const Trajectory& traj, const ScalarField& rho,
                        const DensityProfile& profile, double sigma);

// Positive-part gap sum((uA - uB)_+ rho h^N) at every common sample time;
// passes when the series is nonincreasing up to 1e-8 per step.
CheckReport contraction_series(const Trajectory& trajA, const Trajectory& trajB,
                               const ScalarField& rho);

// Residual of the dissipation balance
//   sum_j dt_j |u^m(t_j)|_{H^{sigma/2}}^2 = (E(0) - E(T)) / (m+1),
// E(t) = sum u^{m+1} rho h^N, which is first order in dt for the implicit
// scheme. The half-step trajectory of the same problem calibrates the
// verdict: pass when residual(dt) <= 2.3 * residual(dt/2).
CheckReport energy_identity(const Trajectory& traj, const Trajectory& half,
                            const ScalarField& rho, const PhysParams& params,
                            const SpectralOperator& op);

// Scaled monotonicity t^(1/(m-1)) u(x,t) nondecreasing in t, nodewise across
// adjacent samples. m = 1 has no scaling exponent: skipped informationally.
CheckReport benilan_check(const Trajectory& traj, double m);

// theta = 1 / (m - 1 + 1/N), the smoothing-estimate decay exponent
double smoothing_exponent(int N, double m);

// Least-squares slope of log sup u vs log t over step times in
// [t_lo, t_hi]; passes when the measured decay is at least 85% of the
// predicted t^-theta rate. Windows under one decade are informational.
CheckReport smoothing_fit(const Trajectory& traj, const ScalarField& rho,
                          const PhysParams& params, double t_lo, double t_hi);

// Two verdicts on U = int_tau^t u^m ds over the annulus R/4 <= |x| <= R/2:
// [0] the pointwise bound U(x) <= 2 sup(u0) * potential(x) * 1.05, and
// [1] the log-log slope of U along the axis vs the predicted exponent + 0.2.
std::vector<CheckReport> u_decay_check(const Trajectory& traj,
                                       const ScalarField& rho,
                                       const DensityProfile& profile,
                                       const PhysParams& params, double tau,
                                       double t);

}  // namespace fpme
