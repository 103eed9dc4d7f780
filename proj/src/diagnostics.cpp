#include "fpme/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "fpme/field_io.hpp"

namespace fpme {

namespace {

double fit_loglog_slope(const std::vector<double>& x, const std::vector<double>& y) {
    double n = static_cast<double>(x.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < x.size(); ++i) {
        double lx = std::log(x[i]), ly = std::log(y[i]);
        sx += lx;
        sy += ly;
        sxx += lx * lx;
        sxy += lx * ly;
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

// weighted integral of u^(m+1), the Lyapunov energy of the flow
double lyapunov_energy(const ScalarField& u, const ScalarField& rho, double m) {
    std::vector<double> terms(u.size());
    double cell = std::pow(u.grid.h, u.grid.N);
    for (std::size_t i = 0; i < u.size(); ++i)
        terms[i] = std::pow(std::max(u[i], 0.0), m + 1.0) * rho[i] * cell;
    return pairwise_sum(terms.data(), terms.size());
}

// energy-balance defect of one trajectory, normalized by the initial energy
double dissipation_residual(const Trajectory& traj, const ScalarField& rho,
                            double m) {
    std::vector<double> terms(traj.steps.size());
    for (std::size_t k = 0; k < traj.steps.size(); ++k)
        terms[k] = traj.steps[k].dt * traj.steps[k].hs2_um;
    double diss = pairwise_sum(terms.data(), terms.size());
    double e0 = lyapunov_energy(traj.initial(), rho, m);
    double eT = lyapunov_energy(traj.final(), rho, m);
    double defect = std::abs(diss - (e0 - eT) / (m + 1.0));
    return e0 > 0.0 ? defect / e0 : defect;
}

void require_samples(const Trajectory& traj, const char* who) {
    if (traj.times.size() < 2 || traj.fields.size() != traj.times.size())
        throw std::invalid_argument(std::string(who) +
                                    ": trajectory needs at least two samples");
}

void require_same_grid(const Grid& a, const Grid& b, const char* who) {
    if (!a.same_as(b))
        throw std::invalid_argument(std::string(who) + ": grid mismatch");
}

std::string sanitize(const std::string& s) {
    std::string out = s;
    for (char& c : out)
        if (c == ',' || c == '\n') c = ';';
    return out;
}

}  // namespace

const char* to_string(Verdict v) {
    switch (v) {
        case Verdict::pass: return "pass";
        case Verdict::fail: return "fail";
        default: return "informational";
    }
}

std::string to_key_value(const CheckReport& r) {
    std::string out;
    out += "check = " + r.name + "\n";
    out += "claim = " + r.claim + "\n";
    out += "measured = " + format_double(r.measured) + "\n";
    out += "tolerance = " + format_double(r.tolerance) + "\n";
    out += std::string("verdict = ") + to_string(r.verdict) + "\n";
    out += "series =";
    for (double v : r.series) out += " " + format_double(v);
    out += "\n";
    out += "note = " + r.note + "\n";
    return out;
}

std::string summary_row(const CheckReport& r) {
    return sanitize(r.name) + "," + sanitize(r.claim) + "," +
           format_double(r.measured) + "," + format_double(r.tolerance) + "," +
           to_string(r.verdict);
}

CheckReport mass_series(const Trajectory& traj, const ScalarField& rho,
                        const DensityProfile& profile, double sigma) {
    require_samples(traj, "mass series");
    require_same_grid(traj.grid, rho.grid, "mass series");

    CheckReport r;
    r.name = "mass";
    r.series.reserve(traj.fields.size());
    for (const ScalarField& u : traj.fields)
        r.series.push_back(weighted_norm(u, rho, 1.0));

    double m0 = r.series.front();
    double scale = m0 > 0.0 ? m0 : 1.0;
    TailClass tc = profile.tail_class(sigma, traj.grid.N);
    if (tc == TailClass::A1) {
        r.claim = "weighted L1 mass is conserved when the density decays "
                  "slower than the operator order";
        double drift = 0.0;
        for (double mk : r.series)
            drift = std::max(drift, std::abs(mk - m0) / scale);
        r.measured = drift;
        r.tolerance = 0.01;
        r.verdict = drift <= r.tolerance ? Verdict::pass : Verdict::fail;
        r.note = "max relative drift against the initial mass";
    } else {
        r.claim = "fast-decaying densities let mass escape: the weighted L1 "
                  "mass may drift downward";
        r.measured = (r.series.back() - m0) / scale;
        r.tolerance = 0.0;
        r.verdict = Verdict::informational;
        r.note = "relative final drift reported only; no gate in this regime";
    }
    return r;
}

CheckReport contraction_series(const Trajectory& trajA, const Trajectory& trajB,
                               const ScalarField& rho) {
    require_samples(trajA, "contraction series");
    require_samples(trajB, "contraction series");
    require_same_grid(trajA.grid, trajB.grid, "contraction series");
    require_same_grid(trajA.grid, rho.grid, "contraction series");
    if (trajA.times.size() != trajB.times.size())
        throw std::invalid_argument("contraction series: sample count mismatch");
    for (std::size_t k = 0; k < trajA.times.size(); ++k)
        if (std::abs(trajA.times[k] - trajB.times[k]) >
            1e-12 * (1.0 + std::abs(trajA.times[k])))
            throw std::invalid_argument("contraction series: sample times differ");

    CheckReport r;
    r.name = "contraction";
    r.claim = "the positive-part weighted gap between two solutions is "
              "nonincreasing in time";
    r.series.reserve(trajA.times.size());
    for (std::size_t k = 0; k < trajA.times.size(); ++k)
        r.series.push_back(
            positive_part_mass(trajA.fields[k], trajB.fields[k], rho));

    double worst = -std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < r.series.size(); ++k)
        worst = std::max(worst, r.series[k] - r.series[k - 1]);
    r.measured = r.series.size() > 1 ? worst : 0.0;
    r.tolerance = 1e-8 * (1.0 + r.series.front());
    r.verdict = r.measured <= r.tolerance ? Verdict::pass : Verdict::fail;
    r.note = "largest increase across adjacent samples";
    return r;
}

CheckReport energy_identity(const Trajectory& traj, const Trajectory& half,
                            const ScalarField& rho, const PhysParams& params,
                            const SpectralOperator& op) {
    require_samples(traj, "energy identity");
    require_samples(half, "energy identity");
    require_same_grid(traj.grid, rho.grid, "energy identity");
    require_same_grid(traj.grid, half.grid, "energy identity");
    require_same_grid(traj.grid, op.grid(), "energy identity");
    if (op.sigma() != params.sigma)
        throw std::invalid_argument("energy identity: operator order mismatch");
    if (traj.steps.empty() || half.steps.empty())
        throw std::invalid_argument("energy identity: trajectories have no steps");
    double dtA = traj.steps.front().dt;
    double dtB = half.steps.front().dt;
    if (std::abs(dtA - 2.0 * dtB) > 1e-12 * dtA)
        throw std::invalid_argument(
            "energy identity: calibration run must use half the step");
    double TA = traj.steps.back().t, TB = half.steps.back().t;
    if (std::abs(TA - TB) > 1e-9 * (1.0 + TA))
        throw std::invalid_argument("energy identity: horizons differ");

    double r1 = dissipation_residual(traj, rho, params.m);
    double r2 = dissipation_residual(half, rho, params.m);

    CheckReport r;
    r.name = "energy";
    r.claim = "the accumulated fractional seminorm dissipation balances the "
              "Lyapunov energy drop to first order in the step";
    r.series = {r1, r2};
    if (r1 == 0.0 && r2 == 0.0) {
        r.measured = 0.0;
    } else if (r2 == 0.0) {
        r.measured = std::numeric_limits<double>::infinity();
    } else {
        r.measured = r1 / r2;
    }
    r.tolerance = 2.3;  // first-order defect: halving dt should halve it
    r.verdict = r.measured <= r.tolerance ? Verdict::pass : Verdict::fail;
    r.note = "residual ratio at dt = " + format_double(dtA) + " vs dt/2";
    return r;
}

CheckReport benilan_check(const Trajectory& traj, double m) {
    require_samples(traj, "benilan check");
    if (!(m >= 1.0))
        throw std::invalid_argument("benilan check: m must be at least 1");

    CheckReport r;
    r.name = "benilan";
    r.claim = "t^(1/(m-1)) u(x,t) is nondecreasing in time at every node";
    if (m == 1.0) {
        r.verdict = Verdict::informational;
        r.note = "skipped: the scaling exponent 1/(m-1) is undefined at m = 1";
        return r;
    }

    double p = 1.0 / (m - 1.0);
    double worst = std::numeric_limits<double>::infinity();
    for (std::size_t k = 1; k < traj.times.size(); ++k) {
        double wa = std::pow(traj.times[k - 1], p);
        double wb = std::pow(traj.times[k], p);
        const ScalarField& ua = traj.fields[k - 1];
        const ScalarField& ub = traj.fields[k];
        double lo = std::numeric_limits<double>::infinity();
        for (std::size_t i = 0; i < ua.size(); ++i)
            lo = std::min(lo, wb * ub[i] - wa * ua[i]);
        r.series.push_back(lo);
        worst = std::min(worst, lo);
    }
    r.measured = -worst;  // size of the largest violation
    r.tolerance = 1e-6 * sup_norm(traj.initial());
    r.verdict = r.measured <= r.tolerance ? Verdict::pass : Verdict::fail;
    r.note = "min of the scaled increments over nodes and adjacent samples";
    return r;
}

double smoothing_exponent(int N, double m) {
    if (N < 1 || !(m >= 1.0))
        throw std::invalid_argument("smoothing exponent: need N >= 1, m >= 1");
    return 1.0 / (m - 1.0 + 1.0 / N);
}

CheckReport smoothing_fit(const Trajectory& traj, const ScalarField& rho,
                          const PhysParams& params, double t_lo, double t_hi) {
    require_samples(traj, "smoothing fit");
    require_same_grid(traj.grid, rho.grid, "smoothing fit");
    if (params.sigma != 1.0)
        throw std::invalid_argument("smoothing fit: stated only for sigma = 1");
    if (!(t_lo > 0.0) || !(t_hi > t_lo))
        throw std::invalid_argument("smoothing fit: bad fit window");

    double theta = smoothing_exponent(traj.grid.N, params.m);
    CheckReport r;
    r.name = "smoothing";
    r.claim = "bounded densities smooth integrable data at the rate t^-theta, "
              "theta = 1/(m-1+1/N)";
    r.tolerance = -0.85 * theta;

    std::vector<double> ts, sups;
    for (const StepRecord& s : traj.steps) {
        if (s.t < t_lo * (1.0 - 1e-12) || s.t > t_hi * (1.0 + 1e-12)) continue;
        if (!(s.sup > 0.0)) continue;
        ts.push_back(s.t);
        sups.push_back(s.sup);
        r.series.push_back(s.sup);
    }

    if (ts.size() < 3) {
        r.verdict = Verdict::informational;
        r.note = "too few step times inside the fit window";
        return r;
    }
    r.measured = fit_loglog_slope(ts, sups);
    if (ts.back() < 10.0 * ts.front()) {
        r.verdict = Verdict::informational;
        r.note = "window spans less than one decade in t; slope reported only";
        return r;
    }
    r.verdict = r.measured <= r.tolerance ? Verdict::pass : Verdict::fail;
    r.note = "log-log slope of sup u over [" + format_double(ts.front()) +
             ", " + format_double(ts.back()) + "], theta = " +
             format_double(theta);
    return r;
}

std::vector<CheckReport> u_decay_check(const Trajectory& traj,
                                       const ScalarField& rho,
                                       const DensityProfile& profile,
                                       const PhysParams& params, double tau,
                                       double t) {
    const Grid& g = traj.grid;
    if (g.N != 2)
        throw std::invalid_argument("u decay check: requires N = 2");
    require_same_grid(g, rho.grid, "u decay check");
    TailClass tc = profile.tail_class(params.sigma, 2);
    if (tc != TailClass::A2 && tc != TailClass::A2star)
        throw std::invalid_argument(
            "u decay check: needs a fast-decay (A2) density");

    ScalarField U = accumulate_U(traj, params.m, tau, t);
    double sup0 = sup_norm(traj.initial());

    CheckReport bound;
    bound.name = "u_decay_bound";
    bound.claim = "the accumulated flux U stays below twice the initial sup "
                  "times the density potential on the outer annulus";
    bound.tolerance = 1.05;

    CheckReport slope;
    slope.name = "u_decay_slope";
    slope.claim = "the accumulated flux U decays along the axis at least at "
                  "the predicted admissible rate";
    // the U bound inherits the A2 exponent family even for very fast tails
    double predicted = predicted_exponent(
        make_decay_query(2, params.sigma, profile.alpha, TailClass::A2));
    slope.tolerance = predicted + 0.2;

    if (sup0 == 0.0) {
        bound.note = "zero initial datum: U vanishes, bound trivial";
        slope.note = "zero initial datum: no decay to fit";
        slope.verdict = Verdict::informational;
        return {bound, slope};
    }

    RieszEvaluator ev = make_riesz_evaluator(g, params.sigma);
    double lo2 = (g.R / 4.0) * (g.R / 4.0);
    double hi2 = (g.R / 2.0) * (g.R / 2.0);

    // pointwise bound over the annulus, subsampled to a fixed budget
    std::vector<std::size_t> annulus;
    double x[2];
    for (std::size_t i = 0; i < U.size(); ++i) {
        g.coords(i, x);
        double d2 = x[0] * x[0] + x[1] * x[1];
        if (d2 >= lo2 && d2 <= hi2) annulus.push_back(i);
    }
    std::size_t stride = std::max<std::size_t>(1, annulus.size() / 600);
    double worst = 0.0;
    std::size_t checked = 0;
    for (std::size_t k = 0; k < annulus.size(); k += stride) {
        std::size_t i = annulus[k];
        g.coords(i, x);
        double p = riesz_potential(ev, rho, &profile, x);
        worst = std::max(worst, U[i] / (2.0 * sup0 * p));
        ++checked;
    }
    bound.measured = worst;
    bound.verdict = bound.measured <= bound.tolerance ? Verdict::pass
                                                      : Verdict::fail;
    bound.note = "max U / (2 sup(u0) potential) over " +
                 std::to_string(checked) + " annulus nodes";

    // log-log decay fit along the positive x half-axis
    int jmid = (g.n - 1) / 2;
    std::vector<double> xs, us;
    for (int i = jmid + 1; i < g.n; ++i) {
        std::size_t idx = g.index(i, jmid);
        g.coords(idx, x);
        double d2 = x[0] * x[0] + x[1] * x[1];
        if (d2 < lo2 || d2 > hi2) continue;
        if (!(U[idx] > 0.0)) continue;
        xs.push_back(x[0]);
        us.push_back(U[idx]);
        slope.series.push_back(U[idx]);
    }
    if (xs.size() < 3) {
        slope.verdict = Verdict::informational;
        slope.note = "too few positive axis values for a fit";
    } else {
        slope.measured = fit_loglog_slope(xs, us);
        slope.verdict = slope.measured <= slope.tolerance ? Verdict::pass
                                                          : Verdict::fail;
        slope.note = "axis fit over |x| in [R/4, R/2]; predicted exponent " +
                     format_double(predicted);
    }
    return {bound, slope};
}

}  // namespace fpme
