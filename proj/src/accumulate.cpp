#include "fpme/potentials.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

namespace fpme {

namespace {

std::size_t sample_index(const Trajectory& traj, double t, const char* what) {
    for (std::size_t k = 0; k < traj.times.size(); ++k) {
        if (std::abs(traj.times[k] - t) <= 1e-12 * (1.0 + std::abs(t)))
            return k;
    }
    throw std::invalid_argument(std::string(what) +
                                " is not one of the stored sample times");
}

void power_into(const ScalarField& u, double m, std::vector<double>& out) {
    out.resize(u.size());
    if (m == 1.0) {
        out.assign(u.v.begin(), u.v.end());
        return;
    }
    for (std::size_t i = 0; i < u.size(); ++i)
        out[i] = std::pow(std::max(u[i], 0.0), m);
}

}  // namespace

ScalarField accumulate_U(const Trajectory& traj, double m, double tau, double t) {
    if (traj.fields.empty())
        throw std::invalid_argument("accumulate_U: empty trajectory");
    if (!(m >= 1.0))
        throw std::invalid_argument("accumulate_U: m must be at least 1");
    std::size_t a = sample_index(traj, tau, "accumulate_U: tau");
    std::size_t b = sample_index(traj, t, "accumulate_U: t");
    if (a > b)
        throw std::invalid_argument("accumulate_U: tau must not exceed t");

    ScalarField U(traj.grid, 0.0, true);
    if (a == b) return U;

    // trapezoid over consecutive samples, accumulated in time order so that
    // splitting at a sample time telescopes
    std::vector<double> prev, cur;
    power_into(traj.fields[a], m, prev);
    for (std::size_t k = a + 1; k <= b; ++k) {
        power_into(traj.fields[k], m, cur);
        double half = 0.5 * (traj.times[k] - traj.times[k - 1]);
        for (std::size_t i = 0; i < U.size(); ++i)
            U[i] += half * (prev[i] + cur[i]);
        prev.swap(cur);
    }
    return U;
}

double green_identity_residual(const Trajectory& traj, const ScalarField& rho,
                               const DensityProfile& profile, const PhysParams& params,
                               double tau, double t, double window) {
    const Grid& g = traj.grid;
    if (g.N != 2)
        throw std::invalid_argument("green identity: requires N = 2");
    if (!rho.grid.same_as(g))
        throw std::invalid_argument("green identity: density grid mismatch");
    if (!(window > 0.0 && window < g.R))
        throw std::invalid_argument(
            "green identity: window must lie strictly inside the grid");
    TailClass tc = profile.tail_class(params.sigma, g.N);
    if (tc != TailClass::A2 && tc != TailClass::A2star)
        throw std::invalid_argument(
            "green identity: needs a fast-decay (A2) density");

    std::size_t a = sample_index(traj, tau, "green identity: tau");
    std::size_t b = sample_index(traj, t, "green identity: t");
    if (a > b)
        throw std::invalid_argument("green identity: tau must not exceed t");

    ScalarField U = accumulate_U(traj, params.m, tau, t);

    // rho (u(tau) - u(t)), the source whose normalized potential U must match
    ScalarField d(g);
    const ScalarField& ua = traj.fields[a];
    const ScalarField& ub = traj.fields[b];
    for (std::size_t i = 0; i < d.size(); ++i)
        d[i] = rho[i] * (ua[i] - ub[i]);

    RieszEvaluator ev = make_riesz_evaluator(g, params.sigma);
    double gamma = riesz_inversion_constant(g.N, params.sigma);
    double w2 = window * window;
    double worst = 0.0;
    double umax = 0.0;
    double x[2];
    for (std::size_t i = 0; i < U.size(); ++i) {
        g.coords(i, x);
        if (x[0] * x[0] + x[1] * x[1] > w2) continue;
        double v = riesz_potential(ev, d, nullptr, x) / gamma;
        worst = std::max(worst, std::abs(U[i] - v));
        umax = std::max(umax, U[i]);
    }
    return umax == 0.0 ? 0.0 : worst / umax;
}

}  // namespace fpme
