#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fpme/evolve.hpp"

namespace fpme {

namespace {

ScalarField power_field(const ScalarField& u, double m) {
    if (m == 1.0) return u;
    ScalarField out = u;
    for (auto& v : out.v) v = v <= 0.0 ? 0.0 : std::pow(v, m);
    return out;
}

// sample times t0 * 2^(j/4); advances past t and reports whether a target was
// crossed
bool crossed_geometric(double& next, double t) {
    bool hit = false;
    while (next <= t * (1.0 + 1e-12)) {
        hit = true;
        next *= std::pow(2.0, 0.25);
    }
    return hit;
}

}  // namespace

Trajectory solve_dirichlet(const ScalarField& u0, const ScalarField& rho,
                           const PhysParams& params, const SpectralOperator& op,
                           const StepperConfig& cfg, double T,
                           const SamplePolicy& sampling) {
    if (!(T > 0.0)) throw std::invalid_argument("horizon must be positive");
    if (sampling.kind == SamplePolicy::Kind::geometric && !(sampling.t0 > 0.0)) {
        throw std::invalid_argument("first sample time must be positive");
    }

    long n_steps = static_cast<long>(std::ceil(T / cfg.dt - 1e-9));
    Trajectory traj;
    traj.grid = u0.grid;
    traj.times.push_back(0.0);
    traj.fields.push_back(u0);
    traj.fields.back().nonnegative = true;

    double sup0 = sup_norm(u0);
    double mass0 = weighted_norm(u0, rho, 1.0);
    double sup_prev = sup0, mass_prev = mass0;
    double sup_slack = 1e-12 * (1.0 + sup0);
    double mass_slack = 1e-10 * (1.0 + mass0);

    ScalarField u = u0;
    double next_geo = sampling.t0;
    for (long k = 1; k <= n_steps; ++k) {
        StepStats st;
        u = step(u, rho, params, op, cfg, &st);
        double t = k * cfg.dt;

        double sup = sup_norm(u);
        double mass = weighted_norm(u, rho, 1.0);
        if (sup > sup_prev + sup_slack) {
            throw std::runtime_error("sup norm increased at t = " + std::to_string(t));
        }
        if (mass > mass_prev + mass_slack) {
            throw std::runtime_error("weighted mass increased at t = " +
                                     std::to_string(t));
        }
        sup_prev = sup;
        mass_prev = mass;

        StepRecord rec;
        rec.t = t;
        rec.dt = cfg.dt;
        rec.newton_iters = st.newton_iters;
        rec.substeps = st.substeps;
        rec.residual = st.residual;
        rec.mass = mass;
        rec.sup = sup;
        rec.hs2_um = op.hs_norm2(power_field(u, params.m));
        traj.steps.push_back(rec);

        bool store = sampling.kind == SamplePolicy::Kind::every_step
                         ? true
                         : crossed_geometric(next_geo, t) || k == n_steps;
        if (store) {
            traj.times.push_back(t);
            traj.fields.push_back(u);
        }
    }
    return traj;
}

ExhaustionReport solve_exhaustion(const InitialDatum& u0, const DensityProfile& rho,
                                  const PhysParams& params, const StepperConfig& cfg,
                                  const ExhaustionConfig& ex) {
    if (ex.radii.size() < 2) throw std::invalid_argument("need at least two radii");
    for (std::size_t j = 0; j + 1 < ex.radii.size(); ++j) {
        if (!(ex.radii[j] < ex.radii[j + 1])) {
            throw std::invalid_argument("radii must increase");
        }
    }
    if (ex.n1 < 8 || ex.n1 % 2 == 0) {
        throw std::invalid_argument("base node count must be odd and >= 8");
    }
    if (ex.N != 1 && ex.N != 2) throw std::invalid_argument("dimension must be 1 or 2");

    double R1 = ex.radii.front();
    std::vector<int> ratios;
    for (double R : ex.radii) {
        double q = R / R1;
        int iq = static_cast<int>(std::lround(q));
        if (std::abs(q - iq) > 1e-9) {
            throw std::invalid_argument("radii must be integer multiples of the first");
        }
        ratios.push_back(iq);
    }

    // fixed spacing h = 2 R1/(n1+1); larger boxes add nodes, keeping every
    // node of the smaller boxes (n1 odd makes the offsets whole)
    std::vector<Trajectory> trajs;
    std::vector<Grid> grids;
    for (std::size_t j = 0; j < ex.radii.size(); ++j) {
        int nj = (ex.n1 + 1) * ratios[j] - 1;
        Grid g = make_grid(ex.N, ex.radii[j], nj);
        grids.push_back(g);
        ScalarField u0j = sample_datum(u0, g);
        ScalarField rhoj = sample_density(rho, g);
        SpectralOperator op(g, params.sigma);
        trajs.push_back(solve_dirichlet(u0j, rhoj, params, op, cfg, ex.T, ex.sampling));
    }

    ExhaustionReport rep;
    rep.radii = ex.radii;
    rep.window = R1 / 2.0;

    for (std::size_t j = 0; j + 1 < trajs.size(); ++j) {
        const Grid& ga = grids[j];
        const Grid& gb = grids[j + 1];
        if (trajs[j].times != trajs[j + 1].times) {
            throw std::runtime_error("sample times diverged between radii");
        }
        long off = std::lround((gb.R - ga.R) / ga.h);

        // axis indices of the smaller grid inside the window |x| <= R1/2
        std::vector<int> idx;
        for (int i = 0; i < ga.n; ++i) {
            if (std::abs(ga.axis_coord(i)) <= rep.window + 1e-12) idx.push_back(i);
        }

        double lo = 0.0, hi = 0.0;
        bool first = true;
        for (std::size_t s = 0; s < trajs[j].fields.size(); ++s) {
            const ScalarField& ua = trajs[j].fields[s];
            const ScalarField& ub = trajs[j + 1].fields[s];
            auto visit = [&](double diff) {
                if (first) {
                    lo = hi = diff;
                    first = false;
                } else {
                    lo = std::min(lo, diff);
                    hi = std::max(hi, diff);
                }
            };
            if (ex.N == 1) {
                for (int i : idx) visit(ub[i + off] - ua[i]);
            } else {
                for (int i : idx)
                    for (int jj : idx) {
                        visit(ub[gb.index(i + off, jj + off)] - ua[ga.index(i, jj)]);
                    }
            }
        }
        rep.min_increment.push_back(lo);
        rep.sup_increment.push_back(hi);
        if (lo < -rep.tol) rep.monotone = false;
    }

    rep.minimal = std::move(trajs.back());
    return rep;
}

L1DatumReport solve_l1_datum(const InitialDatum& u0, const DensityProfile& rho,
                             const Grid& grid, const PhysParams& params,
                             const StepperConfig& cfg, const L1DatumConfig& lc) {
    if (params.sigma != 1.0) {
        throw std::invalid_argument("merely-integrable data runs require sigma = 1");
    }
    if (lc.caps.size() < 2) throw std::invalid_argument("need at least two caps");
    for (std::size_t j = 0; j < lc.caps.size(); ++j) {
        if (!(lc.caps[j] > 0.0)) throw std::invalid_argument("caps must be positive");
        if (j > 0 && !(lc.caps[j] > lc.caps[j - 1])) {
            throw std::invalid_argument("caps must increase");
        }
    }

    ScalarField rhof = sample_density(rho, grid);
    SpectralOperator op(grid, params.sigma);

    L1DatumReport rep;
    rep.caps = lc.caps;
    std::vector<ScalarField> data;
    for (double M : lc.caps) {
        InitialDatum d = u0;
        d.cap = std::min(u0.cap, M);
        data.push_back(sample_datum(d, grid));
        rep.runs.push_back(
            solve_dirichlet(data.back(), rhof, params, op, cfg, lc.T, lc.sampling));
    }

    for (std::size_t j = 0; j + 1 < rep.runs.size(); ++j) {
        ScalarField gap = data[j + 1];
        for (std::size_t i = 0; i < gap.size(); ++i) gap.v[i] -= data[j][i];
        double datum_gap = weighted_norm(gap, rhof, 1.0);
        rep.datum_gaps.push_back(datum_gap);

        std::vector<double> row;
        double slack = 1e-8 * (1.0 + datum_gap);
        for (std::size_t s = 0; s < rep.runs[j].fields.size(); ++s) {
            ScalarField d = rep.runs[j + 1].fields[s];
            for (std::size_t i = 0; i < d.size(); ++i) d.v[i] -= rep.runs[j].fields[s][i];
            double g = weighted_norm(d, rhof, 1.0);
            row.push_back(g);
            if (g > datum_gap + slack) rep.contraction_holds = false;
        }
        rep.run_gaps.push_back(std::move(row));
    }
    return rep;
}

}  // namespace fpme
