#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "fpme/potentials.hpp"
#include "fpme/spectral.hpp"
#include "oracles.hpp"

using namespace fpme;

namespace {

// composite Simpson, used as an independent quadrature for the cell weight
template <class F>
double simpson(F f, double a, double b, int segments) {
    double h = (b - a) / segments;
    double s = f(a) + f(b);
    for (int i = 1; i < segments; ++i)
        s += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
    return s * h / 3.0;
}

// integral of |z|^(sigma-2) over the square cell [-a,a]^2 by octant splitting
double cell_weight_2d(double sigma, double a) {
    double ang = simpson(
        [sigma](double t) { return std::pow(std::cos(t), -sigma); }, 0.0,
        M_PI / 4.0, 20000);
    return 8.0 / sigma * std::pow(a, sigma) * ang;
}

ScalarField sample_profile(const DensityProfile& p, const Grid& g) {
    return sample_density(p, g);
}

double fit_slope(const std::vector<double>& lx, const std::vector<double>& ly) {
    double n = lx.size(), sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < lx.size(); ++i) {
        sx += lx[i];
        sy += ly[i];
        sxx += lx[i] * lx[i];
        sxy += lx[i] * ly[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

Trajectory constant_trajectory(const Grid& g, double c,
                               const std::vector<double>& times) {
    Trajectory traj;
    traj.grid = g;
    traj.times = times;
    for (std::size_t k = 0; k < times.size(); ++k)
        traj.fields.emplace_back(g, c, true);
    return traj;
}

ScalarField gaussian_2d(const Grid& g, double amp, double w) {
    InitialDatum d;
    d.kind = DatumKind::gaussian_bump;
    d.amplitude = amp;
    d.width = w;
    return sample_datum(d, g);
}

}  // namespace

TEST_CASE("singular cell weight closed forms") {
    Grid g1 = make_grid(1, 4.0, 31);
    RieszEvaluator e1 = make_riesz_evaluator(g1, 0.5);
    double a1 = g1.h / 2.0;
    CHECK(e1.singular_weight ==
          doctest::Approx(2.0 * std::pow(a1, 0.5) / 0.5).epsilon(1e-14));

    Grid g2 = make_grid(2, 4.0, 31);
    RieszEvaluator e2 = make_riesz_evaluator(g2, 1.0);
    double closed = 4.0 * g2.h * std::log(1.0 + std::sqrt(2.0));
    CHECK(e2.singular_weight == doctest::Approx(closed).epsilon(1e-12));
    // the closed form is itself the octant quadrature at sigma = 1
    CHECK(cell_weight_2d(1.0, g2.h / 2.0) ==
          doctest::Approx(closed).epsilon(1e-11));

    // general planar weights against the independent Simpson quadrature
    for (double sg : {0.5, 1.5}) {
        RieszEvaluator e = make_riesz_evaluator(g2, sg);
        CHECK(e.singular_weight ==
              doctest::Approx(cell_weight_2d(sg, g2.h / 2.0)).epsilon(1e-10));
    }

    CHECK_THROWS_AS(make_riesz_evaluator(g1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(make_riesz_evaluator(g1, 1.5), std::invalid_argument);
    CHECK_THROWS_AS(make_riesz_evaluator(g2, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(make_riesz_evaluator(g2, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(make_riesz_evaluator(Grid{}, 0.5), std::invalid_argument);
}

TEST_CASE("riesz inversion constant") {
    CHECK(riesz_inversion_constant(2, 1.0) ==
          doctest::Approx(2.0 * M_PI).epsilon(1e-14));
    CHECK(riesz_inversion_constant(3, 1.0) ==
          doctest::Approx(2.0 * M_PI * M_PI).epsilon(1e-13));
    for (double sg : {0.5, 1.5}) {
        double expect = std::pow(M_PI, 1.0) * std::pow(2.0, sg) *
                        oracle::gamma(sg / 2.0) /
                        oracle::gamma((2.0 - sg) / 2.0);
        CHECK(riesz_inversion_constant(2, sg) ==
              doctest::Approx(expect).epsilon(1e-12));
    }
    CHECK_THROWS_AS(riesz_inversion_constant(1, 1.0), std::invalid_argument);
    CHECK_THROWS_AS(riesz_inversion_constant(2, 2.0), std::invalid_argument);
    CHECK_THROWS_AS(riesz_inversion_constant(0, 0.5), std::invalid_argument);
}

TEST_CASE("unit disk potential at the origin") {
    Grid g = make_grid(2, 2.0, 255);
    InitialDatum d;
    d.kind = DatumKind::indicator_ball;
    d.radius = 1.0;
    ScalarField disk = sample_datum(d, g);
    RieszEvaluator ev = make_riesz_evaluator(g, 1.0);
    double x[2] = {0.0, 0.0};
    double p = riesz_potential(ev, disk, nullptr, x);
    CHECK(p == doctest::Approx(2.0 * M_PI).epsilon(1e-2));

    ScalarField zero(g, 0.0, true);
    CHECK(riesz_potential(ev, zero, nullptr, x) == 0.0);
}

TEST_CASE("poisson profile potential matches its closed form") {
    // rho = (1+|y|^2)^(-3/2) in the plane has
    //   int rho(y) |x-y|^(-1) dy = 2 pi (1+|x|^2)^(-1/2)
    // (subordination of the kernel to the Poisson semigroup), giving an exact
    // target both inside the grid and far beyond it.
    Grid g = make_grid(2, 10.0, 127);
    DensityProfile rho = power_tail_density(1.0, 3.0, 1.0);
    ScalarField rf = sample_profile(rho, g);
    RieszEvaluator ev = make_riesz_evaluator(g, 1.0);

    for (double r : {0.0, 1.0, 3.0, 7.0, 15.0, 40.0, 100.0}) {
        double x[2] = {r, 0.0};
        double p = riesz_potential(ev, rf, &rho, x);
        double expect = 2.0 * M_PI / std::sqrt(1.0 + r * r);
        CHECK(p == doctest::Approx(expect).epsilon(1e-2));
    }
    double xd[2] = {3.0, 4.0};
    CHECK(riesz_potential(ev, rf, &rho, xd) ==
          doctest::Approx(2.0 * M_PI / std::sqrt(26.0)).epsilon(1e-2));

    // far field: within 2% of L1 mass times the kernel (mass here is 2 pi)
    double xf[2] = {100.0, 0.0};
    double far = riesz_potential(ev, rf, &rho, xf);
    CHECK(far == doctest::Approx(2.0 * M_PI / 100.0).epsilon(2e-2));

    // slowly decaying tails are rejected: the tail integral diverges
    DensityProfile slow = power_tail_density(1.0, 0.5, 1.0);
    ScalarField sf = sample_profile(slow, g);
    double x0[2] = {0.0, 0.0};
    CHECK_THROWS_AS(riesz_potential(ev, sf, &slow, x0), std::invalid_argument);

    Grid g1 = make_grid(1, 4.0, 31);
    RieszEvaluator e1 = make_riesz_evaluator(g1, 0.5);
    ScalarField f1(g1, 1.0, true);
    CHECK_THROWS_AS(riesz_potential(e1, f1, nullptr, x0),
                    std::invalid_argument);
    CHECK_THROWS_AS(riesz_potential(ev, rf, &rho, nullptr),
                    std::invalid_argument);
    CHECK_THROWS_AS(riesz_potential(ev, f1, nullptr, x0),
                    std::invalid_argument);
}

TEST_CASE("potential is monotone in the density") {
    Grid g = make_grid(2, 8.0, 63);
    DensityProfile lo = power_tail_density(1.0, 3.0, 1.0);
    DensityProfile hi = power_tail_density(1.0, 2.5, 1.0);  // pointwise larger
    ScalarField flo = sample_profile(lo, g);
    ScalarField fhi = sample_profile(hi, g);
    RieszEvaluator ev = make_riesz_evaluator(g, 1.0);
    for (double r : {0.0, 2.0, 6.0, 30.0}) {
        double x[2] = {r, 0.5};
        double plo = riesz_potential(ev, flo, &lo, x);
        double phi = riesz_potential(ev, fhi, &hi, x);
        CHECK(phi > plo);
    }
}

TEST_CASE("A2 profile potential decays at the predicted rate") {
    Grid g = make_grid(2, 10.0, 127);
    DensityProfile rho = power_tail_density(1.0, 1.5, 1.0);
    CHECK(rho.tail_class(1.0, 2) == TailClass::A2);
    ScalarField rf = sample_profile(rho, g);
    RieszEvaluator ev = make_riesz_evaluator(g, 1.0);

    std::vector<double> lr, lp;
    for (double r = 5.0; r <= 50.0 * 1.0001; r *= std::sqrt(2.0)) {
        double x[2] = {r, 0.0};
        lr.push_back(std::log(r));
        lp.push_back(std::log(riesz_potential(ev, rf, &rho, x)));
    }
    double slope = fit_slope(lr, lp);
    double predicted = predicted_exponent(make_decay_query(2, 1.0, 1.5, TailClass::A2));
    CHECK(slope <= predicted + 0.1);
    CHECK(slope < 0.0);
}

TEST_CASE("predicted exponent closed forms") {
    PredictedDecay d1 = predicted_decay(make_decay_query(3, 1.0, 2.0, TailClass::A2));
    CHECK(d1.infimum == -0.5);
    CHECK(std::abs(d1.exponent - (-0.5)) <= 0.03);
    CHECK(d1.r > std::max(3.0 / 2.0, 2.0));  // strictly admissible
    CHECK(d1.r < 3.0);

    PredictedDecay d2 = predicted_decay(make_decay_query(2, 1.0, 3.0, TailClass::A2));
    CHECK(d2.infimum == -1.0);
    CHECK(std::abs(d2.exponent - (-1.0)) <= 0.03);
    CHECK(d2.nu > 0.0);
    CHECK(d2.nu < 1.0);
    CHECK(d2.r > std::max({2.0, 2.0 / (2.0 - d2.nu), 2.0 / (3.0 - d2.nu)}));
    CHECK(d2.r < 2.0 / (1.0 - d2.nu));

    PredictedDecay d3 = predicted_decay(make_decay_query(2, 1.0, 3.0, TailClass::A2star));
    CHECK(d3.infimum == -2.0);
    CHECK(std::abs(d3.exponent - (-2.0)) <= 0.05);
    CHECK(d3.nu > 1.0);  // N(2-sigma)/2
    CHECK(d3.nu < 2.0);
    CHECK(d3.r > std::max(2.0, 2.0 / (3.0 - d3.nu)));
    CHECK(d3.r < 2.0 / (2.0 - d3.nu));

    // violated constraints are named
    try {
        make_decay_query(3, 1.5, 1.0, TailClass::A2);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("alpha > sigma") != std::string::npos);
    }
    try {
        make_decay_query(2, 1.0, 1.5, TailClass::A2star);
        CHECK(false);
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("alpha > N") != std::string::npos);
    }
    CHECK_THROWS_AS(make_decay_query(1, 1.0, 3.0, TailClass::A2),
                    std::invalid_argument);
    CHECK_THROWS_AS(make_decay_query(2, 1.0, 3.0, TailClass::A1),
                    std::invalid_argument);
}

TEST_CASE("predicted exponents agree with brute-force scans") {
    struct Case2d { double sigma, alpha; };
    for (Case2d c : {Case2d{0.6, 1.2}, Case2d{1.0, 3.0}, Case2d{1.4, 1.9}}) {
        oracle::ExponentScan s = oracle::scan_fast_decay_2d(c.sigma, c.alpha);
        PredictedDecay d =
            predicted_decay(make_decay_query(2, c.sigma, c.alpha, TailClass::A2));
        REQUIRE(s.feasible);
        CHECK(std::abs(s.best_exponent - d.infimum) <= 0.01);
        CHECK(d.exponent >= d.infimum);
    }

    struct CaseNd { int N; double sigma, alpha; };
    for (CaseNd c : {CaseNd{3, 1.0, 2.0}, CaseNd{4, 0.8, 3.0}}) {
        oracle::ExponentScan s =
            oracle::scan_fast_decay_3d_plus(c.N, c.sigma, c.alpha);
        PredictedDecay d =
            predicted_decay(make_decay_query(c.N, c.sigma, c.alpha, TailClass::A2));
        REQUIRE(s.feasible);
        CHECK(std::abs(s.best_exponent - d.infimum) <= 0.01);
    }

    struct CaseStar { double sigma, alpha; };
    for (CaseStar c : {CaseStar{1.0, 3.0}, CaseStar{1.2, 2.6}}) {
        oracle::ExponentScan s = oracle::scan_very_fast_decay(2, c.sigma, c.alpha);
        PredictedDecay d =
            predicted_decay(make_decay_query(2, c.sigma, c.alpha, TailClass::A2star));
        REQUIRE(s.feasible);
        CHECK(std::abs(s.best_exponent - d.infimum) <= 0.01);
    }
}

TEST_CASE("accumulate_U trapezoid behavior") {
    Grid g = make_grid(1, 2.0, 15);
    Trajectory traj = constant_trajectory(g, 2.0, {0.0, 0.1, 0.3});

    ScalarField zero = accumulate_U(traj, 2.0, 0.1, 0.1);
    for (std::size_t i = 0; i < zero.size(); ++i) CHECK(zero[i] == 0.0);
    CHECK(zero.nonnegative);

    // constant in time: U = c^m (t - tau) exactly
    ScalarField U = accumulate_U(traj, 2.0, 0.0, 0.3);
    for (std::size_t i = 0; i < U.size(); ++i)
        CHECK(U[i] == doctest::Approx(4.0 * 0.3).epsilon(1e-15));

    CHECK_THROWS_AS(accumulate_U(traj, 2.0, 0.05, 0.3), std::invalid_argument);
    CHECK_THROWS_AS(accumulate_U(traj, 2.0, 0.3, 0.0), std::invalid_argument);
    CHECK_THROWS_AS(accumulate_U(traj, 0.5, 0.0, 0.3), std::invalid_argument);
}

TEST_CASE("accumulate_U on a real run and window additivity") {
    Grid g = make_grid(1, 4.0, 31);
    InitialDatum d;
    d.kind = DatumKind::gaussian_bump;
    ScalarField u0 = sample_datum(d, g);
    ScalarField rho(g, 1.0, true);
    PhysParams params = make_phys_params(1.0, 2.0);
    SpectralOperator op(g, 1.0);
    StepperConfig cfg;
    cfg.dt = 0.05;
    Trajectory traj = solve_dirichlet(u0, rho, params, op, cfg, 0.2);
    REQUIRE(traj.times.size() == 5);

    // independent nodewise trapezoid of u^m
    ScalarField U = accumulate_U(traj, 2.0, 0.0, 0.2);
    for (std::size_t i = 0; i < U.size(); i += 7) {
        double s = 0.0;
        for (std::size_t k = 1; k < traj.times.size(); ++k) {
            double fa = std::pow(traj.fields[k - 1][i], 2.0);
            double fb = std::pow(traj.fields[k][i], 2.0);
            s += 0.5 * (traj.times[k] - traj.times[k - 1]) * (fa + fb);
        }
        CHECK(U[i] == doctest::Approx(s).epsilon(1e-13));
    }

    // splitting at a sample time telescopes to roundoff
    ScalarField Ua = accumulate_U(traj, 2.0, 0.0, 0.1);
    ScalarField Ub = accumulate_U(traj, 2.0, 0.1, 0.2);
    for (std::size_t i = 0; i < U.size(); ++i)
        CHECK(std::abs(Ua[i] + Ub[i] - U[i]) <= 1e-13 * (1.0 + U[i]));
}

TEST_CASE("constant very-weak witness has a flat U, the box solution does not") {
    Grid g = make_grid(2, 6.0, 47);
    double c = 1.5, m = 2.0, T = 1.0;
    Trajectory flat = constant_trajectory(g, c, {0.0, 0.5, 1.0});
    ScalarField Uflat = accumulate_U(flat, m, 0.0, T);
    for (std::size_t i = 0; i < Uflat.size(); i += 11)
        CHECK(Uflat[i] == doctest::Approx(c * c * T).epsilon(1e-14));

    // same datum, fast-decay density: the Dirichlet run's U decays outward
    DensityProfile rho = power_tail_density(1.0, 3.0, 1.0);
    ScalarField rf = sample_profile(rho, g);
    ScalarField u0(g, c, true);
    PhysParams params = make_phys_params(1.0, m);
    SpectralOperator op(g, 1.0);
    StepperConfig cfg;
    cfg.dt = 0.05;
    Trajectory traj = solve_dirichlet(u0, rf, params, op, cfg, T);
    ScalarField Umin = accumulate_U(traj, m, 0.0, T);

    std::size_t outer = g.index(g.n - 2, (g.n - 1) / 2);  // near the face
    std::size_t center = g.index((g.n - 1) / 2, (g.n - 1) / 2);
    CHECK(Umin[outer] < 0.5 * c * c * T);
    CHECK(Umin[center] <= c * c * T * (1.0 + 1e-12));
    CHECK(Umin[outer] < Umin[center]);

    // paper's a priori bound on U at outer nodes, off the bump's support
    RieszEvaluator ev = make_riesz_evaluator(g, 1.0);
    for (int i : {0, g.n - 1}) {
        double x[2];
        std::size_t idx = g.index(i, (g.n - 1) / 2);
        g.coords(idx, x);
        double bound = 2.0 * c * riesz_potential(ev, rf, &rho, x);
        CHECK(Umin[idx] <= bound * 1.05);
    }
}

TEST_CASE("green identity holds for a linear run") {
    Grid g = make_grid(2, 8.0, 63);
    DensityProfile rho = power_tail_density(1.0, 3.0, 1.0);
    ScalarField rf = sample_profile(rho, g);
    ScalarField u0 = gaussian_2d(g, 1.0, 1.0);
    PhysParams params = make_phys_params(1.0, 1.0);
    SpectralOperator op(g, 1.0);
    StepperConfig cfg;
    cfg.dt = 0.01;
    Trajectory traj = solve_dirichlet(u0, rf, params, op, cfg, 0.1);

    CHECK(green_identity_residual(traj, rf, rho, params, 0.1, 0.1, 2.0) == 0.0);

    double res = green_identity_residual(traj, rf, rho, params, 0.0, 0.1, 2.0);
    CHECK(res < 0.05);

    // simultaneous (h, dt) refinement by 2x shrinks the residual
    Grid gc = make_grid(2, 8.0, 31);
    ScalarField rfc = sample_profile(rho, gc);
    ScalarField u0c = gaussian_2d(gc, 1.0, 1.0);
    SpectralOperator opc(gc, 1.0);
    StepperConfig cfgc;
    cfgc.dt = 0.02;
    Trajectory trajc = solve_dirichlet(u0c, rfc, params, opc, cfgc, 0.1);
    double resc = green_identity_residual(trajc, rfc, rho, params, 0.0, 0.1, 2.0);
    CHECK(res / resc < 0.7);

    CHECK_THROWS_AS(green_identity_residual(traj, rf, rho, params, 0.0, 0.1, 9.0),
                    std::invalid_argument);
    CHECK_THROWS_AS(green_identity_residual(traj, rf, rho, params, 0.035, 0.1, 2.0),
                    std::invalid_argument);  // tau off the sample grid
}

TEST_CASE("green identity input validation") {
    Grid g = make_grid(2, 4.0, 15);
    DensityProfile rho = power_tail_density(1.0, 3.0, 1.0);
    ScalarField rf = sample_profile(rho, g);
    Trajectory flat = constant_trajectory(g, 1.0, {0.0, 1.0});
    PhysParams params = make_phys_params(1.0, 1.0);

    CHECK_THROWS_AS(green_identity_residual(flat, rf, rho, params, 0.0, 1.0, 4.0),
                    std::invalid_argument);  // window not strictly inside
    CHECK_THROWS_AS(green_identity_residual(flat, rf, rho, params, 0.0, 0.7, 2.0),
                    std::invalid_argument);  // t off the sample grid
    DensityProfile flat_rho = constant_density(1.0);
    ScalarField ff = sample_profile(flat_rho, g);
    CHECK_THROWS_AS(
        green_identity_residual(flat, ff, flat_rho, params, 0.0, 1.0, 2.0),
        std::invalid_argument);  // not a fast-decay density

    Grid g1 = make_grid(1, 4.0, 15);
    Trajectory one = constant_trajectory(g1, 1.0, {0.0, 1.0});
    ScalarField r1(g1, 1.0, true);
    CHECK_THROWS_AS(green_identity_residual(one, r1, rho, params, 0.0, 1.0, 2.0),
                    std::invalid_argument);  // N = 1
}
