#include "fpme/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "fpme/gauss.hpp"

namespace fpme {

namespace {

constexpr double kPi = 3.14159265358979323846;

// integral of |z|^(sigma-2) over the square [-a,a]^2 is (8 a^sigma / sigma)
// times this angular factor (split the square into eight octant triangles,
// each reaching to a/cos(theta))
double sec_power_integral(double sigma) {
    return gauss_integrate(
        [sigma](double t) { return std::pow(std::cos(t), -sigma); }, 0.0,
        kPi / 4.0, 48);
}

// Coefficients of the angular average of the kernel around a circle:
//   (2 pi)^-1 int_0^{2pi} (1 - 2 z cos(t) + z^2)^(-lambda) dt
//     = sum_k ((lambda)_k / k!)^2 z^(2k)
// truncated after four terms. With z = min(|x|,s)/max(|x|,s) this averages
// |x-y|^(sigma-2) over the circle |y| = s, up to the factor max(|x|,s)^(sigma-2).
struct KernelAverage {
    double g[4];
    explicit KernelAverage(double sigma) {
        double lambda = (2.0 - sigma) / 2.0;
        g[0] = 1.0;
        double poch = 1.0;
        for (int k = 1; k < 4; ++k) {
            poch *= (lambda + (k - 1)) / k;
            g[k] = poch * poch;
        }
    }
    double series(double z2) const {
        return g[0] + z2 * (g[1] + z2 * (g[2] + z2 * g[3]));
    }
};

// integral of tail(|y|) |x-y|^(sigma-2) over |y| > RT for a radial tail
double tail_beyond_disk(const DensityProfile& tail, double sigma, double RT,
                        double r) {
    KernelAverage avg(sigma);
    auto ring = [&](double s) {
        double big = std::max(r, s);
        double z = (big == 0.0) ? 0.0 : std::min(r, s) / big;
        return tail.value_r2(s * s) * 2.0 * kPi * s *
               std::pow(big, sigma - 2.0) * avg.series(z * z);
    };

    double total = 0.0;
    // inner piece when the target sits beyond the disk
    if (r > RT) {
        double lo = RT;
        for (int p = 0; p < 16; ++p) {
            double hi = RT * std::pow(r / RT, (p + 1) / 16.0);
            total += gauss_integrate(ring, lo, hi, 32);
            lo = hi;
        }
    }
    // outer piece on geometric panels up to S, then the power-law remainder
    double b = std::max(RT, r);
    double S = std::max({20.0 * r, 50.0 * tail.s0, 10.0 * b});
    double lo = b;
    for (int p = 0; p < 24; ++p) {
        double hi = b * std::pow(S / b, (p + 1) / 24.0);
        total += gauss_integrate(ring, lo, hi, 32);
        lo = hi;
    }
    // beyond S the profile is c s^-alpha to relative accuracy (s0/S)^2, and
    // each series term integrates in closed form
    for (int k = 0; k < 4; ++k) {
        double p = tail.alpha + 2.0 * k - sigma;
        total += 2.0 * kPi * tail.c * avg.g[k] * std::pow(r, 2.0 * k) *
                 std::pow(S, -p) / p;
    }
    return total;
}

}  // namespace

RieszEvaluator make_riesz_evaluator(const Grid& grid, double sigma) {
    if (grid.node_count() == 0)
        throw std::invalid_argument("riesz evaluator: empty grid");
    if (!(sigma > 0.0 && sigma < 2.0))
        throw std::invalid_argument("riesz evaluator: sigma must lie in (0,2)");
    if (!(sigma < grid.N))
        throw std::invalid_argument(
            "riesz evaluator: kernel |x|^(sigma-N) needs sigma < N");

    RieszEvaluator ev;
    ev.grid = grid;
    ev.sigma = sigma;
    double a = grid.h / 2.0;
    if (grid.N == 1) {
        ev.singular_weight = 2.0 * std::pow(a, sigma) / sigma;
    } else if (sigma == 1.0) {
        ev.singular_weight = 4.0 * grid.h * std::log(1.0 + std::sqrt(2.0));
    } else {
        ev.singular_weight =
            (8.0 / sigma) * std::pow(a, sigma) * sec_power_integral(sigma);
    }
    return ev;
}

double riesz_inversion_constant(int N, double sigma) {
    if (N < 1) throw std::invalid_argument("riesz constant: N must be positive");
    if (!(sigma > 0.0 && sigma < 2.0 && sigma < N))
        throw std::invalid_argument(
            "riesz constant: need sigma in (0,2) with sigma < N");
    return std::pow(kPi, N / 2.0) * std::pow(2.0, sigma) *
           std::tgamma(sigma / 2.0) / std::tgamma((N - sigma) / 2.0);
}

double riesz_potential(const RieszEvaluator& ev, const ScalarField& rho,
                       const DensityProfile* tail, const double* x) {
    const Grid& g = ev.grid;
    if (g.N < 2)
        throw std::invalid_argument("riesz potential: requires N >= 2");
    if (!rho.grid.same_as(g))
        throw std::invalid_argument("riesz potential: field grid mismatch");
    if (x == nullptr)
        throw std::invalid_argument("riesz potential: null evaluation point");
    if (tail != nullptr) {
        TailClass tc = tail->tail_class(ev.sigma, g.N);
        if (tc != TailClass::A2 && tc != TailClass::A2star)
            throw std::invalid_argument(
                "riesz potential: tail integral needs alpha > sigma");
    }

    // Cell sum. With an analytic tail the grid carries only the inscribed
    // disk |y| <= R and the profile carries everything beyond; without one
    // the full box is summed. The host cell of x (if any) gets the analytic
    // kernel integral over one cell in place of the divergent point value.
    double exponent = ev.sigma - g.N;
    double cell = g.h * g.h;
    double half = g.h / 2.0;
    double R2 = g.R * g.R;
    std::vector<double> terms;
    terms.reserve(g.node_count());
    double y[2];
    for (std::size_t j = 0; j < g.node_count(); ++j) {
        double w = rho[j];
        if (w == 0.0) continue;
        g.coords(j, y);
        if (tail != nullptr && y[0] * y[0] + y[1] * y[1] > R2) continue;
        double dx = x[0] - y[0];
        double dy = x[1] - y[1];
        if (std::abs(dx) <= half && std::abs(dy) <= half) {
            terms.push_back(w * ev.singular_weight);
        } else {
            terms.push_back(w * cell *
                            std::pow(dx * dx + dy * dy, exponent / 2.0));
        }
    }
    double total = pairwise_sum(terms.data(), terms.size());

    if (tail != nullptr) {
        double r = std::sqrt(x[0] * x[0] + x[1] * x[1]);
        total += tail_beyond_disk(*tail, ev.sigma, g.R, r);
    }
    return total;
}

}  // namespace fpme
