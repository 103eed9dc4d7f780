#include "oracles.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

double gamma(double x) {
    // Lanczos approximation, g = 7, 9 coefficients.
    static const double coef[9] = {
        0.99999999999980993,     676.5203681218851,     -1259.1392167224028,
        771.32342877765313,     -176.61502916214059,    12.507343278686905,
        -0.13857109526572012,   9.9843695780195716e-6,  1.5056327351493116e-7};
    if (x < 0.5) {
        // reflection formula
        return M_PI / (std::sin(M_PI * x) * gamma(1.0 - x));
    }
    double z = x - 1.0;
    double a = coef[0];
    for (int i = 1; i < 9; ++i) a += coef[i] / (z + i);
    double t = z + 7.5;
    return std::sqrt(2.0 * M_PI) * std::pow(t, z + 0.5) * std::exp(-t) * a;
}

double gaussian_fraclap_1d(double sigma, double x0) {
    // Substitute xi = t^2 so the xi^sigma factor becomes t^(2*sigma+1),
    // a polynomial for half-integer sigma; then composite Simpson.
    // Integrand dies like exp(-t^4/4); t = 9 gives exp(-1640).
    const double tmax = 9.0;
    const int nseg = 1 << 17;  // Simpson segments (even count of panels)
    const double dt = tmax / nseg;
    auto f = [&](double t) {
        return 2.0 * std::pow(t, 2.0 * sigma + 1.0) * std::exp(-t * t * t * t / 4.0) *
               std::cos(t * t * x0);
    };
    double sum = f(0.0) + f(tmax);
    for (int i = 1; i < nseg; ++i) sum += (i % 2 ? 4.0 : 2.0) * f(i * dt);
    double integral = sum * dt / 3.0;
    return integral / std::sqrt(M_PI);
}

namespace {

constexpr int kScanPoints = 2001;

// Scan an open interval (lo, hi) with interior points only.
template <typename F>
void scan_open(double lo, double hi, F&& visit) {
    if (!(hi > lo)) return;
    for (int i = 1; i < kScanPoints; ++i) {
        visit(lo + (hi - lo) * i / kScanPoints);
    }
}

// Geometric variant for the r intervals: their upper end can be enormous
// (it diverges near the nu boundary) while the optimum hugs the lower end,
// so linear spacing would miss it.
template <typename F>
void scan_open_geometric(double lo, double hi, F&& visit) {
    if (!(hi > lo) || !(lo > 0.0)) return;
    double ratio = hi / lo;
    for (int i = 1; i < kScanPoints; ++i) {
        visit(lo * std::pow(ratio, static_cast<double>(i) / kScanPoints));
    }
}

}  // namespace

ExponentScan scan_fast_decay_2d(double sigma, double alpha) {
    ExponentScan out;
    out.best_exponent = std::numeric_limits<double>::infinity();
    scan_open(0.0, sigma, [&](double nu) {
        double rlo = std::max({2.0 / sigma, 2.0 / (2.0 - nu), 2.0 / (alpha - nu), 1.0});
        double rhi = 2.0 / (sigma - nu);
        if (alpha - nu <= 0.0) return;
        scan_open_geometric(rlo, rhi, [&](double r) {
            double e = sigma - nu - 2.0 / r;
            if (e < out.best_exponent) {
                out.feasible = true;
                out.best_exponent = e;
                out.r = r;
                out.nu = nu;
            }
        });
    });
    return out;
}

ExponentScan scan_fast_decay_3d_plus(int N, double sigma, double alpha) {
    ExponentScan out;
    out.best_exponent = std::numeric_limits<double>::infinity();
    double rlo = std::max({static_cast<double>(N) / alpha, 2.0 / sigma, 1.0});
    double rhi = static_cast<double>(N) / sigma;
    scan_open_geometric(rlo, rhi, [&](double r) {
        double e = sigma - N / r;
        if (e < out.best_exponent) {
            out.feasible = true;
            out.best_exponent = e;
            out.r = r;
            out.nu = 0.0;
        }
    });
    return out;
}

ExponentScan scan_very_fast_decay(int N, double sigma, double alpha) {
    ExponentScan out;
    out.best_exponent = std::numeric_limits<double>::infinity();
    scan_open(N * (2.0 - sigma) / 2.0, static_cast<double>(N), [&](double nu) {
        if (alpha - nu <= 0.0 || N - nu <= 0.0) return;
        double rlo = std::max({2.0 / sigma, N / (alpha - nu), 1.0});
        double rhi = N / (N - nu);
        scan_open_geometric(rlo, rhi, [&](double r) {
            double e = sigma - nu - N / r;
            if (e < out.best_exponent) {
                out.feasible = true;
                out.best_exponent = e;
                out.r = r;
                out.nu = nu;
            }
        });
    });
    return out;
}

}  // namespace oracle
