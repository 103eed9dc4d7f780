#include "fpme/singular_integral.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fpme/cutoff.hpp"
#include "fpme/gauss.hpp"

namespace fpme {

QuadratureSpec default_quadrature(double scale) {
    if (!(scale > 0.0)) throw std::invalid_argument("quadrature scale must be positive");
    QuadratureSpec q;
    q.eps = 1e-5 * scale;
    q.X = 50.0 * scale;
    return q;
}

double normalization_constant(int N, double sigma) {
    if (N < 1) throw std::invalid_argument("dimension must be >= 1");
    if (!(sigma > 0.0 && sigma < 2.0)) {
        throw std::invalid_argument("integral order must lie in (0,2)");
    }
    return std::pow(2.0, sigma - 1.0) * sigma * std::tgamma((N + sigma) / 2.0) /
           (std::pow(M_PI, N / 2.0) * std::tgamma(1.0 - sigma / 2.0));
}

namespace {

void check_spec(const QuadratureSpec& q) {
    if (!(q.eps > 0.0)) throw std::invalid_argument("inner radius must be positive");
    if (!(q.X > 2.0 * q.eps)) throw std::invalid_argument("outer radius too small");
    if (q.near_panels < 16 || q.far_panels < 16) {
        throw std::invalid_argument("panel counts must be >= 16");
    }
    if (q.gauss_points < 4 || q.angular_points < 4) {
        throw std::invalid_argument("quadrature orders must be >= 4");
    }
}

// panel edges: geometric refinement toward eps plus any breakpoints that
// fall strictly inside (eps, X)
std::vector<double> panel_edges(const QuadratureSpec& q,
                                const std::vector<double>& breaks) {
    std::vector<double> edges;
    double mid = std::sqrt(q.eps * q.X);
    double r1 = std::pow(mid / q.eps, 1.0 / q.near_panels);
    for (int i = 0; i <= q.near_panels; ++i) edges.push_back(q.eps * std::pow(r1, i));
    double r2 = std::pow(q.X / mid, 1.0 / q.far_panels);
    for (int i = 1; i <= q.far_panels; ++i) edges.push_back(mid * std::pow(r2, i));
    for (double b : breaks) {
        if (b > q.eps * (1.0 + 1e-12) && b < q.X * (1.0 - 1e-12)) edges.push_back(b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end(),
                            [](double a, double b) { return b - a < 1e-12 * b; }),
                edges.end());
    return edges;
}

// positive radii at which the ray x +/- r w crosses the sphere |z| = c
void crossing_radii(const double* x, const double* w, int N, double c,
                    std::vector<double>& out) {
    double b = 0.0, xx = 0.0;
    for (int d = 0; d < N; ++d) {
        b += x[d] * w[d];
        xx += x[d] * x[d];
    }
    double disc = b * b - xx + c * c;
    if (disc < 0.0) return;
    double s = std::sqrt(disc);
    for (double r : {-b + s, -b - s, b + s, b - s}) {
        if (r > 0.0) out.push_back(r);
    }
}

// second derivative along axis d by the fourth-order five-point stencil
double second_derivative(const AnalyticFunction& f, const double* x, int d,
                         double step) {
    double p[2];
    auto at = [&](double off) {
        p[0] = x[0];
        if (f.N == 2) p[1] = x[1];
        p[d] += off;
        return f.eval(p);
    };
    return (-at(2 * step) + 16.0 * at(step) - 30.0 * at(0.0) + 16.0 * at(-step) -
            at(-2 * step)) /
           (12.0 * step * step);
}

// int over [a,b] of (2 f(x) - f(x+r w) - f(x-r w)) r^(-1-sigma) dr
double radial_panel(const AnalyticFunction& f, const double* x, const double* w,
                    double fx2, double sigma, double a, double b, int points) {
    auto integrand = [&](double r) {
        double zp[2], zm[2];
        for (int d = 0; d < f.N; ++d) {
            zp[d] = x[d] + r * w[d];
            zm[d] = x[d] - r * w[d];
        }
        double diff = fx2 - f.eval(zp) - f.eval(zm);
        return diff * std::pow(r, -1.0 - sigma);
    };
    return gauss_integrate(integrand, a, b, points);
}

}  // namespace

double apply_singular_integral(const AnalyticFunction& f, const double* x,
                               double sigma, const QuadratureSpec& spec,
                               bool* tail_flag) {
    if (f.N != 1 && f.N != 2) throw std::invalid_argument("dimension must be 1 or 2");
    if (!f.eval) throw std::invalid_argument("function is empty");
    if (!(sigma > 0.0 && sigma < 2.0)) {
        throw std::invalid_argument("integral order must lie in (0,2)");
    }
    check_spec(spec);
    if (tail_flag) *tail_flag = false;

    double fx = f.eval(x);
    double fx2 = 2.0 * fx;

    // near-field Taylor term: the symmetrized difference is -r^2 w.H(x) w to
    // second order, and averaging w.H w over directions leaves the Laplacian
    double fd_step = 1e-3 * f.scale;
    double inner;
    if (f.N == 1) {
        inner = -second_derivative(f, x, 0, fd_step) * std::pow(spec.eps, 2.0 - sigma) /
                (2.0 - sigma);
    } else {
        double lap = second_derivative(f, x, 0, fd_step) +
                     second_derivative(f, x, 1, fd_step);
        inner = -(M_PI / 2.0) * lap * std::pow(spec.eps, 2.0 - sigma) / (2.0 - sigma);
    }

    // middle region [eps, X]: radial Gauss panels, per direction for N=2
    double middle = 0.0;
    std::vector<double> breaks;
    if (f.N == 1) {
        double w[1] = {1.0};
        for (double c : spec.kink_radii) crossing_radii(x, w, 1, c, breaks);
        auto edges = panel_edges(spec, breaks);
        for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
            middle += radial_panel(f, x, w, fx2, sigma, edges[i], edges[i + 1],
                                   spec.gauss_points);
        }
    } else {
        // equispaced midpoints on the half circle: the integrand is smooth and
        // pi-periodic in the angle, so this converges spectrally
        int M = spec.angular_points;
        double wa = M_PI / M;
        for (int a = 0; a < M; ++a) {
            double th = (a + 0.5) * M_PI / M;
            double w[2] = {std::cos(th), std::sin(th)};
            breaks.clear();
            for (double c : spec.kink_radii) crossing_radii(x, w, 2, c, breaks);
            auto edges = panel_edges(spec, breaks);
            double ray = 0.0;
            for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
                ray += radial_panel(f, x, w, fx2, sigma, edges[i], edges[i + 1],
                                    spec.gauss_points);
            }
            middle += wa * ray;
        }
    }

    // analytic tail past X, assuming f has settled at its limit there
    double limit = f.limit_at_infinity;
    if (!f.has_limit) {
        limit = 0.0;
        if (tail_flag) *tail_flag = true;
    }
    double solid = f.N == 1 ? 2.0 : 2.0 * M_PI;
    double tail = solid * (fx - limit) * std::pow(spec.X, -sigma) / sigma;

    return normalization_constant(f.N, sigma) * (inner + middle + tail);
}

double cutoff_scaling_residual(double R, const double* x, int N, double sigma,
                               const QuadratureSpec& spec) {
    if (N != 1 && N != 2) throw std::invalid_argument("dimension must be 1 or 2");
    // at R = 1 both sides are the same expression, identical by construction
    if (R == 1.0) return 0.0;
    CutoffFamily big = make_cutoff(R);
    AnalyticFunction fR{N, [&](const double* z) { return big.value(z, N); }, 0.0, true,
                        R};
    QuadratureSpec specR = spec;
    specR.kink_radii.push_back(R);
    specR.kink_radii.push_back(2.0 * R);
    double lhs = apply_singular_integral(fR, x, sigma, specR);

    // reference side on a deliberately different layout so agreement reflects
    // the scaling identity, not identical arithmetic
    CutoffFamily unit = make_cutoff(1.0);
    AnalyticFunction f1{N, [&](const double* z) { return unit.value(z, N); }, 0.0,
                        true, 1.0};
    double y[2] = {x[0] / R, N == 2 ? x[1] / R : 0.0};
    double ynorm = std::sqrt(y[0] * y[0] + y[1] * y[1]);
    QuadratureSpec spec1 = default_quadrature(1.0);
    spec1.X = std::max(spec1.X, ynorm + 10.0);
    spec1.near_panels = spec.near_panels + 4;
    spec1.far_panels = spec.far_panels + 4;
    spec1.gauss_points = spec.gauss_points + 8;
    spec1.angular_points = spec.angular_points + 8;
    spec1.kink_radii = {1.0, 2.0};
    double rhs = std::pow(R, -sigma) * apply_singular_integral(f1, y, sigma, spec1);

    return std::abs(lhs - rhs);
}

}  // namespace fpme
