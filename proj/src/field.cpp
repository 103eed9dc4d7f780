#include "fpme/field.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fpme {

double pairwise_sum(const double* a, std::size_t len) {
    if (len <= 32) {
        double s = 0.0;
        for (std::size_t i = 0; i < len; ++i) s += a[i];
        return s;
    }
    std::size_t half = len / 2;
    return pairwise_sum(a, half) + pairwise_sum(a + half, len - half);
}

namespace {

// pairwise reduction of a transformed sequence without materializing it
template <class F>
double pairwise_map_sum(std::size_t lo, std::size_t hi, const F& f) {
    if (hi - lo <= 32) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += f(i);
        return s;
    }
    std::size_t mid = lo + (hi - lo) / 2;
    return pairwise_map_sum(lo, mid, f) + pairwise_map_sum(mid, hi, f);
}

double cell_measure(const Grid& g) {
    return g.N == 1 ? g.h : g.h * g.h;
}

void require_same_grid(const ScalarField& a, const ScalarField& b) {
    if (!a.grid.same_as(b.grid))
        throw std::invalid_argument("fields live on different grids");
}

}  // namespace

double l2_norm(const std::vector<double>& a) {
    return std::sqrt(pairwise_map_sum(0, a.size(), [&](std::size_t i) {
        return a[i] * a[i];
    }));
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
    return pairwise_map_sum(0, a.size(), [&](std::size_t i) {
        return a[i] * b[i];
    });
}

double sup_norm(const ScalarField& f) {
    double m = 0.0;
    for (double x : f.v) m = std::max(m, std::abs(x));
    return m;
}

double weighted_norm(const ScalarField& f, const ScalarField& rho, double q) {
    require_same_grid(f, rho);
    if (std::isinf(q)) return sup_norm(f);
    if (!(q >= 1.0))
        throw std::invalid_argument("weighted_norm: exponent must be >= 1");
    const double hN = cell_measure(f.grid);
    double s = pairwise_map_sum(0, f.size(), [&](std::size_t i) {
        return std::pow(std::abs(f[i]), q) * rho[i];
    });
    return std::pow(s * hN, 1.0 / q);
}

double weighted_integral(const ScalarField& f, const ScalarField& rho) {
    require_same_grid(f, rho);
    const double hN = cell_measure(f.grid);
    return hN * pairwise_map_sum(0, f.size(), [&](std::size_t i) {
        return f[i] * rho[i];
    });
}

double positive_part_mass(const ScalarField& f, const ScalarField& g,
                          const ScalarField& rho) {
    require_same_grid(f, g);
    require_same_grid(f, rho);
    const double hN = cell_measure(f.grid);
    return hN * pairwise_map_sum(0, f.size(), [&](std::size_t i) {
        double d = f[i] - g[i];
        return d > 0.0 ? d * rho[i] : 0.0;
    });
}

}  // namespace fpme
