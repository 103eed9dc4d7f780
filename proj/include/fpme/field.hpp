#pragma once

#include <cstddef>
#include <vector>

#include "fpme/grid.hpp"

namespace fpme {

// Sampled scalar function on the interior nodes of a Grid.
struct ScalarField {
    Grid grid;
    std::vector<double> v;
    bool nonnegative = false;

    ScalarField() = default;
    explicit ScalarField(const Grid& g, double fill = 0.0, bool nonneg = false)
        : grid(g), v(g.node_count(), fill), nonnegative(nonneg) {}

    std::size_t size() const { return v.size(); }
    double& operator[](std::size_t i) { return v[i]; }
    double operator[](std::size_t i) const { return v[i]; }
};

// Deterministic pairwise (tree) summation: the order is a fixed function of
// the length, independent of threading, so reductions reproduce bit-for-bit.
double pairwise_sum(const double* a, std::size_t len);

// l2 norm of the raw value vector (no quadrature weight)
double l2_norm(const std::vector<double>& a);
double dot(const std::vector<double>& a, const std::vector<double>& b);

double sup_norm(const ScalarField& f);

// (sum_i |f_i|^q rho_i h^N)^(1/q) for finite q >= 1; sup norm for q = inf.
// Pass q = std::numeric_limits<double>::infinity() for the sup norm.
double weighted_norm(const ScalarField& f, const ScalarField& rho, double q);

// weighted L1 mass of a signed field without absolute value: sum f rho h^N
double weighted_integral(const ScalarField& f, const ScalarField& rho);

// sum of the positive part: sum (f-g)_+ rho h^N
double positive_part_mass(const ScalarField& f, const ScalarField& g,
                          const ScalarField& rho);

}  // namespace fpme
