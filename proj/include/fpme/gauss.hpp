#pragma once

#include <vector>

namespace fpme {

// Gauss-Legendre rule on [-1,1]. Nodes and weights are computed once per
// order by Newton iteration on the Legendre recurrence and cached.
struct GaussRule {
    std::vector<double> nodes;
    std::vector<double> weights;
};

const GaussRule& gauss_legendre(int points);

// integrate f over [a,b] with the cached rule
template <typename F>
double gauss_integrate(const F& f, double a, double b, int points) {
    const GaussRule& rule = gauss_legendre(points);
    double mid = 0.5 * (a + b), half = 0.5 * (b - a);
    double acc = 0.0;
    for (std::size_t i = 0; i < rule.nodes.size(); ++i) {
        acc += rule.weights[i] * f(mid + half * rule.nodes[i]);
    }
    return acc * half;
}

}  // namespace fpme
