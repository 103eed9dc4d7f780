#include "fpme/grid.hpp"

namespace fpme {

Grid make_grid(int N, double R, int n) {
    if (N != 1 && N != 2)
        throw std::invalid_argument("make_grid: dimension must be 1 or 2");
    if (!(R > 0.0))
        throw std::invalid_argument("make_grid: radius must be positive");
    if (n < 8)
        throw std::invalid_argument("make_grid: need at least 8 nodes per axis");

    Grid g;
    g.N = N;
    g.n = n;
    g.h = 2.0 * R / (n + 1);
    g.R = g.h * (n + 1) / 2.0;  // re-derive so h*(n+1) == 2R exactly
    return g;
}

}  // namespace fpme
