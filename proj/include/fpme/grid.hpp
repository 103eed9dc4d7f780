#pragma once

#include <cstddef>
#include <stdexcept>

namespace fpme {

// Uniform grid of interior nodes on the box [-R,R]^N with homogeneous
// Dirichlet boundary. Axis nodes are x_i = -R + h*(i+1), i = 0..n-1, so the
// boundary itself carries no node. R is stored as h*(n+1)/2 so that
// h*(n+1) == 2*R holds exactly in floating point.
struct Grid {
    int N = 1;        // dimension, 1 or 2
    int n = 0;        // interior nodes per axis
    double h = 0.0;   // spacing, 2R/(n+1)
    double R = 0.0;   // half-width of the box

    std::size_t node_count() const {
        std::size_t m = static_cast<std::size_t>(n);
        return N == 1 ? m : m * m;
    }

    // coordinate along one axis, i in [0, n)
    double axis_coord(int i) const { return h * (i + 1) - R; }

    // row-major flattening for N=2: node (i,j) -> i*n + j
    std::size_t index(int i, int j = 0) const {
        return static_cast<std::size_t>(i) * (N == 2 ? n : 1) + j;
    }

    // coordinates of a flattened node index; x must hold N doubles
    void coords(std::size_t idx, double* x) const {
        if (N == 1) {
            x[0] = axis_coord(static_cast<int>(idx));
        } else {
            x[0] = axis_coord(static_cast<int>(idx) / n);
            x[1] = axis_coord(static_cast<int>(idx) % n);
        }
    }

    bool same_as(const Grid& o) const {
        return N == o.N && n == o.n && h == o.h;
    }
};

Grid make_grid(int N, double R, int n);

}  // namespace fpme
