#pragma once

#include <array>
#include <limits>

#include "fpme/field.hpp"
#include "fpme/grid.hpp"

namespace fpme {

enum class DatumKind {
    constant,
    gaussian_bump,
    eigenmode,          // lowest sine mode per axis, nonnegative on the box
    power_singularity,  // amplitude * |x-center|^-beta, capped at the grid scale
    indicator_ball
};

struct InitialDatum {
    DatumKind kind = DatumKind::constant;
    double amplitude = 1.0;
    std::array<double, 2> center{0.0, 0.0};
    double width = 1.0;   // gaussian length scale
    double beta = 0.5;    // power singularity exponent, 0 < beta < N
    double radius = 1.0;  // indicator ball radius
    // optional truncation height (caps the sampled values at this level);
    // infinity means no cap
    double cap = std::numeric_limits<double>::infinity();
};

// Sample on the grid. power_singularity is regularized as
// amplitude * max(|x-center|, h/2)^-beta so the sampled field stays finite.
ScalarField sample_datum(const InitialDatum& d, const Grid& grid);

}  // namespace fpme
