#include "fpme/initial_data.hpp"

#include <cmath>
#include <stdexcept>

namespace fpme {

ScalarField sample_datum(const InitialDatum& d, const Grid& grid) {
    if (!(d.amplitude >= 0.0))
        throw std::invalid_argument("initial datum amplitude must be >= 0");
    if (d.kind == DatumKind::power_singularity &&
        !(d.beta > 0.0 && d.beta < grid.N))
        throw std::invalid_argument(
            "power singularity exponent must lie in (0, N)");

    ScalarField f(grid, 0.0, true);
    const double pi = 3.14159265358979323846;
    double x[2];
    for (std::size_t i = 0; i < f.size(); ++i) {
        grid.coords(i, x);
        double dx = x[0] - d.center[0];
        double r2 = dx * dx;
        if (grid.N == 2) {
            double dy = x[1] - d.center[1];
            r2 += dy * dy;
        }
        double val = 0.0;
        switch (d.kind) {
            case DatumKind::constant:
                val = d.amplitude;
                break;
            case DatumKind::gaussian_bump:
                val = d.amplitude * std::exp(-r2 / (d.width * d.width));
                break;
            case DatumKind::eigenmode: {
                val = d.amplitude;
                for (int a = 0; a < grid.N; ++a)
                    val *= std::sin(pi * (x[a] + grid.R) / (2.0 * grid.R));
                break;
            }
            case DatumKind::power_singularity: {
                double r = std::max(std::sqrt(r2), grid.h / 2.0);
                val = d.amplitude * std::pow(r, -d.beta);
                break;
            }
            case DatumKind::indicator_ball:
                val = (r2 <= d.radius * d.radius) ? d.amplitude : 0.0;
                break;
        }
        f[i] = std::min(val, d.cap);
    }
    return f;
}

}  // namespace fpme
