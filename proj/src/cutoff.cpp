#include "fpme/cutoff.hpp"

#include <cmath>
#include <stdexcept>

namespace fpme {

double cutoff_profile(double s) {
    if (s <= 1.0) return 1.0;
    if (s >= 2.0) return 0.0;
    double t = s - 1.0;
    // 1 - (6t^5 - 15t^4 + 10t^3): value 1->0, first and second derivatives
    // vanish at t = 0 and t = 1
    return 1.0 - t * t * t * (10.0 + t * (-15.0 + 6.0 * t));
}

double cutoff_profile_d1(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    double t = s - 1.0;
    return -t * t * (30.0 + t * (-60.0 + 30.0 * t));
}

double cutoff_profile_d2(double s) {
    if (s <= 1.0 || s >= 2.0) return 0.0;
    double t = s - 1.0;
    return -t * (60.0 + t * (-180.0 + 120.0 * t));
}

double CutoffFamily::value_radius(double r) const { return cutoff_profile(r / R); }

double CutoffFamily::value(const double* x, int N) const {
    double r2 = 0.0;
    for (int d = 0; d < N; ++d) r2 += x[d] * x[d];
    return value_radius(std::sqrt(r2));
}

CutoffFamily make_cutoff(double R) {
    if (!(R > 0.0)) throw std::invalid_argument("cutoff scale must be positive");
    return CutoffFamily{R};
}

double cutoff_value(const CutoffFamily& family, const double* x, int N) {
    return family.value(x, N);
}

}  // namespace fpme
