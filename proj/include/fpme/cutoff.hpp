#pragma once

namespace fpme {

// Radial cutoff profile: eta = 1 on [0,1], 0 on [2,inf), bridged on (1,2) by
// the unique quintic with vanishing first and second derivatives at both
// ends, so the profile is C^2 and nonincreasing.
double cutoff_profile(double s);

// first and second radial derivatives of the profile
double cutoff_profile_d1(double s);
double cutoff_profile_d2(double s);

// phi_R(x) = eta(|x|/R)
struct CutoffFamily {
    double R = 1.0;

    double value_radius(double r) const;
    double value(const double* x, int N) const;
};

CutoffFamily make_cutoff(double R);

double cutoff_value(const CutoffFamily& family, const double* x, int N);

}  // namespace fpme
