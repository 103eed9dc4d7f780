#include "fpme/potentials.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace fpme {

namespace {

// margin by which the reported witness is pulled inside the open admissible set
constexpr double kMargin = 0.01;

}  // namespace

DecayQuery make_decay_query(int N, double sigma, double alpha, TailClass regime) {
    if (N < 2)
        throw std::invalid_argument("decay query: N must be at least 2");
    if (!(sigma > 0.0 && sigma < 2.0))
        throw std::invalid_argument("decay query: sigma must lie in (0,2)");
    if (regime != TailClass::A2 && regime != TailClass::A2star)
        throw std::invalid_argument(
            "decay query: only the fast-decay regimes A2 and A2star have "
            "predicted exponents");
    if (!(alpha > sigma))
        throw std::invalid_argument(
            "decay query: regime A2 needs alpha > sigma");
    if (regime == TailClass::A2star && !(alpha > N))
        throw std::invalid_argument(
            "decay query: regime A2star needs alpha > N");
    DecayQuery q;
    q.N = N;
    q.sigma = sigma;
    q.alpha = alpha;
    q.regime = regime;
    return q;
}

// The decay rate t^(e) holds with e = sigma - nu - N/r for every pair (r, nu)
// satisfying the regime's open constraints (nu = 0 and N/r -> 2/r in the
// planar A2 case). The best exponent sits on the boundary; the witness backs
// off by kMargin so the reported pair is strictly admissible.
PredictedDecay predicted_decay(const DecayQuery& q) {
    make_decay_query(q.N, q.sigma, q.alpha, q.regime);  // reject hand-built bad queries
    double sg = q.sigma, al = q.alpha;
    double N = q.N;
    PredictedDecay out;

    if (q.regime == TailClass::A2 && q.N == 2) {
        // e = sigma - nu - 2/r,  0 < nu < sigma,
        // r > max(2/sigma, 2/(2-nu), 2/(alpha-nu)),  r < 2/(sigma-nu)
        out.infimum = std::max({-sg, sg - 2.0, sg - al});
        double nu = sg * (1.0 - kMargin);
        double rmin = std::max({2.0 / sg, 2.0 / (2.0 - nu), 2.0 / (al - nu)});
        double rmax = 2.0 / (sg - nu);
        double r = std::min(rmin * (1.0 + kMargin), 0.5 * (rmin + rmax));
        out.nu = nu;
        out.r = r;
        out.exponent = sg - nu - 2.0 / r;
    } else if (q.regime == TailClass::A2) {
        // N >= 3: e = sigma - N/r,  max(N/alpha, 2/sigma) < r < N/sigma
        out.infimum = sg - std::min(al, N * sg / 2.0);
        double rmin = std::max(N / al, 2.0 / sg);
        double rmax = N / sg;
        double r = std::min(rmin * (1.0 + kMargin), 0.5 * (rmin + rmax));
        out.nu = 0.0;
        out.r = r;
        out.exponent = sg - N / r;
    } else {
        // A2star: e = sigma - nu - N/r,  N(2-sigma)/2 < nu < N,
        // r > max(2/sigma, N/(alpha-nu)),  r < N/(N-nu)
        out.infimum = std::max(sg - N - N * sg / 2.0, sg - al);
        double nu = N * (1.0 - kMargin * sg / 2.0);
        double rmin = std::max(2.0 / sg, N / (al - nu));
        double rmax = N / (N - nu);
        double r = std::min(rmin * (1.0 + kMargin), 0.5 * (rmin + rmax));
        out.nu = nu;
        out.r = r;
        out.exponent = sg - nu - N / r;
    }

    if (!(out.exponent >= out.infimum - 1e-12))
        throw std::logic_error("decay witness fell below the infimum");
    return out;
}

double predicted_exponent(const DecayQuery& q) {
    return predicted_decay(q).exponent;
}

}  // namespace fpme
