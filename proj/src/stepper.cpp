#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fpme/evolve.hpp"

namespace fpme {

PhysParams make_phys_params(double sigma, double m) {
    if (!(sigma > 0.0 && sigma < 2.0)) {
        throw std::invalid_argument("order must lie in (0,2)");
    }
    if (!(m >= 1.0)) throw std::invalid_argument("nonlinearity exponent must be >= 1");
    return {sigma, m};
}

namespace {

void check_config(const StepperConfig& cfg) {
    if (!(cfg.dt > 0.0)) throw std::invalid_argument("time step must be positive");
    if (!(cfg.newton_tol > 0.0 && cfg.newton_tol <= 1e-4)) {
        throw std::invalid_argument("newton tolerance must lie in (0, 1e-4]");
    }
    if (cfg.newton_max < 1 || cfg.cg_max < 1) {
        throw std::invalid_argument("iteration caps must be >= 1");
    }
    if (!(cfg.cg_tol > 0.0)) throw std::invalid_argument("krylov tolerance must be positive");
    if (cfg.floor < 0.0) throw std::invalid_argument("floor must be nonnegative");
}

struct NewtonFailure {
    std::string why;
};

inline double power_m(double s, double m) {
    if (s <= 0.0) return 0.0;
    if (m == 1.0) return s;
    if (m == 2.0) return s * s;
    return std::pow(s, m);
}

// Workspace and inner loops for backward-Euler solves on one grid. The
// nonlinear system F(u) = rho (u - u_prev) + dt A G(u) = 0 is attacked by
// Newton steps damped with a projected line search. The Jacobian
// rho I + dt A m u^(m-1) is unsymmetric as written; substituting
// zeta = m u^(m-1) delta turns each Newton system into the SPD form
// (diag(rho/g) + dt A) zeta = -F with g = m max(u, 1e-12)^(m-1), solved by
// preconditioned conjugate gradients. The 1e-12 floor lives only inside g:
// the residual F never sees it.
class BackwardEuler {
  public:
    BackwardEuler(const std::vector<double>& rho, const PhysParams& p,
                  const SpectralOperator& op, const StepperConfig& cfg)
        : rho_(rho), p_(p), op_(op), cfg_(cfg) {
        std::size_t n = rho.size();
        for (auto* v : {&gu_, &au_, &f_, &g_, &d_, &zeta_, &r_, &z_, &pk_, &ap_,
                        &trial_, &ftrial_, &md_}) {
            v->resize(n);
        }
    }

    double residual_norm(const std::vector<double>& u, const std::vector<double>& uprev,
                         double dt, std::vector<double>& out) {
        for (std::size_t i = 0; i < u.size(); ++i) gu_[i] = power_m(u[i], p_.m);
        op_.apply_raw(gu_, au_);
        for (std::size_t i = 0; i < u.size(); ++i) {
            out[i] = rho_[i] * (u[i] - uprev[i]) + dt * au_[i];
        }
        return l2_norm(out);
    }

    // one implicit solve of length dt; u enters as the initial guess (usually
    // u_prev itself) and leaves as the solution; returns Newton update count
    int newton(std::vector<double>& u, const std::vector<double>& uprev, double dt,
               double* rel_out) {
        double base = 0.0;
        for (std::size_t i = 0; i < u.size(); ++i) {
            base += rho_[i] * uprev[i] * rho_[i] * uprev[i];
        }
        base = std::sqrt(base);
        double target = cfg_.newton_tol * base;

        double fnorm = residual_norm(u, uprev, dt, f_);
        int iters = 0;
        while (fnorm > target) {
            if (iters >= cfg_.newton_max) {
                throw NewtonFailure{"newton iteration cap reached"};
            }
            for (std::size_t i = 0; i < u.size(); ++i) {
                g_[i] = p_.m == 1.0
                            ? 1.0
                            : p_.m * std::pow(std::max(u[i], 1e-12), p_.m - 1.0);
                d_[i] = rho_[i] / g_[i];
            }
            solve_newton_system(dt);

            // projected line search on the residual norm
            double s = 1.0;
            bool accepted = false;
            for (int ls = 0; ls < 30; ++ls) {
                for (std::size_t i = 0; i < u.size(); ++i) {
                    trial_[i] = std::max(u[i] + s * zeta_[i] / g_[i], cfg_.floor);
                }
                double ft = residual_norm(trial_, uprev, dt, ftrial_);
                if (ft < fnorm) {
                    u.swap(trial_);
                    f_.swap(ftrial_);
                    fnorm = ft;
                    accepted = true;
                    break;
                }
                s *= 0.5;
            }
            ++iters;
            if (!accepted) throw NewtonFailure{"line search found no decrease"};
        }
        if (rel_out) *rel_out = base > 0.0 ? fnorm / base : 0.0;
        return iters;
    }

  private:
    // (diag(d) + dt A) zeta = -F by preconditioned CG. The constant-median
    // spectral preconditioner is exact when d is (near) constant; once the
    // spread of d is large (degenerate u makes rho/g blow up over dead
    // regions) it stalls, and the Jacobi diagonal takes over.
    void solve_newton_system(double dt) {
        std::size_t n = f_.size();
        for (std::size_t i = 0; i < n; ++i) r_[i] = -f_[i];
        std::fill(zeta_.begin(), zeta_.end(), 0.0);
        double nb = l2_norm(r_);
        if (nb == 0.0) return;

        double dmin = d_[0], dmax = d_[0];
        for (double v : d_) {
            dmin = std::min(dmin, v);
            dmax = std::max(dmax, v);
        }
        bool jacobi = dmax > 30.0 * dmin;
        double median = 0.0;
        if (jacobi) {
            const auto& adiag = op_.node_diagonal();
            for (std::size_t i = 0; i < n; ++i) md_[i] = d_[i] + dt * adiag[i];
        } else {
            md_ = d_;
            auto mid = md_.begin() + n / 2;
            std::nth_element(md_.begin(), mid, md_.end());
            median = *mid;
        }
        auto precond = [&](const std::vector<double>& in, std::vector<double>& out) {
            if (jacobi) {
                out.resize(n);
                for (std::size_t i = 0; i < n; ++i) out[i] = in[i] / md_[i];
            } else {
                op_.solve_shifted(in, median, dt, out);
            }
        };

        precond(r_, z_);
        pk_ = z_;
        double rz = dot(r_, z_);
        for (int it = 0; it < cfg_.cg_max; ++it) {
            op_.apply_raw(pk_, au_);
            for (std::size_t i = 0; i < n; ++i) ap_[i] = d_[i] * pk_[i] + dt * au_[i];
            double alpha = rz / dot(pk_, ap_);
            for (std::size_t i = 0; i < n; ++i) {
                zeta_[i] += alpha * pk_[i];
                r_[i] -= alpha * ap_[i];
            }
            if (l2_norm(r_) <= cfg_.cg_tol * nb) break;
            precond(r_, z_);
            double rz2 = dot(r_, z_);
            double beta = rz2 / rz;
            rz = rz2;
            for (std::size_t i = 0; i < n; ++i) pk_[i] = z_[i] + beta * pk_[i];
        }
    }

    const std::vector<double>& rho_;
    PhysParams p_;
    const SpectralOperator& op_;
    StepperConfig cfg_;
    std::vector<double> gu_, au_, f_, g_, d_, zeta_, r_, z_, pk_, ap_, trial_,
        ftrial_, md_;
};

}  // namespace

ScalarField step(const ScalarField& u_prev, const ScalarField& rho,
                 const PhysParams& params, const SpectralOperator& op,
                 const StepperConfig& cfg, StepStats* stats) {
    check_config(cfg);
    make_phys_params(params.sigma, params.m);  // revalidate
    if (!u_prev.grid.same_as(op.grid()) || !rho.grid.same_as(op.grid())) {
        throw std::invalid_argument("field grid mismatch");
    }
    if (params.sigma != op.sigma()) {
        throw std::invalid_argument("operator order disagrees with parameters");
    }
    for (double v : u_prev.v) {
        if (v < 0.0) throw std::invalid_argument("previous state must be nonnegative");
    }
    for (double v : rho.v) {
        if (!(v > 0.0)) throw std::invalid_argument("density must be strictly positive");
    }

    BackwardEuler solver(rho.v, params, op, cfg);
    StepStats st;
    st.substeps = 0;

    // on Newton failure, split the step in two and recurse, 10 levels deep
    auto advance = [&](auto&& self, std::vector<double>& u, double dt,
                       int depth) -> void {
        std::vector<double> next = u;
        try {
            double rel = 0.0;
            st.newton_iters += solver.newton(next, u, dt, &rel);
            st.residual = rel;
            ++st.substeps;
            u.swap(next);
        } catch (const NewtonFailure& nf) {
            if (depth >= 10) {
                throw std::runtime_error(
                    "time step rejected after 10 halvings (dt = " +
                    std::to_string(dt) + "): " + nf.why);
            }
            self(self, u, dt / 2.0, depth + 1);
            self(self, u, dt / 2.0, depth + 1);
        }
    };

    ScalarField out = u_prev;
    advance(advance, out.v, cfg.dt, 0);
    out.nonnegative = true;
    if (stats) *stats = st;
    return out;
}

}  // namespace fpme
