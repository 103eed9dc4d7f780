#pragma once

#include <vector>

#include "fpme/field.hpp"
#include "fpme/grid.hpp"

namespace fpme {

// Spectral fractional Dirichlet Laplacian on the box [-R,R]^N: tensor sine
// modes with eigenvalues lambda_k = sum_i (k_i pi/(2R))^2 for k_i = 1..n and
// multipliers lambda_k^(sigma/2). sigma = 2 reproduces the plain Dirichlet
// Laplacian and is allowed here (the singular-integral side is restricted to
// sigma < 2).
//
// Immutable after construction and shareable across threads: transform plans
// live in a process-wide cache whose creation is serialized, execution is
// reentrant.
class SpectralOperator {
  public:
    SpectralOperator(const Grid& grid, double sigma);

    const Grid& grid() const { return grid_; }
    double sigma() const { return sigma_; }

    // one entry per flattened mode index (row-major for N=2, like node order)
    const std::vector<double>& eigenvalues() const { return lambda_; }
    const std::vector<double>& multipliers() const { return mult_; }

    // diagonal of the operator matrix in the node basis; used for Jacobi
    // preconditioning of the implicit solves
    const std::vector<double>& node_diagonal() const { return diag_; }

    ScalarField apply(const ScalarField& f) const;

    // same as apply on raw vectors, writing into out (resized as needed)
    void apply_raw(const std::vector<double>& f, std::vector<double>& out) const;

    // exact sine-basis solve of (shift I + scale A) out = rhs, shift > 0
    void solve_shifted(const std::vector<double>& rhs, double shift, double scale,
                       std::vector<double>& out) const;

    // unnormalized type-I discrete sine transform per axis; applying it twice
    // multiplies by (2(n+1))^N
    void dst(const std::vector<double>& in, std::vector<double>& out) const;

    // squared fractional Sobolev seminorm of the sine interpolant:
    // sum_k lambda_k^(sigma/2) c_k^2 with c_k the coefficients of f in the
    // L2(box)-orthonormal sine basis
    double hs_norm2(const ScalarField& f) const;

  private:
    Grid grid_;
    double sigma_;
    std::vector<double> lambda_;
    std::vector<double> mult_;
    std::vector<double> diag_;
};

SpectralOperator make_spectral_operator(const Grid& grid, double sigma);

ScalarField apply_spectral(const SpectralOperator& op, const ScalarField& f);

}  // namespace fpme
