#include "fpme/spectral.hpp"

#include <fftw3.h>

#include <cmath>
#include <map>
#include <mutex>
#include <stdexcept>

namespace fpme {

namespace {

// FFTW plan creation is not thread-safe; execution of a finished plan is.
// Plans are made with FFTW_UNALIGNED so fftw_execute_r2r may run them on any
// caller-provided buffers, and cached for the life of the process.
std::mutex plan_mutex;
std::map<std::pair<int, int>, fftw_plan> plan_cache;

fftw_plan sine_plan(int N, int n) {
    std::lock_guard<std::mutex> lock(plan_mutex);
    auto key = std::make_pair(N, n);
    auto it = plan_cache.find(key);
    if (it != plan_cache.end()) return it->second;
    std::size_t len = N == 1 ? n : static_cast<std::size_t>(n) * n;
    std::vector<double> a(len), b(len);
    unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    fftw_plan p = N == 1
                      ? fftw_plan_r2r_1d(n, a.data(), b.data(), FFTW_RODFT00, flags)
                      : fftw_plan_r2r_2d(n, n, a.data(), b.data(), FFTW_RODFT00,
                                         FFTW_RODFT00, flags);
    if (!p) throw std::runtime_error("failed to create sine transform plan");
    plan_cache.emplace(key, p);
    return p;
}

}  // namespace

SpectralOperator::SpectralOperator(const Grid& grid, double sigma)
    : grid_(grid), sigma_(sigma) {
    if (!(sigma > 0.0) || sigma > 2.0) {
        throw std::invalid_argument("operator order must lie in (0,2]");
    }
    if (grid.n < 1) throw std::invalid_argument("operator needs a nonempty grid");

    int n = grid.n;
    double base = M_PI / (2.0 * grid.R);
    std::vector<double> axis(n);
    for (int k = 0; k < n; ++k) axis[k] = base * (k + 1) * base * (k + 1);

    lambda_.resize(grid.node_count());
    if (grid.N == 1) {
        lambda_ = axis;
    } else {
        for (int ki = 0; ki < n; ++ki)
            for (int kj = 0; kj < n; ++kj) lambda_[grid.index(ki, kj)] = axis[ki] + axis[kj];
    }
    mult_.resize(lambda_.size());
    for (std::size_t k = 0; k < lambda_.size(); ++k) {
        mult_[k] = std::pow(lambda_[k], sigma / 2.0);
    }

    // diagonal of A in the node basis: with the transform matrix
    // T_{ki} = 2 sin(pi (k+1)(i+1)/(n+1)) and T^2 = 2(n+1) I,
    //   A_{ii} = (2/(n+1)) sum_k mult_k sin^2(pi (k+1)(i+1)/(n+1))      (N=1)
    // and the N=2 analogue separates into two O(n^3) passes.
    diag_.assign(lambda_.size(), 0.0);
    double theta = M_PI / (n + 1);
    if (grid.N == 1) {
        for (int i = 0; i < n; ++i) {
            double acc = 0.0;
            for (int k = 0; k < n; ++k) {
                double s = std::sin(theta * (k + 1) * (i + 1));
                acc += mult_[k] * s * s;
            }
            diag_[i] = 2.0 / (n + 1) * acc;
        }
    } else {
        std::vector<double> s2(static_cast<std::size_t>(n) * n);
        for (int k = 0; k < n; ++k)
            for (int i = 0; i < n; ++i) {
                double s = std::sin(theta * (k + 1) * (i + 1));
                s2[static_cast<std::size_t>(k) * n + i] = s * s;
            }
        // t[l*n+i] = sum_k mult_{k,l} s2[k*n+i]
        std::vector<double> t(static_cast<std::size_t>(n) * n, 0.0);
        for (int k = 0; k < n; ++k)
            for (int l = 0; l < n; ++l) {
                double m = mult_[static_cast<std::size_t>(k) * n + l];
                const double* row = &s2[static_cast<std::size_t>(k) * n];
                double* trow = &t[static_cast<std::size_t>(l) * n];
                for (int i = 0; i < n; ++i) trow[i] += m * row[i];
            }
        double norm = 4.0 / ((n + 1) * static_cast<double>(n + 1));
        for (int i = 0; i < n; ++i)
            for (int j = 0; j < n; ++j) {
                double acc = 0.0;
                for (int l = 0; l < n; ++l)
                    acc += t[static_cast<std::size_t>(l) * n + i] *
                           s2[static_cast<std::size_t>(l) * n + j];
                diag_[grid_.index(i, j)] = norm * acc;
            }
    }
}

void SpectralOperator::dst(const std::vector<double>& in, std::vector<double>& out) const {
    if (in.size() != lambda_.size()) throw std::invalid_argument("field size mismatch");
    out.resize(in.size());
    // out-of-place r2r preserves its input, but the FFTW API is non-const
    fftw_execute_r2r(sine_plan(grid_.N, grid_.n), const_cast<double*>(in.data()),
                     out.data());
}

void SpectralOperator::apply_raw(const std::vector<double>& f,
                                 std::vector<double>& out) const {
    thread_local std::vector<double> hat;
    dst(f, hat);
    for (std::size_t k = 0; k < hat.size(); ++k) hat[k] *= mult_[k];
    dst(hat, out);
    double norm = 1.0;
    for (int d = 0; d < grid_.N; ++d) norm *= 2.0 * (grid_.n + 1);
    for (auto& x : out) x /= norm;
}

ScalarField SpectralOperator::apply(const ScalarField& f) const {
    if (!f.grid.same_as(grid_)) throw std::invalid_argument("field grid mismatch");
    ScalarField out(grid_);
    apply_raw(f.v, out.v);
    return out;
}

void SpectralOperator::solve_shifted(const std::vector<double>& rhs, double shift,
                                     double scale, std::vector<double>& out) const {
    if (!(shift > 0.0)) throw std::invalid_argument("shift must be positive");
    thread_local std::vector<double> hat;
    dst(rhs, hat);
    for (std::size_t k = 0; k < hat.size(); ++k) hat[k] /= shift + scale * mult_[k];
    dst(hat, out);
    double norm = 1.0;
    for (int d = 0; d < grid_.N; ++d) norm *= 2.0 * (grid_.n + 1);
    for (auto& x : out) x /= norm;
}

double SpectralOperator::hs_norm2(const ScalarField& f) const {
    if (!f.grid.same_as(grid_)) throw std::invalid_argument("field grid mismatch");
    thread_local std::vector<double> hat;
    dst(f.v, hat);
    // continuum sine coefficients: c_k = h^N R^(-N/2) (DST(f))_k / 2^N
    double scale = std::pow(grid_.h, grid_.N) * std::pow(grid_.R, -grid_.N / 2.0) /
                   (grid_.N == 1 ? 2.0 : 4.0);
    for (std::size_t k = 0; k < hat.size(); ++k) {
        double c = scale * hat[k];
        hat[k] = mult_[k] * c * c;
    }
    return pairwise_sum(hat.data(), hat.size());
}

SpectralOperator make_spectral_operator(const Grid& grid, double sigma) {
    return SpectralOperator(grid, sigma);
}

ScalarField apply_spectral(const SpectralOperator& op, const ScalarField& f) {
    return op.apply(f);
}

}  // namespace fpme
