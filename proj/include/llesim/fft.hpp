#pragma once

#include <complex>
#include <memory>
#include <span>
#include <vector>

namespace llesim {

using cplx = std::complex<double>;

/// Transform pair between modal amplitudes and fast-time samples for one
/// simulation grid.
///
/// Convention: E(tau_j) = sum_mu A_mu * exp(+2*pi*i*mu*j/N) and
/// A_mu = (1/N) * sum_j E(tau_j) * exp(-2*pi*i*mu*j/N), so a single occupied
/// mu = 0 mode of amplitude A gives the uniform envelope E = A, and
/// sum_j |E_j|^2 / N == sum_mu |A_mu|^2.
///
/// Externally modal vectors are ordered by ascending mu over
/// [mu_min, mu_min + N); internally mode mu lives in DFT bin (mu mod N).
/// Each engine owns its FFTW plans and scratch buffers and is not safe for
/// concurrent use; independent simulations use independent engines.
class FftEngine {
public:
    FftEngine(int n_modes, int mu_min);
    ~FftEngine();

    FftEngine(const FftEngine&) = delete;
    FftEngine& operator=(const FftEngine&) = delete;

    int size() const { return n_; }
    int mu_min() const { return mu_min_; }

    /// DFT bin holding mode index mu.
    int bin_of_mu(int mu) const { return ((mu % n_) + n_) % n_; }

    /// modal (bin order) -> envelope samples. No scaling.
    void synthesize_bins(std::span<const cplx> modal_bins, std::span<cplx> envelope);
    /// envelope samples -> modal (bin order). Scales by 1/N.
    void analyze_bins(std::span<const cplx> envelope, std::span<cplx> modal_bins);

    /// Reorder between ascending-mu and bin layouts.
    void mu_to_bins(std::span<const cplx> modal_mu, std::span<cplx> modal_bins) const;
    void bins_to_mu(std::span<const cplx> modal_bins, std::span<cplx> modal_mu) const;

    /// Convenience over ascending-mu modal vectors.
    std::vector<cplx> synthesize(std::span<const cplx> modal_mu);
    std::vector<cplx> analyze(std::span<const cplx> envelope);

private:
    struct Impl;
    int n_;
    int mu_min_;
    std::unique_ptr<Impl> impl_;
};

} // namespace llesim
