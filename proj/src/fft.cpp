#include "llesim/fft.hpp"

#include <cstring>

#include <fftw3.h>

#include "llesim/errors.hpp"

namespace llesim {

struct FftEngine::Impl {
    fftw_complex* buf_time = nullptr;
    fftw_complex* buf_freq = nullptr;
    fftw_plan forward = nullptr;  // time -> freq (FFTW_FORWARD)
    fftw_plan backward = nullptr; // freq -> time (FFTW_BACKWARD)

    explicit Impl(int n) {
        buf_time = fftw_alloc_complex(static_cast<std::size_t>(n));
        buf_freq = fftw_alloc_complex(static_cast<std::size_t>(n));
        // FFTW_ESTIMATE keeps plan selection deterministic run to run, which
        // the byte-identical-results contract depends on.
        forward = fftw_plan_dft_1d(n, buf_time, buf_freq, FFTW_FORWARD, FFTW_ESTIMATE);
        backward = fftw_plan_dft_1d(n, buf_freq, buf_time, FFTW_BACKWARD, FFTW_ESTIMATE);
    }

    ~Impl() {
        if (forward) fftw_destroy_plan(forward);
        if (backward) fftw_destroy_plan(backward);
        if (buf_time) fftw_free(buf_time);
        if (buf_freq) fftw_free(buf_freq);
    }
};

FftEngine::FftEngine(int n_modes, int mu_min) : n_(n_modes), mu_min_(mu_min) {
    if (n_modes < 1) throw InvalidValue("FFT size must be positive");
    impl_ = std::make_unique<Impl>(n_modes);
}

FftEngine::~FftEngine() = default;

void FftEngine::synthesize_bins(std::span<const cplx> modal_bins, std::span<cplx> envelope) {
    std::memcpy(impl_->buf_freq, modal_bins.data(), sizeof(cplx) * static_cast<std::size_t>(n_));
    fftw_execute(impl_->backward);
    std::memcpy(envelope.data(), impl_->buf_time, sizeof(cplx) * static_cast<std::size_t>(n_));
}

void FftEngine::analyze_bins(std::span<const cplx> envelope, std::span<cplx> modal_bins) {
    std::memcpy(impl_->buf_time, envelope.data(), sizeof(cplx) * static_cast<std::size_t>(n_));
    fftw_execute(impl_->forward);
    const double scale = 1.0 / static_cast<double>(n_);
    auto* out = reinterpret_cast<cplx*>(impl_->buf_freq);
    for (int i = 0; i < n_; ++i) modal_bins[static_cast<std::size_t>(i)] = out[i] * scale;
}

void FftEngine::mu_to_bins(std::span<const cplx> modal_mu, std::span<cplx> modal_bins) const {
    for (int k = 0; k < n_; ++k) modal_bins[static_cast<std::size_t>(bin_of_mu(mu_min_ + k))] = modal_mu[static_cast<std::size_t>(k)];
}

void FftEngine::bins_to_mu(std::span<const cplx> modal_bins, std::span<cplx> modal_mu) const {
    for (int k = 0; k < n_; ++k) modal_mu[static_cast<std::size_t>(k)] = modal_bins[static_cast<std::size_t>(bin_of_mu(mu_min_ + k))];
}

std::vector<cplx> FftEngine::synthesize(std::span<const cplx> modal_mu) {
    std::vector<cplx> bins(static_cast<std::size_t>(n_));
    std::vector<cplx> envelope(static_cast<std::size_t>(n_));
    mu_to_bins(modal_mu, bins);
    synthesize_bins(bins, envelope);
    return envelope;
}

std::vector<cplx> FftEngine::analyze(std::span<const cplx> envelope) {
    std::vector<cplx> bins(static_cast<std::size_t>(n_));
    std::vector<cplx> modal(static_cast<std::size_t>(n_));
    analyze_bins(envelope, bins);
    bins_to_mu(bins, modal);
    return modal;
}

} // namespace llesim
