#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "diffmap/field.hpp"

namespace diffmap {

/// Unitary forward DFT (1/sqrt(N) scaling), sign convention exp(-i q.r).
SpectrumField fft_forward(const ObjectField& obj);

/// Unitary inverse DFT of a Hermitian spectrum. The imaginary residue of the
/// result is dropped; it must not exceed 1e-10 of the result norm.
ObjectField fft_inverse(const SpectrumField& spec);

/// Real-to-half-complex unitary transform for one grid, backed by FFTW.
///
/// The half spectrum keeps the last axis up to n/2 (FFTW r2c layout). Instances
/// own their scratch buffers and are not shared between threads; use
/// `RealFft::local(grid)` to obtain the calling thread's cached engine.
class RealFft {
public:
    explicit RealFft(const Grid& grid);
    ~RealFft();
    RealFft(const RealFft&) = delete;
    RealFft& operator=(const RealFft&) = delete;

    static RealFft& local(const Grid& grid);

    const Grid& grid() const { return grid_; }
    std::size_t half_size() const { return half_size_; }

    /// Full-grid index of each half-spectrum entry.
    const std::vector<std::size_t>& half_to_full() const { return half_to_full_; }

    void forward(std::span<const double> in, std::span<Complex> out);
    void inverse(std::span<const Complex> in, std::span<double> out);

    std::vector<Complex> forward(std::span<const double> in);
    std::vector<double> inverse(std::span<const Complex> in);

private:
    Grid grid_;
    std::size_t half_size_ = 0;
    double scale_ = 1.0;
    std::vector<std::size_t> half_to_full_;
    double* real_buf_ = nullptr;
    void* complex_buf_ = nullptr;
    void* plan_forward_ = nullptr;
    void* plan_inverse_ = nullptr;
};

/// Periodic convolution with a fixed kernel, (k * f)_r = sum_s k_s f_{r-s}.
class PeriodicConvolution {
public:
    PeriodicConvolution() = default;
    explicit PeriodicConvolution(const ObjectField& kernel);

    const Grid& grid() const { return grid_; }
    /// Half spectrum of the kernel, scaled so that products with unitary
    /// transforms give the plain convolution sum.
    const std::vector<Complex>& transfer() const { return transfer_; }

    ObjectField apply(const ObjectField& f) const;
    /// Convolution given f's half spectrum (already transformed).
    ObjectField apply_spectrum(std::span<const Complex> f_half) const;

private:
    Grid grid_;
    std::vector<Complex> transfer_;
};

}  // namespace diffmap
