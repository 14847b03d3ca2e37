#include "diffmap/fft.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <mutex>

namespace diffmap {
namespace {

// FFTW planning is not thread-safe; execution on distinct plans is.
std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

std::vector<int> int_extents(const Grid& g) {
    std::vector<int> n;
    for (std::size_t e : g.extents()) n.push_back(static_cast<int>(e));
    return n;
}

struct ComplexPlan {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
    fftw_complex* buf = nullptr;

    explicit ComplexPlan(const Grid& g) {
        std::lock_guard lock(planner_mutex());
        const auto n = int_extents(g);
        buf = fftw_alloc_complex(g.size());
        forward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_FORWARD,
                                FFTW_ESTIMATE);
        backward = fftw_plan_dft(static_cast<int>(n.size()), n.data(), buf, buf, FFTW_BACKWARD,
                                 FFTW_ESTIMATE);
        if (!forward || !backward) throw Error("fft: unsupported grid " + g.describe());
    }
    ~ComplexPlan() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward);
        fftw_destroy_plan(backward);
        fftw_free(buf);
    }
    ComplexPlan(const ComplexPlan&) = delete;
    ComplexPlan& operator=(const ComplexPlan&) = delete;
};

ComplexPlan& local_complex_plan(const Grid& g) {
    thread_local std::map<std::vector<std::size_t>, std::unique_ptr<ComplexPlan>> cache;
    auto& slot = cache[g.extents()];
    if (!slot) slot = std::make_unique<ComplexPlan>(g);
    return *slot;
}

}  // namespace

SpectrumField fft_forward(const ObjectField& obj) {
    const Grid& g = obj.grid();
    ComplexPlan& p = local_complex_plan(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        p.buf[i][0] = obj[i];
        p.buf[i][1] = 0.0;
    }
    fftw_execute(p.forward);
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    SpectrumField out(g);
    for (std::size_t i = 0; i < g.size(); ++i) out[i] = Complex(p.buf[i][0], p.buf[i][1]) * scale;
    return out;
}

ObjectField fft_inverse(const SpectrumField& spec) {
    const Grid& g = spec.grid();
    ComplexPlan& p = local_complex_plan(g);
    for (std::size_t i = 0; i < g.size(); ++i) {
        p.buf[i][0] = spec[i].real();
        p.buf[i][1] = spec[i].imag();
    }
    fftw_execute(p.backward);
    const double scale = 1.0 / std::sqrt(static_cast<double>(g.size()));
    std::vector<double> re(g.size());
    double imag2 = 0.0;
    double real2 = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) {
        re[i] = p.buf[i][0] * scale;
        const double im = p.buf[i][1] * scale;
        real2 += re[i] * re[i];
        imag2 += im * im;
    }
    if (std::sqrt(imag2) > 1e-10 * std::sqrt(real2 + imag2) && imag2 > 1e-300)
        throw Error("fft_inverse: spectrum is not Hermitian (imaginary residue " +
                    std::to_string(std::sqrt(imag2)) + ")");
    return ObjectField(g, std::move(re));
}

RealFft::RealFft(const Grid& grid) : grid_(grid) {
    const std::size_t last = grid.extent(grid.dims() - 1);
    half_size_ = grid.size() / last * (last / 2 + 1);
    scale_ = 1.0 / std::sqrt(static_cast<double>(grid.size()));

    half_to_full_.resize(half_size_);
    const std::size_t half_last = last / 2 + 1;
    for (std::size_t h = 0; h < half_size_; ++h) {
        const std::size_t row = h / half_last;
        const std::size_t k = h % half_last;
        half_to_full_[h] = row * last + k;
    }

    std::lock_guard lock(planner_mutex());
    const auto n = int_extents(grid);
    real_buf_ = fftw_alloc_real(grid.size());
    auto* cbuf = fftw_alloc_complex(half_size_);
    complex_buf_ = cbuf;
    plan_forward_ = fftw_plan_dft_r2c(static_cast<int>(n.size()), n.data(), real_buf_, cbuf,
                                      FFTW_ESTIMATE);
    plan_inverse_ = fftw_plan_dft_c2r(static_cast<int>(n.size()), n.data(), cbuf, real_buf_,
                                      FFTW_ESTIMATE);
    if (!plan_forward_ || !plan_inverse_) throw Error("fft: unsupported grid " + grid.describe());
}

RealFft::~RealFft() {
    std::lock_guard lock(planner_mutex());
    fftw_destroy_plan(static_cast<fftw_plan>(plan_forward_));
    fftw_destroy_plan(static_cast<fftw_plan>(plan_inverse_));
    fftw_free(real_buf_);
    fftw_free(complex_buf_);
}

RealFft& RealFft::local(const Grid& grid) {
    thread_local std::map<std::vector<std::size_t>, std::unique_ptr<RealFft>> cache;
    auto& slot = cache[grid.extents()];
    if (!slot) slot = std::make_unique<RealFft>(grid);
    return *slot;
}

void RealFft::forward(std::span<const double> in, std::span<Complex> out) {
    std::copy(in.begin(), in.end(), real_buf_);
    fftw_execute(static_cast<fftw_plan>(plan_forward_));
    const auto* c = static_cast<const fftw_complex*>(complex_buf_);
    for (std::size_t h = 0; h < half_size_; ++h) out[h] = Complex(c[h][0], c[h][1]) * scale_;
}

void RealFft::inverse(std::span<const Complex> in, std::span<double> out) {
    auto* c = static_cast<fftw_complex*>(complex_buf_);
    for (std::size_t h = 0; h < half_size_; ++h) {
        c[h][0] = in[h].real();
        c[h][1] = in[h].imag();
    }
    fftw_execute(static_cast<fftw_plan>(plan_inverse_));
    for (std::size_t i = 0; i < grid_.size(); ++i) out[i] = real_buf_[i] * scale_;
}

std::vector<Complex> RealFft::forward(std::span<const double> in) {
    std::vector<Complex> out(half_size_);
    forward(in, out);
    return out;
}

std::vector<double> RealFft::inverse(std::span<const Complex> in) {
    std::vector<double> out(grid_.size());
    inverse(in, out);
    return out;
}

PeriodicConvolution::PeriodicConvolution(const ObjectField& kernel) : grid_(kernel.grid()) {
    transfer_ = RealFft::local(grid_).forward(kernel.values());
    const double root_n = std::sqrt(static_cast<double>(grid_.size()));
    for (Complex& z : transfer_) z *= root_n;
}

ObjectField PeriodicConvolution::apply(const ObjectField& f) const {
    require_same_grid(grid_, f.grid(), "convolution");
    return apply_spectrum(RealFft::local(grid_).forward(f.values()));
}

ObjectField PeriodicConvolution::apply_spectrum(std::span<const Complex> f_half) const {
    std::vector<Complex> prod(f_half.begin(), f_half.end());
    for (std::size_t h = 0; h < prod.size(); ++h) prod[h] *= transfer_[h];
    ObjectField out(grid_);
    RealFft::local(grid_).inverse(prod, out.values());
    return out;
}

}  // namespace diffmap
