#include "diffmap/sayre.hpp"

#include <cmath>
#include <numbers>

namespace diffmap {

SayreKernel::SayreKernel(const Grid& grid, double sigma)
    : grid_(grid), sigma_(sigma), g_(grid), g_bar_(grid) {
    if (!(sigma > 0.0)) throw Error("sayre kernel: sigma must be positive");
    const double pref = std::pow(8.0 / (std::numbers::pi * sigma), 0.25 * static_cast<double>(grid.dims()));
    for (std::size_t i = 0; i < grid.size(); ++i) g_[i] = pref * std::exp(-2.0 * grid.min_image_norm2(i) / sigma);
    for (std::size_t i = 0; i < grid.size(); ++i) g_bar_[i] = g_[grid.negated(i)];
    conv_g_ = PeriodicConvolution(g_);
    conv_g_bar_ = PeriodicConvolution(g_bar_);
}

double sayre_constant(std::size_t dims) {
    return 2.0 * std::pow(4.0 / 3.0, 0.5 * static_cast<double>(dims));
}

void SayreConfig::validate() const {
    if (!kernel) throw Error("sayre: missing kernel");
    if (!(alpha > 0.0)) throw Error("sayre: alpha must be positive");
    if (atoms < 1) throw Error("sayre: atom count must be >= 1");
}

namespace {

ObjectField squared(const ObjectField& obj) {
    ObjectField sq = obj;
    for (double& v : sq.values()) v *= v;
    return sq;
}

}  // namespace

ObjectField sayre_rhs(const ObjectField& obj, const SayreKernel& kernel) {
    require_same_grid(obj.grid(), kernel.grid(), "sayre_rhs");
    return kernel.convolve_g(squared(obj));
}

double sayre_objective(const ObjectField& obj, const SayreKernel& kernel) {
    const ObjectField r = obj - sayre_rhs(obj, kernel);
    return 0.5 * dot(r, r);
}

ObjectField sayre_gradient(const ObjectField& obj, const SayreKernel& kernel) {
    ObjectField r = obj - sayre_rhs(obj, kernel);
    const ObjectField back = kernel.convolve_g_reflected(r);
    for (std::size_t i = 0; i < r.size(); ++i) r[i] -= 2.0 * obj[i] * back[i];
    return r;
}

ObjectField s_norm_step(const ObjectField& obj, const SayreConfig& cfg) {
    ObjectField x = obj - cfg.alpha * sayre_gradient(obj, *cfg.kernel);
    if (!(norm(x) > 0.0)) throw Error("s_norm_step: zero vector after gradient step");
    return rescale_to_norm2(x, static_cast<double>(cfg.atoms));
}

ObjectField project_sayre(const ObjectField& obj, const SayreConfig& cfg) {
    ObjectField x = obj;
    for (std::size_t k = 0; k < cfg.iterations; ++k) x = s_norm_step(x, cfg);
    return x;
}

ObjectField s_mod_step(const ObjectField& obj, const ModulusData& modulus, const SayreConfig& cfg) {
    return project_modulus(obj - cfg.alpha * sayre_gradient(obj, *cfg.kernel), modulus);
}

ObjectField tangent_formula_step(const ObjectField& obj, const ModulusData& modulus,
                                 const SayreKernel& kernel) {
    require_same_grid(obj.grid(), modulus.grid(), "tangent_formula_step");
    RealFft& fft = RealFft::local(obj.grid());
    const std::vector<Complex> current = fft.forward(obj.values());
    std::vector<Complex> target = fft.forward(sayre_rhs(obj, kernel).values());
    const auto& map = fft.half_to_full();
    for (std::size_t h = 0; h < target.size(); ++h) {
        const double m = modulus[map[h]];
        const double a = std::abs(target[h]);
        if (a > 0.0) {
            target[h] *= m / a;
        } else {
            const double b = std::abs(current[h]);
            target[h] = b > 0.0 ? current[h] * (m / b) : Complex(m, 0.0);
        }
    }
    ObjectField out(obj.grid());
    fft.inverse(target, out.values());
    return out;
}

double f_alpha(double lambda, double alpha, double c) {
    return lambda - alpha * (lambda - lambda * lambda + c * (lambda * lambda * lambda - lambda * lambda));
}

double f_alpha_derivative(double lambda, double alpha, double c) {
    return 1.0 - alpha * (1.0 - 2.0 * lambda + 3.0 * c * lambda * lambda - 2.0 * c * lambda);
}

std::array<double, 3> f_alpha_fixed_points(double c) { return {0.0, 1.0 / c, 1.0}; }

double lambda0_bound(double alpha, double c) {
    return (1.0 + std::sqrt(1.0 + 4.0 * c / alpha)) / (2.0 * c);
}

double alpha_bound(double lambda0, double c) { return 1.0 / (c * lambda0 * lambda0 - lambda0); }

double k_alpha_log_slope(std::size_t k, double alpha, double c) {
    return static_cast<double>(k) * std::log(1.0 + alpha * (1.0 - 1.0 / c));
}

SayreProjector::SayreProjector(SayreConfig cfg, double object_norm2) : cfg_(std::move(cfg)) {
    cfg_.validate();
    if (!(object_norm2 > 0.0)) throw Error("sayre projector: object norm must be positive");
    scale_ = std::sqrt(static_cast<double>(cfg_.atoms) / object_norm2);
}

ObjectField SayreProjector::operator()(const ObjectField& obj) const {
    return project_sayre(rescale_to_norm2(obj, static_cast<double>(cfg_.atoms)), cfg_) * (1.0 / scale_);
}

}  // namespace diffmap
