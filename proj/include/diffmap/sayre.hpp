#pragma once

#include <array>
#include <memory>
#include <string>

#include "diffmap/fft.hpp"
#include "diffmap/field.hpp"
#include "diffmap/projections.hpp"

namespace diffmap {

/// Point-spread function of equal Gaussian atoms of width sigma:
/// g_r = (8 / (pi sigma))^{d/4} exp(-2 |r|^2 / sigma), minimum-image |r|.
class SayreKernel {
public:
    SayreKernel(const Grid& grid, double sigma);

    const Grid& grid() const { return grid_; }
    double sigma() const { return sigma_; }
    const ObjectField& g() const { return g_; }
    const ObjectField& g_reflected() const { return g_bar_; }

    ObjectField convolve_g(const ObjectField& f) const { return conv_g_.apply(f); }
    ObjectField convolve_g_reflected(const ObjectField& f) const { return conv_g_bar_.apply(f); }
    const PeriodicConvolution& conv_g() const { return conv_g_; }
    const PeriodicConvolution& conv_g_reflected() const { return conv_g_bar_; }

private:
    Grid grid_;
    double sigma_;
    ObjectField g_;
    ObjectField g_bar_;
    PeriodicConvolution conv_g_;
    PeriodicConvolution conv_g_bar_;
};

/// c = 2 (4/3)^{d/2}
double sayre_constant(std::size_t dims);

struct SayreConfig {
    std::shared_ptr<const SayreKernel> kernel;
    double alpha = 0.37;
    std::size_t iterations = 3;
    /// Atom count M; the flow normalizes to sum |rho_r|^2 = M.
    std::size_t atoms = 1;

    double c() const { return sayre_constant(kernel->grid().dims()); }
    void validate() const;
};

/// g * (rho x rho)
ObjectField sayre_rhs(const ObjectField& obj, const SayreKernel& kernel);

/// V = 1/2 || rho - g * (rho x rho) ||^2
double sayre_objective(const ObjectField& obj, const SayreKernel& kernel);

/// grad V = rho - g*(rho^2) - 2 (gbar*rho) rho + 2 (gbar*g*(rho^2)) rho
ObjectField sayre_gradient(const ObjectField& obj, const SayreKernel& kernel);

/// Gradient step followed by projection onto the sphere sum |rho|^2 = M.
ObjectField s_norm_step(const ObjectField& obj, const SayreConfig& cfg);

/// k-fold composition of s_norm_step.
ObjectField project_sayre(const ObjectField& obj, const SayreConfig& cfg);

/// Gradient step followed by Fourier modulus projection.
ObjectField s_mod_step(const ObjectField& obj, const ModulusData& modulus, const SayreConfig& cfg);

/// One tangent-formula update: the phases of g * (rho x rho) are combined with
/// the measured moduli. Coefficients where g * (rho x rho) vanishes keep
/// their previous phase.
ObjectField tangent_formula_step(const ObjectField& obj, const ModulusData& modulus,
                                 const SayreKernel& kernel);

// Scalar single-atom normalization map lambda -> f_alpha(lambda).
double f_alpha(double lambda, double alpha, double c);
double f_alpha_derivative(double lambda, double alpha, double c);
/// (0, 1/c, 1)
std::array<double, 3> f_alpha_fixed_points(double c);
/// Largest root of 1 - alpha (c l^2 - l) = 0.
double lambda0_bound(double alpha, double c);
/// Largest alpha for which starting normalization lambda0 avoids the runaway.
double alpha_bound(double lambda0, double c);
/// k log(1 + alpha (1 - 1/c)): log of the slope of f^k at the repulsive point.
double k_alpha_log_slope(std::size_t k, double alpha, double c);

/// Sayre projection for objects of squared norm `object_norm2`. The input is
/// first put on the M-atom normalization sphere, then S_norm is applied k
/// times, and the result is scaled back to `object_norm2`.
class SayreProjector final : public Projector {
public:
    SayreProjector(SayreConfig cfg, double object_norm2 = 1.0);
    ObjectField operator()(const ObjectField& obj) const override;
    std::string name() const override { return "sayre"; }
    const SayreConfig& config() const { return cfg_; }

private:
    SayreConfig cfg_;
    double scale_;
};

}  // namespace diffmap
