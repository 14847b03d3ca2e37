#pragma once

#include <complex>
#include <span>
#include <vector>

#include "diffmap/grid.hpp"

namespace diffmap {

using Complex = std::complex<double>;

/// Real object on a periodic grid: one point of the N-dimensional search space.
class ObjectField {
public:
    ObjectField() = default;
    explicit ObjectField(const Grid& grid);
    /// Throws if the value count differs from the grid size or a value is not finite.
    ObjectField(const Grid& grid, std::vector<double> values);

    const Grid& grid() const { return grid_; }
    std::size_t size() const { return values_.size(); }

    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }
    double& operator[](std::size_t i) { return values_[i]; }

    ObjectField& operator+=(const ObjectField& rhs);
    ObjectField& operator-=(const ObjectField& rhs);
    ObjectField& operator*=(double s);

    friend ObjectField operator+(ObjectField a, const ObjectField& b) { return a += b; }
    friend ObjectField operator-(ObjectField a, const ObjectField& b) { return a -= b; }
    friend ObjectField operator*(ObjectField a, double s) { return a *= s; }
    friend ObjectField operator*(double s, ObjectField a) { return a *= s; }

private:
    Grid grid_;
    std::vector<double> values_;
};

/// Complex Fourier coefficients in natural (unshifted) FFT order.
class SpectrumField {
public:
    SpectrumField() = default;
    explicit SpectrumField(const Grid& grid);
    SpectrumField(const Grid& grid, std::vector<Complex> values);

    const Grid& grid() const { return grid_; }
    std::span<const Complex> values() const { return values_; }
    std::span<Complex> values() { return values_; }
    Complex operator[](std::size_t i) const { return values_[i]; }
    Complex& operator[](std::size_t i) { return values_[i]; }

    /// max |z_q - conj(z_{-q})|
    double hermitian_defect() const;

private:
    Grid grid_;
    std::vector<Complex> values_;
};

/// Measured Fourier magnitudes. Nonnegative, finite and Hermitian symmetric.
class ModulusData {
public:
    ModulusData() = default;
    ModulusData(const Grid& grid, std::vector<double> magnitudes);

    const Grid& grid() const { return grid_; }
    std::span<const double> values() const { return values_; }
    double operator[](std::size_t i) const { return values_[i]; }

    /// Sum of squared magnitudes; equals the squared norm of any consistent object.
    double total_intensity() const;

private:
    Grid grid_;
    std::vector<double> values_;
};

double dot(const ObjectField& a, const ObjectField& b);
double norm(const ObjectField& a);
double distance(const ObjectField& a, const ObjectField& b);
double norm(const SpectrumField& s);

/// rho / ||rho||; throws on the zero field.
ObjectField normalize(const ObjectField& a);

/// Rescales so that sum of squares equals `norm2`; throws on the zero field.
ObjectField rescale_to_norm2(const ObjectField& a, double norm2);

}  // namespace diffmap
