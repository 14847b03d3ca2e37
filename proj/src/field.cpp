#include "diffmap/field.hpp"

#include <algorithm>
#include <cmath>

namespace diffmap {

ObjectField::ObjectField(const Grid& grid) : grid_(grid), values_(grid.size(), 0.0) {}

ObjectField::ObjectField(const Grid& grid, std::vector<double> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw Error("object field: expected " + std::to_string(grid_.size()) + " values, got " +
                    std::to_string(values_.size()));
    if (!std::all_of(values_.begin(), values_.end(), [](double v) { return std::isfinite(v); }))
        throw Error("object field: non-finite value");
}

ObjectField& ObjectField::operator+=(const ObjectField& rhs) {
    require_same_grid(grid_, rhs.grid_, "field addition");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += rhs.values_[i];
    return *this;
}

ObjectField& ObjectField::operator-=(const ObjectField& rhs) {
    require_same_grid(grid_, rhs.grid_, "field subtraction");
    for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= rhs.values_[i];
    return *this;
}

ObjectField& ObjectField::operator*=(double s) {
    for (double& v : values_) v *= s;
    return *this;
}

SpectrumField::SpectrumField(const Grid& grid) : grid_(grid), values_(grid.size()) {}

SpectrumField::SpectrumField(const Grid& grid, std::vector<Complex> values)
    : grid_(grid), values_(std::move(values)) {
    if (values_.size() != grid_.size())
        throw Error("spectrum field: expected " + std::to_string(grid_.size()) + " values");
}

double SpectrumField::hermitian_defect() const {
    double worst = 0.0;
    for (std::size_t i = 0; i < values_.size(); ++i)
        worst = std::max(worst, std::abs(values_[i] - std::conj(values_[grid_.negated(i)])));
    return worst;
}

ModulusData::ModulusData(const Grid& grid, std::vector<double> magnitudes)
    : grid_(grid), values_(std::move(magnitudes)) {
    if (values_.size() != grid_.size())
        throw Error("modulus data: expected " + std::to_string(grid_.size()) + " magnitudes");
    double largest = 0.0;
    for (double m : values_) {
        if (!std::isfinite(m) || m < 0.0) throw Error("modulus data: magnitudes must be finite and >= 0");
        largest = std::max(largest, m);
    }
    const double tol = 1e-10 * std::max(largest, 1e-300);
    for (std::size_t i = 0; i < values_.size(); ++i)
        if (std::abs(values_[i] - values_[grid_.negated(i)]) > tol)
            throw Error("modulus data: not Hermitian symmetric");
}

double ModulusData::total_intensity() const {
    double s = 0.0;
    for (double m : values_) s += m * m;
    return s;
}

double dot(const ObjectField& a, const ObjectField& b) {
    require_same_grid(a.grid(), b.grid(), "dot");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm(const ObjectField& a) { return std::sqrt(dot(a, a)); }

double distance(const ObjectField& a, const ObjectField& b) {
    require_same_grid(a.grid(), b.grid(), "distance");
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = a[i] - b[i];
        s += d * d;
    }
    return std::sqrt(s);
}

double norm(const SpectrumField& s) {
    double acc = 0.0;
    for (const Complex& z : s.values()) acc += std::norm(z);
    return std::sqrt(acc);
}

ObjectField normalize(const ObjectField& a) { return rescale_to_norm2(a, 1.0); }

ObjectField rescale_to_norm2(const ObjectField& a, double norm2) {
    const double n = norm(a);
    if (!(n > 0.0)) throw Error("cannot rescale the zero field");
    return a * (std::sqrt(norm2) / n);
}

}  // namespace diffmap
