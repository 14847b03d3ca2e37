#include "diffmap/projections.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

#include "diffmap/fft.hpp"

namespace diffmap {

SupportMask::SupportMask(const Grid& grid, std::vector<std::uint8_t> member)
    : grid_(grid), member_(std::move(member)) {
    if (member_.size() != grid_.size()) throw Error("support mask: size mismatch");
    count_ = static_cast<std::size_t>(std::count_if(member_.begin(), member_.end(),
                                                    [](std::uint8_t m) { return m != 0; }));
    if (count_ == 0) throw Error("support mask: empty support");
}

SupportMask SupportMask::from_indices(const Grid& grid, const std::vector<std::size_t>& indices) {
    std::vector<std::uint8_t> m(grid.size(), 0);
    for (std::size_t i : indices) {
        if (i >= grid.size()) throw Error("support mask: index out of range");
        m[i] = 1;
    }
    return SupportMask(grid, std::move(m));
}

SupportMask SupportMask::from_field(const ObjectField& field) {
    std::vector<std::uint8_t> m(field.size());
    for (std::size_t i = 0; i < field.size(); ++i) m[i] = field[i] != 0.0 ? 1 : 0;
    return SupportMask(field.grid(), std::move(m));
}

SupportMask SupportMask::full(const Grid& grid) {
    return SupportMask(grid, std::vector<std::uint8_t>(grid.size(), 1));
}

SupportMask SupportMask::disk(const Grid& grid, double diameter) {
    const double r2 = 0.25 * diameter * diameter;
    std::vector<std::uint8_t> m(grid.size());
    for (std::size_t i = 0; i < grid.size(); ++i) m[i] = grid.min_image_norm2(i) <= r2 ? 1 : 0;
    return SupportMask(grid, std::move(m));
}

Histogram::Histogram(std::vector<double> values) : values_(std::move(values)) {
    std::sort(values_.begin(), values_.end());
}

Histogram Histogram::from_field(const ObjectField& field) {
    return Histogram(std::vector<double>(field.values().begin(), field.values().end()));
}

ObjectField project_modulus(const ObjectField& obj, const ModulusData& modulus) {
    require_same_grid(obj.grid(), modulus.grid(), "project_modulus");
    return ModulusProjector(modulus)(obj);
}

ObjectField project_support(const ObjectField& obj, const SupportMask& support) {
    require_same_grid(obj.grid(), support.grid(), "project_support");
    ObjectField out = obj;
    for (std::size_t i = 0; i < out.size(); ++i)
        if (!support.contains(i)) out[i] = 0.0;
    return out;
}

ObjectField project_positive(const ObjectField& obj) {
    ObjectField out = obj;
    for (double& v : out.values()) v = std::max(v, 0.0);
    return out;
}

ObjectField project_support_positive(const ObjectField& obj, const SupportMask& support) {
    require_same_grid(obj.grid(), support.grid(), "project_support_positive");
    ObjectField out = obj;
    for (std::size_t i = 0; i < out.size(); ++i)
        out[i] = support.contains(i) ? std::max(out[i], 0.0) : 0.0;
    return out;
}

ObjectField project_histogram(const ObjectField& obj, const Histogram& hist) {
    const std::size_t n = obj.size();
    if (hist.size() != n)
        throw Error("project_histogram: histogram has " + std::to_string(hist.size()) +
                    " values for " + std::to_string(n) + " pixels");
    std::vector<std::pair<double, std::size_t>> order(n);
    for (std::size_t i = 0; i < n; ++i) order[i] = {obj[i], i};
    std::sort(order.begin(), order.end());
    ObjectField out(obj.grid());
    const auto& h = hist.values();
    for (std::size_t k = 0; k < n; ++k) out[order[k].second] = h[k];
    return out;
}

ModulusProjector::ModulusProjector(ModulusData modulus) : modulus_(std::move(modulus)) {
    const auto& map = RealFft::local(modulus_.grid()).half_to_full();
    half_.resize(map.size());
    for (std::size_t h = 0; h < map.size(); ++h) half_[h] = modulus_[map[h]];
}

ObjectField ModulusProjector::operator()(const ObjectField& obj) const {
    require_same_grid(obj.grid(), modulus_.grid(), "modulus projection");
    RealFft& fft = RealFft::local(obj.grid());
    std::vector<Complex> z = fft.forward(obj.values());
    for (std::size_t h = 0; h < z.size(); ++h) {
        const double a = std::abs(z[h]);
        // Zero coefficients take phase 0.
        z[h] = a > 0.0 ? z[h] * (half_[h] / a) : Complex(half_[h], 0.0);
    }
    ObjectField out(obj.grid());
    fft.inverse(z, out.values());
    return out;
}

SupportProjector::SupportProjector(SupportMask support, bool positivity, bool renormalize)
    : support_(std::move(support)), positivity_(positivity), renormalize_(renormalize) {}

ObjectField SupportProjector::operator()(const ObjectField& obj) const {
    ObjectField out = positivity_ ? project_support_positive(obj, support_)
                                  : project_support(obj, support_);
    if (renormalize_ && norm(out) > 0.0) out = normalize(out);
    return out;
}

}  // namespace diffmap
