#pragma once

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "diffmap/field.hpp"

namespace diffmap {

/// Set of pixels an object may occupy.
class SupportMask {
public:
    SupportMask() = default;
    /// Throws unless 1 <= |S| <= N.
    SupportMask(const Grid& grid, std::vector<std::uint8_t> member);

    static SupportMask from_indices(const Grid& grid, const std::vector<std::size_t>& indices);
    /// Nonzero pixels are members.
    static SupportMask from_field(const ObjectField& field);
    static SupportMask full(const Grid& grid);
    /// Pixels within `diameter / 2` of the grid origin (minimum image).
    static SupportMask disk(const Grid& grid, double diameter);

    const Grid& grid() const { return grid_; }
    bool contains(std::size_t i) const { return member_[i] != 0; }
    std::size_t count() const { return count_; }

private:
    Grid grid_;
    std::vector<std::uint8_t> member_;
    std::size_t count_ = 0;
};

/// Sorted multiset of N target pixel values.
class Histogram {
public:
    Histogram() = default;
    explicit Histogram(std::vector<double> values);

    static Histogram from_field(const ObjectField& field);

    std::size_t size() const { return values_.size(); }
    const std::vector<double>& values() const { return values_; }
    bool operator==(const Histogram&) const = default;

private:
    std::vector<double> values_;
};

ObjectField project_modulus(const ObjectField& obj, const ModulusData& modulus);
ObjectField project_support(const ObjectField& obj, const SupportMask& support);
ObjectField project_positive(const ObjectField& obj);
ObjectField project_support_positive(const ObjectField& obj, const SupportMask& support);
/// The pixel holding the n-th smallest value receives h_n; ties go by pixel index.
ObjectField project_histogram(const ObjectField& obj, const Histogram& hist);

/// A constraint projection usable as either side of the difference map.
class Projector {
public:
    virtual ~Projector() = default;
    virtual ObjectField operator()(const ObjectField& obj) const = 0;
    virtual std::string name() const = 0;
};

/// Fourier modulus projection with the magnitudes pre-arranged for the real transform.
class ModulusProjector final : public Projector {
public:
    explicit ModulusProjector(ModulusData modulus);
    ObjectField operator()(const ObjectField& obj) const override;
    std::string name() const override { return "modulus"; }
    const ModulusData& modulus() const { return modulus_; }

private:
    ModulusData modulus_;
    std::vector<double> half_;
};

/// Support (optionally with positivity). With `renormalize`, the result is
/// rescaled to unit norm after projecting.
class SupportProjector final : public Projector {
public:
    SupportProjector(SupportMask support, bool positivity, bool renormalize);
    ObjectField operator()(const ObjectField& obj) const override;
    std::string name() const override { return positivity_ ? "support+positivity" : "support"; }
    const SupportMask& support() const { return support_; }

private:
    SupportMask support_;
    bool positivity_;
    bool renormalize_;
};

class HistogramProjector final : public Projector {
public:
    explicit HistogramProjector(Histogram hist) : hist_(std::move(hist)) {}
    ObjectField operator()(const ObjectField& obj) const override { return project_histogram(obj, hist_); }
    std::string name() const override { return "histogram"; }

private:
    Histogram hist_;
};

}  // namespace diffmap
