#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "diffmap/atoms.hpp"
#include "diffmap/field.hpp"
#include "diffmap/projections.hpp"

namespace diffmap {

struct ClusterSpec {
    /// Clustering length in pixels; 0 gives a white spectrum.
    double xi = 0.0;
    std::uint64_t seed = 0;

    double q0() const;
    void validate() const;
};

/// I.i.d. uniform values on [0, 1), normalized.
ObjectField random_object(const Grid& grid, std::uint64_t seed);

/// Random field with |F_q|^2 proportional to q0^2 / (|q|^2 + q0^2) and uniform
/// random phases paired so the result is exactly real. Normalized.
ObjectField clustered_random(const Grid& grid, const ClusterSpec& spec);

/// Standard template for the grid's dimension with amplitude 1/sqrt(M).
AtomicityConfig unit_atomic_config(const Grid& grid, std::size_t atoms);

/// The atomicity projection of a clustered random field.
AtomicObject make_atomic_object(const Grid& grid, const AtomicityConfig& cfg, const ClusterSpec& spec);

Histogram histogram_of(const ObjectField& obj);
ModulusData modulus_of(const ObjectField& obj);

/// Averaged Fourier magnitudes of two objects with the same histogram.
std::pair<ModulusData, Histogram> fabricate_unsolvable(const ObjectField& a, const ObjectField& b);

/// Random values on a centered disk, zero elsewhere, normalized.
ObjectField random_disk(const Grid& grid, double diameter, std::uint64_t seed);

/// 1-d sequence with `ones` entries equal to 1 at random positions, the rest 0.
ObjectField binary_sequence(std::size_t length, std::size_t ones, std::uint64_t seed);

/// Mean over atoms of the minimum-image distance to the nearest other center.
double mean_nearest_neighbor(const Grid& grid, const std::vector<AtomPlacement>& placements);

}  // namespace diffmap
