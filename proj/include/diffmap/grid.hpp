#pragma once

#include <array>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace diffmap {

/// Raised for malformed inputs: mismatched grids, empty masks, bad sizes.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// Integer offset on a periodic grid; unused trailing components are zero.
using Offset = std::array<int, 3>;

/// Periodic grid of 1 to 3 dimensions, row-major with the last axis fastest.
class Grid {
public:
    static constexpr std::size_t kMaxDims = 3;

    Grid() = default;
    Grid(std::initializer_list<std::size_t> extents);
    explicit Grid(const std::vector<std::size_t>& extents);

    std::size_t dims() const { return dims_; }
    std::size_t extent(std::size_t axis) const { return extents_[axis]; }
    std::vector<std::size_t> extents() const;
    std::size_t size() const { return size_; }

    std::size_t index(const Offset& coords) const;
    Offset coords(std::size_t index) const;

    /// Index of the pixel at `index` displaced by `offset`, with wrap-around.
    std::size_t shifted(std::size_t index, const Offset& offset) const;

    /// Index of the point reflected through the origin (r -> -r).
    std::size_t negated(std::size_t index) const;

    /// Signed representative of a coordinate in [-n/2, n/2).
    int signed_coord(std::size_t axis, int coord) const;

    /// Squared minimum-image distance of pixel `index` from the origin.
    double min_image_norm2(std::size_t index) const;

    /// Squared periodic wavevector |q|^2, components 2*pi*k/n with k symmetric.
    double wavevector_norm2(std::size_t index) const;

    std::string describe() const;

    bool operator==(const Grid& other) const = default;

private:
    std::size_t dims_ = 0;
    std::array<std::size_t, kMaxDims> extents_{1, 1, 1};
    std::size_t size_ = 0;
};

void require_same_grid(const Grid& a, const Grid& b, const char* what);

}  // namespace diffmap
