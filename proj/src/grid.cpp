#include "diffmap/grid.hpp"

#include <numbers>
#include <sstream>

namespace diffmap {

Grid::Grid(std::initializer_list<std::size_t> extents)
    : Grid(std::vector<std::size_t>(extents)) {}

Grid::Grid(const std::vector<std::size_t>& extents) {
    if (extents.empty() || extents.size() > kMaxDims)
        throw Error("grid must have 1 to 3 dimensions, got " + std::to_string(extents.size()));
    dims_ = extents.size();
    size_ = 1;
    for (std::size_t a = 0; a < dims_; ++a) {
        if (extents[a] == 0) throw Error("grid extents must be positive");
        extents_[a] = extents[a];
        size_ *= extents[a];
    }
}

std::vector<std::size_t> Grid::extents() const {
    return {extents_.begin(), extents_.begin() + static_cast<std::ptrdiff_t>(dims_)};
}

std::size_t Grid::index(const Offset& coords) const {
    std::size_t idx = 0;
    for (std::size_t a = 0; a < dims_; ++a) {
        const auto n = static_cast<int>(extents_[a]);
        int c = coords[a] % n;
        if (c < 0) c += n;
        idx = idx * extents_[a] + static_cast<std::size_t>(c);
    }
    return idx;
}

Offset Grid::coords(std::size_t index) const {
    Offset c{0, 0, 0};
    for (std::size_t a = dims_; a-- > 0;) {
        c[a] = static_cast<int>(index % extents_[a]);
        index /= extents_[a];
    }
    return c;
}

std::size_t Grid::shifted(std::size_t index, const Offset& offset) const {
    Offset c = coords(index);
    for (std::size_t a = 0; a < dims_; ++a) c[a] += offset[a];
    return this->index(c);
}

std::size_t Grid::negated(std::size_t index) const {
    Offset c = coords(index);
    for (std::size_t a = 0; a < dims_; ++a) c[a] = -c[a];
    return this->index(c);
}

int Grid::signed_coord(std::size_t axis, int coord) const {
    const auto n = static_cast<int>(extents_[axis]);
    int c = coord % n;
    if (c < 0) c += n;
    return 2 * c >= n ? c - n : c;
}

double Grid::min_image_norm2(std::size_t index) const {
    const Offset c = coords(index);
    double r2 = 0.0;
    for (std::size_t a = 0; a < dims_; ++a) {
        const double s = signed_coord(a, c[a]);
        r2 += s * s;
    }
    return r2;
}

double Grid::wavevector_norm2(std::size_t index) const {
    const Offset c = coords(index);
    double q2 = 0.0;
    for (std::size_t a = 0; a < dims_; ++a) {
        const double q = 2.0 * std::numbers::pi * signed_coord(a, c[a]) /
                         static_cast<double>(extents_[a]);
        q2 += q * q;
    }
    return q2;
}

std::string Grid::describe() const {
    std::ostringstream os;
    for (std::size_t a = 0; a < dims_; ++a) os << (a ? "x" : "") << extents_[a];
    return os.str();
}

void require_same_grid(const Grid& a, const Grid& b, const char* what) {
    if (!(a == b))
        throw Error(std::string(what) + ": grid mismatch (" + a.describe() + " vs " +
                    b.describe() + ")");
}

}  // namespace diffmap
