#include "diffmap/io.hpp"

#include <algorithm>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <sstream>
#include <string>

namespace diffmap::io {
namespace {

std::uint64_t to_little_endian(std::uint64_t v) {
    if constexpr (std::endian::native == std::endian::big) {
        std::uint64_t r = 0;
        for (int i = 0; i < 8; ++i) r |= ((v >> (8 * i)) & 0xffu) << (8 * (7 - i));
        return r;
    }
    return v;
}

std::ofstream open_out(const std::filesystem::path& path) {
    if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
    std::ofstream os(path, std::ios::binary);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    return os;
}

}  // namespace

void write_pgf(std::ostream& os, const ObjectField& field) {
    const Grid& g = field.grid();
    os << "pgf " << g.dims();
    for (std::size_t e : g.extents()) os << ' ' << e;
    os << '\n';
    for (double v : field.values()) {
        const std::uint64_t bits = to_little_endian(std::bit_cast<std::uint64_t>(v));
        char bytes[8];
        std::memcpy(bytes, &bits, 8);
        os.write(bytes, 8);
    }
    if (!os) throw Error("pgf: write failed");
}

void write_pgf(const std::filesystem::path& path, const ObjectField& field) {
    auto os = open_out(path);
    write_pgf(os, field);
}

ObjectField read_pgf(std::istream& is) {
    std::string header;
    if (!std::getline(is, header)) throw Error("pgf: missing header");
    std::istringstream hs(header);
    std::string magic;
    std::size_t dims = 0;
    hs >> magic >> dims;
    if (magic != "pgf" || dims < 1 || dims > 3) throw Error("pgf: bad header '" + header + "'");
    std::vector<std::size_t> extents(dims);
    for (auto& e : extents)
        if (!(hs >> e)) throw Error("pgf: bad header '" + header + "'");
    std::string trailing;
    if (hs >> trailing) throw Error("pgf: bad header '" + header + "'");

    const Grid grid(extents);
    std::vector<double> values(grid.size());
    for (double& v : values) {
        char bytes[8];
        if (!is.read(bytes, 8)) throw Error("pgf: truncated data");
        std::uint64_t bits = 0;
        std::memcpy(&bits, bytes, 8);
        v = std::bit_cast<double>(to_little_endian(bits));
    }
    return ObjectField(grid, std::move(values));
}

ObjectField read_pgf(const std::filesystem::path& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw Error("cannot open " + path.string());
    return read_pgf(is);
}

void write_pgm(const std::filesystem::path& path, std::size_t width, std::size_t height,
               const std::vector<double>& values) {
    if (values.size() != width * height) throw Error("pgm: size mismatch");
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    const double span = values.empty() ? 0.0 : *hi - *lo;
    auto os = open_out(path);
    os << "P5\n" << width << ' ' << height << "\n255\n";
    for (double v : values) {
        const double u = span > 0.0 ? (v - *lo) / span : 0.0;
        os.put(static_cast<char>(static_cast<unsigned char>(std::clamp(u * 255.0 + 0.5, 0.0, 255.0))));
    }
    if (!os) throw Error("pgm: write failed");
}

void write_pgm(const std::filesystem::path& path, const ObjectField& field) {
    const Grid& g = field.grid();
    const std::size_t width = g.extent(g.dims() - 1);
    write_pgm(path, width, g.size() / width,
              std::vector<double>(field.values().begin(), field.values().end()));
}

std::vector<double> read_value_list(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw Error("cannot open " + path.string());
    std::vector<double> out;
    std::string line;
    while (std::getline(is, line)) {
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') continue;
        try {
            out.push_back(std::stod(line.substr(first)));
        } catch (const std::exception&) {
            throw Error("bad value '" + line + "' in " + path.string());
        }
    }
    return out;
}

}  // namespace diffmap::io
