#pragma once

#include <filesystem>
#include <iosfwd>
#include <vector>

#include "diffmap/field.hpp"

namespace diffmap::io {

/// Portable grid file: ASCII header `pgf <d> <n1> [n2] [n3]\n` followed by
/// N little-endian IEEE doubles in row-major order.
void write_pgf(std::ostream& os, const ObjectField& field);
void write_pgf(const std::filesystem::path& path, const ObjectField& field);
ObjectField read_pgf(std::istream& is);
ObjectField read_pgf(const std::filesystem::path& path);

/// 8-bit binary PGM of a 2-d field, min-max scaled to 0..255. For 1-d and 3-d
/// fields the data is laid out as rows of the last axis.
void write_pgm(const std::filesystem::path& path, const ObjectField& field);
void write_pgm(const std::filesystem::path& path, std::size_t width, std::size_t height,
               const std::vector<double>& values);

/// One value per line; blank lines and lines starting with '#' are skipped.
std::vector<double> read_value_list(const std::filesystem::path& path);

}  // namespace diffmap::io
