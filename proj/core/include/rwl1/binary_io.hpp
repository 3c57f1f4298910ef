#pragma once

#include <filesystem>

#include "rwl1/sigcore.hpp"

namespace rwl1::io {

// Layout (all little-endian):
//   bytes 0..7   magic "RWL1BIN\x01"
//   bytes 8..11  uint32 rows
//   bytes 12..15 uint32 cols
//   then rows*cols IEEE-754 binary64 values, row-major.
// Vectors are stored as a single column (cols == 1).
inline constexpr char kMagic[8] = {'R', 'W', 'L', '1', 'B', 'I', 'N', '\x01'};
inline constexpr std::size_t kHeaderBytes = 16;

void write_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix read_matrix(const std::filesystem::path& path);

void write_vector(const std::filesystem::path& path, const Vector& v);
/// Accepts either an n x 1 or a 1 x n file.
Vector read_vector(const std::filesystem::path& path);

}  // namespace rwl1::io
