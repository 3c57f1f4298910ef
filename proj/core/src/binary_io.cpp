#include "rwl1/binary_io.hpp"

#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <limits>
#include <string>

#include "rwl1/error.hpp"

namespace rwl1::io {
namespace {

void put_u32(std::ostream& out, std::uint32_t v) {
  std::array<char, 4> b{};
  for (int i = 0; i < 4; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), b.size());
}

void put_f64(std::ostream& out, double d) {
  const auto v = std::bit_cast<std::uint64_t>(d);
  std::array<char, 8> b{};
  for (int i = 0; i < 8; ++i) b[static_cast<std::size_t>(i)] = static_cast<char>((v >> (8 * i)) & 0xFFu);
  out.write(b.data(), b.size());
}

std::uint32_t get_u32(const unsigned char* p) {
  std::uint32_t v = 0;
  for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
  return v;
}

double get_f64(const unsigned char* p) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
  return std::bit_cast<double>(v);
}

}  // namespace

void write_matrix(const std::filesystem::path& path, const Matrix& m) {
  require(m.rows() <= std::numeric_limits<std::uint32_t>::max() &&
              m.cols() <= std::numeric_limits<std::uint32_t>::max(),
          ErrorCode::kInvalidArgument, "matrix too large for the binary format");
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorCode::kIo, "cannot open " + path.string() + " for writing");
  out.write(kMagic, sizeof(kMagic));
  put_u32(out, static_cast<std::uint32_t>(m.rows()));
  put_u32(out, static_cast<std::uint32_t>(m.cols()));
  for (Eigen::Index i = 0; i < m.rows(); ++i)
    for (Eigen::Index j = 0; j < m.cols(); ++j) put_f64(out, m(i, j));
  require(static_cast<bool>(out), ErrorCode::kIo, "write failed for " + path.string());
}

Matrix read_matrix(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorCode::kIo, "cannot open " + path.string());
  std::array<unsigned char, kHeaderBytes> header{};
  in.read(reinterpret_cast<char*>(header.data()), header.size());
  require(in.gcount() == static_cast<std::streamsize>(kHeaderBytes), ErrorCode::kIo,
          path.string() + ": truncated header");
  require(std::memcmp(header.data(), kMagic, sizeof(kMagic)) == 0, ErrorCode::kIo,
          path.string() + ": bad magic");
  const std::uint32_t rows = get_u32(header.data() + 8);
  const std::uint32_t cols = get_u32(header.data() + 12);

  const std::size_t count = static_cast<std::size_t>(rows) * cols;
  std::vector<unsigned char> payload(count * 8);
  in.read(reinterpret_cast<char*>(payload.data()), static_cast<std::streamsize>(payload.size()));
  require(in.gcount() == static_cast<std::streamsize>(payload.size()), ErrorCode::kIo,
          path.string() + ": expected " + std::to_string(rows) + "x" + std::to_string(cols) +
              " values, file is short");
  require(in.peek() == std::char_traits<char>::eof(), ErrorCode::kIo,
          path.string() + ": trailing bytes after payload");

  Matrix m(rows, cols);
  const unsigned char* p = payload.data();
  for (std::uint32_t i = 0; i < rows; ++i)
    for (std::uint32_t j = 0; j < cols; ++j, p += 8) m(i, j) = get_f64(p);
  return m;
}

void write_vector(const std::filesystem::path& path, const Vector& v) { write_matrix(path, v); }

Vector read_vector(const std::filesystem::path& path) {
  Matrix m = read_matrix(path);
  require(m.cols() == 1 || m.rows() == 1, ErrorCode::kIo,
          path.string() + ": expected a vector, got " + std::to_string(m.rows()) + "x" +
              std::to_string(m.cols()));
  return m.cols() == 1 ? Vector(m.col(0)) : Vector(m.row(0).transpose());
}

}  // namespace rwl1::io
