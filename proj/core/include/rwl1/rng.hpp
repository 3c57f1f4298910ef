#pragma once

#include <cstdint>
#include <random>
#include <vector>

namespace rwl1 {

/// SplitMix64 finalizer. Used to derive independent stream seeds from
/// (master seed, coordinates) tuples so that results never depend on the
/// order in which trials are executed.
std::uint64_t mix64(std::uint64_t x);

std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b);
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b,
                          std::uint64_t c);

/// Portable random source: std::mt19937_64 (whose output sequence is fixed
/// by the standard) plus hand-written conversions, since the standard
/// distributions are implementation-defined.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(mix64(seed)) {}

  std::uint64_t next_u64() { return engine_(); }

  /// Uniform on [0, 1) with 53 random bits.
  double uniform();

  /// Uniform integer on [0, bound) without modulo bias.
  std::uint64_t uniform_index(std::uint64_t bound);

  /// Standard normal (Marsaglia polar method).
  double normal();

  /// +1 or -1 with equal probability.
  double sign();

  /// `count` distinct values drawn uniformly from [0, population), in draw order.
  std::vector<std::size_t> sample_without_replacement(std::size_t population,
                                                      std::size_t count);

 private:
  std::mt19937_64 engine_;
  double spare_normal_ = 0.0;
  bool has_spare_ = false;
};

}  // namespace rwl1
