#pragma once

#include <cstddef>
#include <cstdint>

#include "rwl1/sigcore.hpp"

namespace rwl1 {

enum class SignalKind { kSparse, kCompressible };

struct SignalSpec {
  SignalKind kind = SignalKind::kSparse;
  std::size_t N = 0;
  std::size_t k = 0;  // sparse only
  double p = 1.5;     // compressible decay exponent, > 1
  double c = 1.0;     // compressible scale
  std::uint64_t seed = 0;
};

/// k positions uniform without replacement, i.i.d. standard normal amplitudes
/// (an exact zero draw is redrawn).
Vector gen_sparse(const SignalSpec& spec);

/// |x_i| = c i^{-p} for i = 1..N in index order, independent random signs.
Vector gen_compressible(const SignalSpec& spec);

Vector generate(const SignalSpec& spec);

}  // namespace rwl1
