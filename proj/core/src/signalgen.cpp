#include "rwl1/signalgen.hpp"

#include <cmath>
#include <string>

#include "rwl1/error.hpp"
#include "rwl1/rng.hpp"

namespace rwl1 {

Vector gen_sparse(const SignalSpec& spec) {
  require(spec.kind == SignalKind::kSparse, ErrorCode::kInvalidArgument, "signal kind is not sparse");
  require(spec.N >= 1 && spec.k >= 1 && spec.k <= spec.N, ErrorCode::kInvalidArgument,
          "sparse signal needs 1 <= k <= N (got k=" + std::to_string(spec.k) +
              ", N=" + std::to_string(spec.N) + ")");
  Rng rng(spec.seed);
  Vector x = Vector::Zero(static_cast<Eigen::Index>(spec.N));
  for (auto i : rng.sample_without_replacement(spec.N, spec.k)) {
    double a = 0.0;
    while (a == 0.0) a = rng.normal();
    x[static_cast<Eigen::Index>(i)] = a;
  }
  return x;
}

Vector gen_compressible(const SignalSpec& spec) {
  require(spec.kind == SignalKind::kCompressible, ErrorCode::kInvalidArgument,
          "signal kind is not compressible");
  require(spec.N >= 1, ErrorCode::kInvalidArgument, "N must be positive");
  require(spec.p > 1.0, ErrorCode::kInvalidArgument, "decay exponent p must exceed 1");
  require(spec.c > 0.0 && std::isfinite(spec.c), ErrorCode::kInvalidArgument,
          "scale c must be positive");
  Rng rng(spec.seed);
  Vector x(static_cast<Eigen::Index>(spec.N));
  for (std::size_t i = 1; i <= spec.N; ++i) {
    x[static_cast<Eigen::Index>(i - 1)] =
        rng.sign() * spec.c * std::pow(static_cast<double>(i), -spec.p);
  }
  return x;
}

Vector generate(const SignalSpec& spec) {
  return spec.kind == SignalKind::kSparse ? gen_sparse(spec) : gen_compressible(spec);
}

}  // namespace rwl1
