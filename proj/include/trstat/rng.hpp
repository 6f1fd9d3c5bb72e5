#pragma once

#include <cstdint>
#include <initializer_list>
#include <random>

#include "trstat/types.hpp"

namespace trstat {

/// SplitMix64 finalizer; bijective on 64-bit words.
std::uint64_t splitmix64(std::uint64_t x);

/// Hashes a base seed together with a path of indices (run, frequency, ...)
/// into an independent stream seed. Equal paths give equal seeds regardless of
/// the order in which streams are created.
std::uint64_t derive_seed(std::uint64_t base, std::initializer_list<std::uint64_t> path);

/// Owned random stream. Not thread-safe; give each worker its own.
class RngStream {
public:
  explicit RngStream(std::uint64_t seed) : engine_(seed) {}

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }

  /// Circular complex Gaussian with E|z|^2 = variance.
  cplx complex_gaussian(double variance = 1.0);

  /// Fills `out` with i.i.d. CN(0, variance) entries.
  void fill_complex_gaussian(CVector& out, double variance = 1.0);

  std::mt19937_64& engine() { return engine_; }

private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace trstat
