#pragma once

#include <cstdint>
#include <initializer_list>
#include <string_view>

namespace sphot {

/// xoshiro256++ with splitmix64 seeding.  Self-contained so that sampler
/// output is identical across standard libraries and platforms.
///
/// All the randomness of a run flows from one master seed; independent
/// streams are derived by hashing the master seed together with a label and
/// an index (one stream per replication / per command).
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53 random bits.
  double uniform01();

  /// Uniform on {0, ..., n-1}; n >= 1.
  std::uint64_t uniform_below(std::uint64_t n);

  /// Standard normal (Marsaglia polar, one spare cached).
  double normal();

  /// Gamma(alpha, 1), alpha > 0 (Marsaglia-Tsang, with the U^{1/alpha} boost
  /// for alpha < 1).
  double gamma(double alpha);

  /// Beta(a, b), a, b > 0.
  double beta(double a, double b);

 private:
  std::uint64_t s_[4];
  double spare_ = 0.0;
  bool has_spare_ = false;
};

/// Deterministic stream derivation: hash-combines the master seed with a
/// textual label and an index.
std::uint64_t derive_seed(std::uint64_t master, std::string_view label, std::uint64_t index = 0);

}  // namespace sphot
