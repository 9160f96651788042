#pragma once

#include <cstdint>
#include <random>

namespace pdlearn {

/// Seedable random generator with reproducible output.
///
/// Wraps std::mt19937_64 (whose sequence is pinned by the standard) and
/// implements its own variate transforms instead of the std:: distributions,
/// which are not portable across standard libraries. Given the same seed the
/// draws are identical across runs; they are identical across platforms as
/// long as the libm functions used (log, sqrt, cos) round the same way.
///
/// Independent streams for per-sample generation are derived with
/// `Rng::stream(master, index)`: both words are mixed through splitmix64, so
/// datasets are reproducible from (master seed, sample index) alone.
class Rng {
 public:
  explicit Rng(std::uint64_t seed);

  /// Derive the generator for sample `index` under `master`.
  static Rng stream(std::uint64_t master, std::uint64_t index);

  std::uint64_t next_u64();

  /// Uniform on [0, 1) with 53-bit resolution.
  double uniform();
  /// Uniform on [a, b).
  double uniform(double a, double b);
  /// Integer uniform on [0, n) by rejection (unbiased).
  std::uint64_t uniform_index(std::uint64_t n);
  /// Normal via Box-Muller (one variate per two uniforms; no cached spare).
  double normal(double mean = 0.0, double stddev = 1.0);
  /// Poisson by Knuth's product method. Suitable for moderate means.
  int poisson(double mean);

 private:
  std::mt19937_64 engine_;
};

/// splitmix64 mix step; used for seed derivation and tests.
std::uint64_t splitmix64(std::uint64_t& state);

}  // namespace pdlearn
