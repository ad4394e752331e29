#pragma once

#include <cstdint>
#include <random>

namespace evosort {

/// Tags that separate the independent random streams of one trial.
enum class StreamTag : std::uint64_t {
  Init = 0x696e6974,       // initial permutation
  Evolution = 0x65766f6c,  // swap process
  Algorithm = 0x616c676f,  // pivot choices
};

/// splitmix64 finalizer.
std::uint64_t mix64(std::uint64_t x) noexcept;

/// Stable seed for (master, index, tag). Adding indices never perturbs
/// seeds already derived for smaller ones.
std::uint64_t derive_seed(std::uint64_t master, std::uint64_t index, StreamTag tag) noexcept;

/// Seeded 64-bit generator with portable bounded draws. std distributions
/// are implementation-defined, so we avoid them to keep output files
/// byte-identical across standard libraries.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  std::uint64_t next() { return engine_(); }

  /// Uniform on [0, bound). bound must be positive.
  std::uint64_t below(std::uint64_t bound);

  /// Uniform on [0, 1) with 53 bits of resolution.
  double unit() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

  /// A new generator whose stream is decorrelated from this one.
  Rng fork() { return Rng(mix64(next())); }

 private:
  std::mt19937_64 engine_;
};

}  // namespace evosort
