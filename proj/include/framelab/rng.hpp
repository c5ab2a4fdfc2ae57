#pragma once

#include <complex>
#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace framelab {

// Deterministic random source. Only the raw mt19937_64 stream is consumed
// (the standard fully specifies it), so identical seeds give identical
// draws on every platform; std::*_distribution is avoided on purpose.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Derives an independent stream from (master seed, tag, index).
  // A fixed tag per call site keeps unrelated consumers decoupled:
  // adding draws in one place never shifts another's stream.
  static Rng split(std::uint64_t master, std::string_view tag, std::uint64_t index) {
    const std::uint64_t h = fnv1a(tag);
    std::seed_seq seq{static_cast<std::uint32_t>(master), static_cast<std::uint32_t>(master >> 32),
                      static_cast<std::uint32_t>(h), static_cast<std::uint32_t>(h >> 32),
                      static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32)};
    Rng rng(0);
    rng.engine_.seed(seq);
    return rng;
  }

  std::uint64_t raw() { return engine_(); }

  /// Uniform draw in [0, 1).
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

  /// Uniform draw in [-1, 1).
  double uniform_symmetric() { return 2.0 * uniform() - 1.0; }

  /// Standard normal via Box-Muller.
  double gaussian() {
    const double u1 = 1.0 - uniform();  // (0, 1], keeps log() finite
    const double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * M_PI * u2);
  }

  /// Index in [0, n).
  std::uint64_t below(std::uint64_t n) { return engine_() % n; }

  template <typename Scalar>
  Scalar scalar_gaussian() {
    if constexpr (std::is_same_v<Scalar, std::complex<double>>) {
      const double re = gaussian();
      const double im = gaussian();
      return Scalar(re, im) / std::sqrt(2.0);
    } else {
      return static_cast<Scalar>(gaussian());
    }
  }

 private:
  static std::uint64_t fnv1a(std::string_view s) {
    std::uint64_t h = 1469598103934665603ull;
    for (char c : s) {
      h ^= static_cast<unsigned char>(c);
      h *= 1099511628211ull;
    }
    return h;
  }

  std::mt19937_64 engine_;
};

}  // namespace framelab
