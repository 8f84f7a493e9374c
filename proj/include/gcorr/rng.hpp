#ifndef GCORR_RNG_HPP
#define GCORR_RNG_HPP

#include <cstdint>
#include <random>

#include "gcorr/scalar.hpp"

namespace gcorr {

  /// Seeded generator with portable derived draws.
  ///
  /// The engine is std::mt19937_64, whose output sequence is fixed by the
  /// standard. Distributions are implemented here (not with <random>
  /// distributions, whose algorithms are implementation-defined):
  ///   below(n)  rejection sampling on the raw 64-bit output, keeping draws
  ///             below the largest multiple of n, then reducing mod n;
  ///   unit()    the top 53 bits scaled by 2⁻⁵³, in [0, 1).
  class Rng {
   public:
    explicit Rng(std::uint64_t seed) : engine_(seed) {}

    std::uint64_t next() {
      return engine_();
    }

    std::uint64_t below(std::uint64_t n) {
      if (n <= 1) {
        return 0;
      }
      std::uint64_t const limit = UINT64_MAX - UINT64_MAX % n;
      std::uint64_t       x;
      do {
        x = engine_();
      } while (x >= limit);
      return x % n;
    }

    /// Uniform integer in [lo, hi].
    long long between(long long lo, long long hi) {
      return lo + static_cast<long long>(below(static_cast<std::uint64_t>(hi - lo + 1)));
    }

    double unit() {
      return static_cast<double>(engine_() >> 11) * 0x1p-53;
    }

    /// Uniform in [-1, 1).
    double symmetric() {
      return 2.0 * unit() - 1.0;
    }

    bool coin() {
      return below(2) == 1;
    }

    /// A positive rational num/den with num in [1, max_num] and den in
    /// [1, max_den].
    Scalar positive_rational(long long max_num = 9, long long max_den = 4) {
      long long num = between(1, max_num);
      long long den = between(1, max_den);
      return Scalar::fraction(num, den);
    }

   private:
    std::mt19937_64 engine_;
  };

}  // namespace gcorr

#endif  // GCORR_RNG_HPP
