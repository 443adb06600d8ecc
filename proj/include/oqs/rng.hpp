#pragma once
// Counter-based random streams: every (seed, realization, purpose) triple maps
// to an independent SplitMix64 sequence, so realizations can be drawn in any
// order or on any thread.

#include <cstdint>
#include <limits>

namespace oqs {

enum class Stream : std::uint64_t {
  intrinsic = 1,
  amplitudes = 2,
  disorder = 3,
  mixing = 4,
  bootstrap = 5,
  synthetic = 6,
};

class SplitMix64 {
 public:
  using result_type = std::uint64_t;

  explicit SplitMix64(std::uint64_t state = 0) : state_(state) {}

  static constexpr result_type min() { return 0; }
  static constexpr result_type max() { return std::numeric_limits<result_type>::max(); }

  result_type operator()() {
    std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
  }

  /// Uniform double in [0, 1) with 53 random bits.
  double uniform() { return static_cast<double>((*this)() >> 11) * 0x1.0p-53; }

 private:
  std::uint64_t state_;
};

std::uint64_t mix64(std::uint64_t x);

/// Initial state for the stream of one realization and purpose.
std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t realization, Stream purpose);

inline SplitMix64 make_stream(std::uint64_t base_seed, std::uint64_t realization, Stream purpose) {
  return SplitMix64(stream_seed(base_seed, realization, purpose));
}

}  // namespace oqs
