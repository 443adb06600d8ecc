#include "oqs/rng.hpp"

namespace oqs {

std::uint64_t mix64(std::uint64_t x) {
  x ^= x >> 33;
  x *= 0xff51afd7ed558ccdULL;
  x ^= x >> 33;
  x *= 0xc4ceb9fe1a85ec53ULL;
  x ^= x >> 33;
  return x;
}

std::uint64_t stream_seed(std::uint64_t base_seed, std::uint64_t realization, Stream purpose) {
  std::uint64_t h = mix64(base_seed ^ 0x6a09e667f3bcc909ULL);
  h = mix64(h ^ (realization + 0x9e3779b97f4a7c15ULL));
  h = mix64(h ^ (static_cast<std::uint64_t>(purpose) * 0xbb67ae8584caa73bULL));
  return h;
}

}  // namespace oqs
