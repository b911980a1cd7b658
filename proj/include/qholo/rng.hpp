#pragma once

// Deterministic random substreams. Every randomized suite draws from a
// stream named after itself, seeded from (root seed, name), so suites can
// be re-run independently with identical samples.

#include <complex>
#include <cstdint>
#include <random>
#include <string_view>

namespace qholo {

class RngStream {
 public:
  RngStream(std::uint64_t root_seed, std::string_view name)
      : gen_(mix(root_seed, fnv1a(name))) {}

  std::uint64_t next() { return gen_(); }

  // uniform in [0, 1), identical across platforms
  double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

  // uniform in [-s, s]
  double sym(double s) { return s * (2.0 * uniform() - 1.0); }

  std::complex<double> sym_cx(double s) { return {sym(s), sym(s)}; }

  long integer(long lo, long hi) {  // inclusive bounds
    return lo + static_cast<long>(gen_() % static_cast<std::uint64_t>(hi - lo + 1));
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
  static std::uint64_t mix(std::uint64_t a, std::uint64_t b) {
    std::uint64_t x = a ^ (b + 0x9e3779b97f4a7c15ull + (a << 6) + (a >> 2));
    x ^= x >> 30;
    x *= 0xbf58476d1ce4e5b9ull;
    x ^= x >> 27;
    x *= 0x94d049bb133111ebull;
    x ^= x >> 31;
    return x;
  }
  std::mt19937_64 gen_;
};

}  // namespace qholo
