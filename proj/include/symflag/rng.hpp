#pragma once

#include "symflag/exact.hpp"

#include <cstdint>
#include <random>

namespace symflag {

/// Deterministic generator. Each (seed, stream) pair yields an independent
/// sequence; trials use their index as the stream so results do not depend on
/// evaluation order. Conversions to doubles and integers are done here rather
/// than through <random> distributions, whose output is implementation-defined.
class Rng {
public:
  explicit Rng(std::uint64_t seed, std::uint64_t stream = 0) : engine_(mix(seed, stream)) {}

  std::uint64_t next() { return engine_(); }
  double uniform01() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform01(); }
  /// Uniform integer in [lo, hi].
  long integer(long lo, long hi) {
    const auto span = static_cast<std::uint64_t>(hi - lo) + 1;
    return lo + static_cast<long>(next() % span);
  }
  bool chance(double p) { return uniform01() < p; }
  /// p/q with |p| <= max_num and 1 <= q <= max_den.
  Rational rational(long max_num, long max_den) {
    Rational q(integer(-max_num, max_num), integer(1, max_den));
    q.canonicalize();
    return q;
  }

private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }
  static std::uint64_t mix(std::uint64_t seed, std::uint64_t stream) {
    return splitmix(splitmix(seed) ^ (stream * 0xd1b54a32d192ed03ULL + 0x8cb92ba72f3d8dd7ULL));
  }

  std::mt19937_64 engine_;
};

} // namespace symflag
