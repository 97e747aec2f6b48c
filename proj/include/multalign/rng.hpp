#pragma once

#include <cstdint>
#include <vector>

namespace multalign {

// Small counter-based generator (splitmix64 steps) chosen so that streams
// derived from (seed, stream, substream) are reproducible across platforms
// and standard-library versions.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : state_(mix(seed ^ 0x9E3779B97F4A7C15ULL)) {}

  static Rng derive(std::uint64_t seed, std::uint64_t stream, std::uint64_t substream) {
    Rng r(seed);
    r.state_ = mix(r.state_ ^ mix(stream ^ 0xD1B54A32D192ED03ULL));
    r.state_ = mix(r.state_ ^ mix(substream ^ 0x8CB92BA72F3D8DD7ULL));
    return r;
  }

  std::uint64_t next_u64() {
    state_ += 0x9E3779B97F4A7C15ULL;
    return mix(state_);
  }

  // Uniform in [0, 1).
  double next_double() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

  bool bernoulli(double p) { return next_double() < p; }

  // Uniform in [0, n); n must be positive.
  std::size_t next_index(std::size_t n) {
    const auto x = next_u64();
    return static_cast<std::size_t>(
        (static_cast<unsigned __int128>(x) * static_cast<unsigned __int128>(n)) >> 64);
  }

  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[next_index(i)]);
    }
  }

 private:
  static std::uint64_t mix(std::uint64_t z) {
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  std::uint64_t state_;
};

}  // namespace multalign
