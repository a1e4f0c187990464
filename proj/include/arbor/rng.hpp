#ifndef ARBOR_RNG_HPP
#define ARBOR_RNG_HPP

#include <cstdint>
#include <random>

namespace arbor {

// Seedable, streamable uniform generator. Identical (seed, stream_id)
// pairs reproduce the same sequence; distinct stream_ids are seeded
// through a SplitMix64 scramble so streams are statistically
// independent for practical purposes.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id = 0)
      : seed_(seed), stream_id_(stream_id) {
    std::uint64_t s = splitmix(seed ^ (0x9e3779b97f4a7c15ULL * (stream_id + 1)));
    std::seed_seq seq{static_cast<std::uint32_t>(s), static_cast<std::uint32_t>(s >> 32),
                      static_cast<std::uint32_t>(splitmix(s)),
                      static_cast<std::uint32_t>(splitmix(s) >> 32)};
    engine_.seed(seq);
  }

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Uniform double in [0, 1), 53 bits, platform independent.
  double uniform() { return (engine_() >> 11) * 0x1.0p-53; }

  // Uniform integer in {1, ..., n}, consuming exactly one variate.
  int uniform_index(int n) {
    int v = 1 + static_cast<int>(uniform() * n);
    return v > n ? n : v;
  }

 private:
  static std::uint64_t splitmix(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
  }

  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

}  // namespace arbor

#endif
