#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <random>
#include <string_view>
#include <vector>

namespace congest {

struct PathStep {
  std::uint64_t label;
  std::uint64_t index;
};

std::uint64_t label_hash(std::string_view label);

// Deterministic stream keyed by (seed, derivation path). The engine is
// std::mt19937_64, created lazily on first draw. Integer and real draws are
// mapped from raw 64-bit outputs so results do not depend on the standard
// library's distribution implementations.
class RandomStream {
 public:
  explicit RandomStream(std::uint64_t seed = 0) : key_(mix(seed ^ 0x6a09e667f3bcc908ULL)) {}

  RandomStream child(std::string_view label, std::uint64_t index = 0) const;
  RandomStream child(std::uint64_t a, std::uint64_t b) const;
  RandomStream derive(std::initializer_list<PathStep> path) const;

  std::uint64_t key() const { return key_; }

  std::uint64_t next_u64();
  // Uniform in [lo, hi], inclusive.
  std::uint64_t uniform_int(std::uint64_t lo, std::uint64_t hi);
  // Uniform in [0, 1) with 53 bits.
  double uniform01();
  bool bernoulli(double p);
  // Number of successes before the first failure, success probability q; capped.
  std::uint32_t geometric_level(double q, std::uint32_t cap);

  template <class T>
  void shuffle(std::vector<T>& v) {
    for (std::size_t i = v.size(); i > 1; --i) {
      std::size_t j = uniform_int(0, i - 1);
      std::swap(v[i - 1], v[j]);
    }
  }

  static std::uint64_t mix(std::uint64_t x);

 private:
  explicit RandomStream(std::uint64_t key, int) : key_(key) {}
  std::uint64_t key_;
  std::optional<std::mt19937_64> engine_;
};

// Stream used by node v in round r of a run seeded with `seed`.
inline RandomStream node_stream(std::uint64_t seed, std::uint32_t node, std::uint64_t round) {
  return RandomStream(seed).child(node, round);
}

}  // namespace congest
