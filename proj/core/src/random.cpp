#include "congest/random.hpp"

namespace congest {

std::uint64_t RandomStream::mix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t label_hash(std::string_view label) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : label) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

RandomStream RandomStream::child(std::uint64_t a, std::uint64_t b) const {
  std::uint64_t k = mix(key_ ^ mix(a + 0x1234567ULL));
  k = mix(k ^ mix(b + 0x89abcdefULL));
  return RandomStream(k, 0);
}

RandomStream RandomStream::child(std::string_view label, std::uint64_t index) const {
  return child(label_hash(label), index);
}

RandomStream RandomStream::derive(std::initializer_list<PathStep> path) const {
  RandomStream s(key_, 0);
  for (const auto& step : path) s = s.child(step.label, step.index);
  return s;
}

std::uint64_t RandomStream::next_u64() {
  if (!engine_) engine_.emplace(key_);
  return (*engine_)();
}

std::uint64_t RandomStream::uniform_int(std::uint64_t lo, std::uint64_t hi) {
  if (hi <= lo) return lo;
  const std::uint64_t span = hi - lo;
  if (span == ~0ULL) return next_u64();
  const std::uint64_t range = span + 1;
  const std::uint64_t limit = ~0ULL - (~0ULL % range);
  std::uint64_t x;
  do {
    x = next_u64();
  } while (x >= limit);
  return lo + x % range;
}

double RandomStream::uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

bool RandomStream::bernoulli(double p) {
  if (p <= 0.0) return false;
  if (p >= 1.0) return true;
  return uniform01() < p;
}

std::uint32_t RandomStream::geometric_level(double q, std::uint32_t cap) {
  std::uint32_t k = 0;
  while (k < cap && bernoulli(q)) ++k;
  return k;
}

}  // namespace congest
