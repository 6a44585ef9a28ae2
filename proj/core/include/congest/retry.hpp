#pragma once

#include <cstdint>
#include <string>

#include "congest/errors.hpp"
#include "congest/random.hpp"

namespace congest {

// Seed for retry number `attempt` (0 is the original seed).
inline std::uint64_t derived_seed(std::uint64_t seed, unsigned attempt) {
  if (attempt == 0) return seed;
  return RandomStream(seed).child("reseed", attempt).key();
}

// Calls f(seed') on the original seed and then on up to `max_reseeds`
// derived seeds while it throws WhpFailure. Other errors propagate at once.
template <class F>
auto with_reseed(std::uint64_t seed, unsigned max_reseeds, F&& f, unsigned* attempts = nullptr)
    -> decltype(f(seed)) {
  for (unsigned a = 0;; ++a) {
    if (attempts) *attempts = a + 1;
    try {
      return f(derived_seed(seed, a));
    } catch (const WhpFailure& e) {
      if (a >= max_reseeds)
        throw WhpFailure(e.bound(), "still failing after " + std::to_string(a + 1) + " attempts: " + e.what());
    }
  }
}

}  // namespace congest
