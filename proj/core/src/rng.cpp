#include "roadrand/rng.hpp"

namespace roadrand {

std::uint64_t CounterRng::below(std::uint64_t n) noexcept {
  // Reject the low tail so every residue class is equally likely.
  const std::uint64_t threshold = (0 - n) % n;
  for (;;) {
    const std::uint64_t x = next();
    if (x >= threshold) return x % n;
  }
}

}  // namespace roadrand
