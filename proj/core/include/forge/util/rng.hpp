#pragma once

#include <cstdint>
#include <random>
#include <string_view>
#include <vector>

namespace forge {

/// Deterministic random stream derived from (seed, key). The engine is
/// std::mt19937_64 (portable by definition); draws avoid std distributions,
/// whose outputs differ between standard library implementations.
class KeyedRng {
 public:
  KeyedRng(std::uint64_t seed, std::string_view key);

  std::uint64_t next() { return engine_(); }
  /// Uniform integer in [0, bound) by rejection; bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) with 53 random bits.
  double unit();
  double uniform(double lo, double hi) { return lo + (hi - lo) * unit(); }

  template <typename T>
  void shuffle(std::vector<T>& items) {
    for (std::size_t i = items.size(); i > 1; --i) {
      const auto j = static_cast<std::size_t>(below(i));
      std::swap(items[i - 1], items[j]);
    }
  }

 private:
  std::mt19937_64 engine_;
};

}  // namespace forge
