#pragma once

#include <utility>
#include <vector>

#include "evote/hash.hpp"

namespace evote {

/// In-place Fisher-Yates over the seeded stream.
template <class T>
void fisher_yates(std::vector<T>& items, Drbg& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    auto j = static_cast<std::size_t>(rng.uniform(i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace evote
