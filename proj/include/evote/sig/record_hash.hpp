#pragma once

#include <span>

#include "evote/scalar.hpp"

namespace evote {

/// h = SHA-256(rid as 32-byte big-endian || v as 4-byte big-endian).
inline Digest record_hash(const Scalar& rid, std::uint32_t v, std::uint32_t m) {
  if (v >= m) throw ProtocolError("vote out of range");
  Bytes enc = to_bytes_be(rid.value(), 32);
  append(enc, be32(v));
  return sha256(enc);
}

inline Digest xor_fold(std::span<const Digest> digests) {
  Digest acc{};
  for (const auto& d : digests)
    for (std::size_t i = 0; i < acc.size(); ++i) acc[i] ^= d[i];
  return acc;
}

}  // namespace evote
