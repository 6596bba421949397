#pragma once

#include <sodium.h>

#include <array>
#include <cstdint>
#include <string_view>

#include "evote/bytes.hpp"

namespace evote {

using Digest = std::array<std::uint8_t, 32>;

namespace detail {
inline void ensure_sodium() {
  static const int rc = sodium_init();
  if (rc < 0) throw Error("libsodium initialisation failed");
}
}  // namespace detail

class Sha256 {
 public:
  Sha256() {
    detail::ensure_sodium();
    crypto_hash_sha256_init(&state_);
  }
  Sha256& update(ByteView data) {
    crypto_hash_sha256_update(&state_, data.data(), data.size());
    return *this;
  }
  Sha256& update(std::string_view s) { return update(as_bytes(s)); }
  /// Length-prefixed update so concatenations of variable fields stay unambiguous.
  Sha256& field(ByteView data) {
    std::uint8_t len[4] = {static_cast<std::uint8_t>(data.size() >> 24), static_cast<std::uint8_t>(data.size() >> 16),
                           static_cast<std::uint8_t>(data.size() >> 8), static_cast<std::uint8_t>(data.size())};
    update(ByteView(len, 4));
    return update(data);
  }
  Sha256& field(std::string_view s) { return field(as_bytes(s)); }
  Digest finish() {
    Digest out{};
    crypto_hash_sha256_final(&state_, out.data());
    return out;
  }

 private:
  crypto_hash_sha256_state state_{};
};

inline Digest sha256(ByteView data) { return Sha256().update(data).finish(); }

inline Digest hmac_sha256(const Digest& key, ByteView data) {
  detail::ensure_sodium();
  Digest out{};
  crypto_auth_hmacsha256_state st;
  crypto_auth_hmacsha256_init(&st, key.data(), key.size());
  crypto_auth_hmacsha256_update(&st, data.data(), data.size());
  crypto_auth_hmacsha256_final(&st, out.data());
  return out;
}

inline bool equal_ct(ByteView a, ByteView b) {
  return a.size() == b.size() && sodium_memcmp(a.data(), b.data(), a.size()) == 0;
}

inline void secure_wipe(void* p, std::size_t n) { sodium_memzero(p, n); }

/// Deterministic SHA-256 counter-mode generator. A master seed expands into
/// independent labelled streams, so any stage can be replayed from the seed alone.
class Drbg {
 public:
  explicit Drbg(ByteView seed) : key_(Sha256().update("evote/drbg/seed").field(seed).finish()) {}
  explicit Drbg(std::string_view seed) : Drbg(as_bytes(seed)) {}

  Drbg derive(std::string_view label) const {
    Drbg child(key_, 0);
    child.key_ = Sha256().update("evote/drbg/derive").field(key_).field(label).finish();
    return child;
  }

  void fill(std::span<std::uint8_t> out) {
    for (auto& b : out) {
      if (used_ == block_.size()) refill();
      b = block_[used_++];
    }
  }

  Bytes bytes(std::size_t n) {
    Bytes out(n);
    fill(out);
    return out;
  }

  std::uint64_t next_u64() {
    std::uint8_t buf[8];
    fill(buf);
    std::uint64_t v = 0;
    for (auto b : buf) v = (v << 8) | b;
    return v;
  }

  /// Uniform integer in [0, bound) by rejection; bound must be nonzero.
  std::uint64_t uniform(std::uint64_t bound) {
    if (bound == 0) throw Error("uniform: zero bound");
    const std::uint64_t limit = UINT64_MAX - (UINT64_MAX % bound);
    for (;;) {
      auto v = next_u64();
      if (v < limit) return v % bound;
    }
  }

  double uniform_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

 private:
  Drbg(const Digest& key, int) : key_(key) {}

  void refill() {
    std::uint8_t ctr[8];
    for (int i = 0; i < 8; ++i) ctr[i] = static_cast<std::uint8_t>(counter_ >> (56 - 8 * i));
    block_ = Sha256().update(key_).update(ByteView(ctr, 8)).finish();
    ++counter_;
    used_ = 0;
  }

  Digest key_;
  Digest block_{};
  std::size_t used_ = 32;
  std::uint64_t counter_ = 0;
};

}  // namespace evote
