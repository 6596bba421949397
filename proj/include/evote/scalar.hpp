#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <cstdint>
#include <functional>
#include <string>

#include "evote/bytes.hpp"
#include "evote/hash.hpp"

namespace evote {

using BigInt = mpz_class;

inline std::size_t byte_width(const BigInt& v) { return (mpz_sizeinbase(v.get_mpz_t(), 2) + 7) / 8; }

/// Fixed-width big-endian encoding; throws if the value does not fit.
inline Bytes to_bytes_be(const BigInt& v, std::size_t width) {
  if (sgn(v) < 0) throw FormatError("negative integer cannot be encoded");
  std::size_t need = sgn(v) == 0 ? 0 : byte_width(v);
  if (need > width) throw FormatError("integer does not fit in " + std::to_string(width) + " bytes");
  Bytes out(width, 0);
  std::size_t written = 0;
  if (need > 0) mpz_export(out.data() + (width - need), &written, 1, 1, 1, 0, v.get_mpz_t());
  return out;
}

inline BigInt from_bytes_be(ByteView data) {
  BigInt v;
  if (!data.empty()) mpz_import(v.get_mpz_t(), data.size(), 1, 1, 1, 0, data.data());
  return v;
}

/// Minimal-width big-endian encoding (empty for zero).
inline Bytes to_bytes_min(const BigInt& v) { return to_bytes_be(v, sgn(v) == 0 ? 0 : byte_width(v)); }

inline BigInt mod_pos(const BigInt& a, const BigInt& n) {
  BigInt r;
  mpz_mod(r.get_mpz_t(), a.get_mpz_t(), n.get_mpz_t());
  return r;
}

inline BigInt pow_mod(const BigInt& base, const BigInt& e, const BigInt& n) {
  BigInt r;
  mpz_powm(r.get_mpz_t(), base.get_mpz_t(), e.get_mpz_t(), n.get_mpz_t());
  return r;
}

class ScalarField;

/// Element of Z_q. Only a ScalarField can mint one, so the value is always reduced.
class Scalar {
 public:
  Scalar() = default;

  const BigInt& value() const { return v_; }
  bool is_zero() const { return sgn(v_) == 0; }
  std::uint64_t to_u64() const { return mpz_get_ui(v_.get_mpz_t()); }

  friend bool operator==(const Scalar& a, const Scalar& b) { return a.v_ == b.v_; }
  friend bool operator<(const Scalar& a, const Scalar& b) { return a.v_ < b.v_; }

  /// Zeroes the limb storage in place, leaving the value 0.
  void wipe() {
    auto* raw = v_.get_mpz_t();
    if (raw->_mp_alloc > 0) secure_wipe(raw->_mp_d, static_cast<std::size_t>(raw->_mp_alloc) * sizeof(mp_limb_t));
    raw->_mp_size = 0;
  }

 private:
  friend class ScalarField;
  explicit Scalar(BigInt v) : v_(std::move(v)) {}
  BigInt v_;
};

struct ScalarHash {
  std::size_t operator()(const Scalar& s) const {
    const auto* raw = s.value().get_mpz_t();
    return raw->_mp_size == 0 ? 0 : std::hash<mp_limb_t>{}(raw->_mp_d[0]);
  }
};

/// Arithmetic in Z_q for a prime group order q.
class ScalarField {
 public:
  ScalarField() = default;
  explicit ScalarField(BigInt q) : q_(std::move(q)), width_(byte_width(q_)) {
    if (q_ < 2) throw GroupError("scalar field order must be at least 2");
  }

  const BigInt& order() const { return q_; }
  /// Byte width of a serialized scalar: ceil(log2 q / 8).
  std::size_t width() const { return width_; }

  Scalar from(const BigInt& v) const { return Scalar(mod_pos(v, q_)); }
  Scalar from_u64(std::uint64_t v) const { return from(BigInt(static_cast<unsigned long>(v))); }
  Scalar from_i64(std::int64_t v) const { return from(BigInt(static_cast<long>(v))); }
  Scalar zero() const { return Scalar(); }
  Scalar one() const { return Scalar(BigInt(1)); }

  Scalar add(const Scalar& a, const Scalar& b) const { return from(a.value() + b.value()); }
  Scalar sub(const Scalar& a, const Scalar& b) const { return from(a.value() - b.value()); }
  Scalar neg(const Scalar& a) const { return from(-a.value()); }
  Scalar mul(const Scalar& a, const Scalar& b) const { return from(a.value() * b.value()); }
  Scalar inv(const Scalar& a) const {
    BigInt r;
    if (a.is_zero() || mpz_invert(r.get_mpz_t(), a.value().get_mpz_t(), q_.get_mpz_t()) == 0)
      throw GroupError("scalar is not invertible");
    return Scalar(r);
  }
  Scalar div(const Scalar& a, const Scalar& b) const { return mul(a, inv(b)); }

  Scalar random(Drbg& rng) const {
    const std::size_t bits = mpz_sizeinbase(q_.get_mpz_t(), 2);
    const unsigned top_mask = bits % 8 == 0 ? 0xffu : ((1u << (bits % 8)) - 1u);
    Bytes buf(width_);
    for (;;) {
      rng.fill(buf);
      buf[0] &= static_cast<std::uint8_t>(top_mask);
      BigInt v = from_bytes_be(buf);
      if (v < q_) return Scalar(v);
    }
  }

  Scalar random_nonzero(Drbg& rng) const {
    for (;;) {
      auto s = random(rng);
      if (!s.is_zero()) return s;
    }
  }

  Bytes encode(const Scalar& s) const { return to_bytes_be(s.value(), width_); }

  /// Strict decoding: exact width and canonical (< q).
  Scalar decode(ByteView data) const {
    if (data.size() != width_) throw FormatError("scalar has wrong width");
    BigInt v = from_bytes_be(data);
    if (v >= q_) throw FormatError("scalar not reduced modulo q");
    return Scalar(v);
  }

  /// Hash arbitrary data to Z_q with negligible bias (width + 16 bytes reduced mod q).
  Scalar hash_to_scalar(std::string_view domain, ByteView data) const {
    Bytes wide;
    for (std::uint32_t ctr = 0; wide.size() < width_ + 16; ++ctr) {
      std::uint8_t c[4] = {static_cast<std::uint8_t>(ctr >> 24), static_cast<std::uint8_t>(ctr >> 16),
                           static_cast<std::uint8_t>(ctr >> 8), static_cast<std::uint8_t>(ctr)};
      auto d = Sha256().field(domain).update(ByteView(c, 4)).field(data).finish();
      append(wide, d);
    }
    wide.resize(width_ + 16);
    return from(from_bytes_be(wide));
  }

 private:
  BigInt q_{2};
  std::size_t width_ = 1;
};

}  // namespace evote
