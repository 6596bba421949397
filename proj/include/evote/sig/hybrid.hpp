#pragma once

#include "evote/sig/keys.hpp"

namespace evote {

/// ElGamal KEM + SHA-256 counter keystream + HMAC-SHA256 tag over (kem || body).
template <CyclicGroup G>
struct HybridCiphertext {
  typename G::Element kem;
  Bytes body;
  Digest tag{};
};

namespace detail {
struct HybridKeys {
  Digest enc;
  Digest mac;
  ~HybridKeys() {
    secure_wipe(enc.data(), enc.size());
    secure_wipe(mac.data(), mac.size());
  }
};

template <CyclicGroup G>
HybridKeys hybrid_keys(const G& grp, const typename G::Element& kem, const typename G::Element& shared) {
  auto shared_bytes = grp.serialize(shared);
  auto seed = Sha256().field("evote/kem").field(grp.serialize(kem)).field(shared_bytes).finish();
  secure_wipe(shared_bytes.data(), shared_bytes.size());
  HybridKeys k{Sha256().field("evote/kem/enc").update(seed).finish(), Sha256().field("evote/kem/mac").update(seed).finish()};
  secure_wipe(seed.data(), seed.size());
  return k;
}

inline void keystream_xor(const Digest& key, Bytes& data) {
  for (std::size_t off = 0, blk = 0; off < data.size(); off += 32, ++blk) {
    auto pad = Sha256().update(key).update(be32(static_cast<std::uint32_t>(blk))).finish();
    for (std::size_t i = 0; i < 32 && off + i < data.size(); ++i) data[off + i] ^= pad[i];
  }
}

template <CyclicGroup G>
Digest hybrid_tag(const G& grp, const Digest& mac_key, const typename G::Element& kem, ByteView body) {
  ByteWriter w;
  w.field(grp.serialize(kem)).field(body);
  return hmac_sha256(mac_key, w.bytes());
}
}  // namespace detail

template <CyclicGroup G>
HybridCiphertext<G> hybrid_encrypt(const G& grp, const typename G::Element& pk, ByteView plaintext, Drbg& rng) {
  auto k = grp.field().random_nonzero(rng);
  HybridCiphertext<G> ct{exp_g(grp, k), Bytes(plaintext.begin(), plaintext.end()), {}};
  auto keys = detail::hybrid_keys(grp, ct.kem, grp.exp(pk, k));
  k.wipe();
  detail::keystream_xor(keys.enc, ct.body);
  ct.tag = detail::hybrid_tag(grp, keys.mac, ct.kem, ct.body);
  return ct;
}

template <CyclicGroup G>
Bytes hybrid_decrypt(const G& grp, const Scalar& sk, const HybridCiphertext<G>& ct) {
  if (ct.kem == grp.identity()) throw FormatError("hybrid ciphertext has a degenerate KEM element");
  auto keys = detail::hybrid_keys(grp, ct.kem, grp.exp(ct.kem, sk));
  auto tag = detail::hybrid_tag(grp, keys.mac, ct.kem, ct.body);
  if (!equal_ct(tag, ct.tag)) throw VerificationError("hybrid ciphertext failed authentication");
  Bytes out = ct.body;
  detail::keystream_xor(keys.enc, out);
  return out;
}

template <CyclicGroup G>
Bytes encode(const G& grp, const HybridCiphertext<G>& ct) {
  ByteWriter w;
  w.field(grp.serialize(ct.kem)).field(ct.body).raw(ct.tag);
  return w.take();
}

template <CyclicGroup G>
HybridCiphertext<G> decode_hybrid(const G& grp, ByteView data) {
  ByteReader r(data);
  HybridCiphertext<G> ct;
  ct.kem = grp.deserialize(r.field());
  ct.body = r.field_copy();
  auto tag = r.raw(32);
  std::copy(tag.begin(), tag.end(), ct.tag.begin());
  r.expect_done();
  return ct;
}

}  // namespace evote
