#pragma once

#include <vector>

#include "evote/sig/keys.hpp"

namespace evote {

/// Schnorr ring signature (AOS form): a closed hash chain c_0 -> c_1 -> ... -> c_0.
struct RingSignature {
  Scalar c0;
  std::vector<Scalar> s;

  friend bool operator==(const RingSignature&, const RingSignature&) = default;
};

template <CyclicGroup G>
using Ring = std::vector<typename G::Element>;

namespace detail {
template <CyclicGroup G>
Digest ring_digest(const G& grp, const Ring<G>& ring, ByteView msg) {
  Sha256 h;
  h.field("evote/ring").update(be32(static_cast<std::uint32_t>(ring.size())));
  for (const auto& pk : ring) h.field(grp.serialize(pk));
  return h.field(msg).finish();
}

template <CyclicGroup G>
Scalar ring_link(const G& grp, const Digest& prefix, const typename G::Element& R) {
  ByteWriter w;
  w.raw(prefix).field(grp.serialize(R));
  return grp.field().hash_to_scalar("evote/ring/link", w.bytes());
}
}  // namespace detail

/// Signing with caller-supplied randomness: alpha is the member's nonce and
/// fillers[i] the response for every other position i (fillers[index] is ignored).
template <CyclicGroup G>
RingSignature ring_sign_with(const G& grp, const Ring<G>& ring, std::size_t index, const Scalar& secret, ByteView msg,
                             const Scalar& alpha, std::vector<Scalar> fillers) {
  const auto& F = grp.field();
  const std::size_t n = ring.size();
  if (index >= n) throw ProtocolError("ring index out of range");
  if (fillers.size() != n) throw ProtocolError("ring filler count mismatch");
  if (!(exp_g(grp, secret) == ring[index])) throw ProtocolError("secret does not match ring member");

  const auto prefix = detail::ring_digest(grp, ring, msg);
  std::vector<Scalar> c(n);
  c[(index + 1) % n] = detail::ring_link(grp, prefix, exp_g(grp, alpha));
  for (std::size_t step = 1; step < n; ++step) {
    std::size_t i = (index + step) % n;
    c[(i + 1) % n] = detail::ring_link(grp, prefix, exp2(grp, grp.g(), fillers[i], ring[i], c[i]));
  }
  fillers[index] = F.sub(alpha, F.mul(c[index], secret));
  return {c[0], std::move(fillers)};
}

template <CyclicGroup G>
RingSignature ring_sign(const G& grp, const Ring<G>& ring, std::size_t index, const Scalar& secret, ByteView msg,
                        Drbg& rng) {
  const auto& F = grp.field();
  auto alpha = F.random(rng);
  std::vector<Scalar> fillers(ring.size());
  for (auto& s : fillers) s = F.random(rng);
  auto sig = ring_sign_with(grp, ring, index, secret, msg, alpha, std::move(fillers));
  alpha.wipe();
  return sig;
}

template <CyclicGroup G>
bool ring_verify(const G& grp, const Ring<G>& ring, ByteView msg, const RingSignature& sig) {
  if (ring.empty() || sig.s.size() != ring.size()) return false;
  const auto prefix = detail::ring_digest(grp, ring, msg);
  Scalar c = sig.c0;
  for (std::size_t i = 0; i < ring.size(); ++i) c = detail::ring_link(grp, prefix, exp2(grp, grp.g(), sig.s[i], ring[i], c));
  return c == sig.c0;
}

inline Bytes encode(const ScalarField& f, const RingSignature& sig) {
  ByteWriter w;
  w.raw(f.encode(sig.c0)).u32(static_cast<std::uint32_t>(sig.s.size()));
  for (const auto& s : sig.s) w.raw(f.encode(s));
  return w.take();
}

inline RingSignature decode_ring(const ScalarField& f, ByteView data) {
  ByteReader r(data);
  RingSignature sig{f.decode(r.raw(f.width())), {}};
  auto n = r.u32();
  if (n > data.size() / f.width()) throw FormatError("ring signature length field too large");
  for (std::uint32_t i = 0; i < n; ++i) sig.s.push_back(f.decode(r.raw(f.width())));
  r.expect_done();
  return sig;
}

}  // namespace evote
