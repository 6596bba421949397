#pragma once

#include "evote/sig/keys.hpp"

namespace evote {

struct SchnorrSignature {
  Scalar c;
  Scalar s;

  friend bool operator==(const SchnorrSignature&, const SchnorrSignature&) = default;
};

namespace detail {
template <CyclicGroup G>
Scalar schnorr_challenge(const G& grp, const typename G::Element& pub, const typename G::Element& R, ByteView msg) {
  ByteWriter w;
  w.field(grp.serialize(pub)).field(grp.serialize(R)).field(msg);
  return grp.field().hash_to_scalar("evote/schnorr", w.bytes());
}
}  // namespace detail

template <CyclicGroup G>
SchnorrSignature schnorr_sign(const G& grp, const KeyPair<G>& key, ByteView msg, Drbg& rng) {
  const auto& F = grp.field();
  auto k = F.random_nonzero(rng);
  auto c = detail::schnorr_challenge(grp, key.pub, exp_g(grp, k), msg);
  auto s = F.sub(k, F.mul(c, key.secret));
  k.wipe();
  return {c, s};
}

template <CyclicGroup G>
bool schnorr_verify(const G& grp, const typename G::Element& pub, ByteView msg, const SchnorrSignature& sig) {
  auto R = exp2(grp, grp.g(), sig.s, pub, sig.c);
  return detail::schnorr_challenge(grp, pub, R, msg) == sig.c;
}

inline Bytes encode(const ScalarField& f, const SchnorrSignature& sig) {
  Bytes out = f.encode(sig.c);
  append(out, f.encode(sig.s));
  return out;
}

inline SchnorrSignature decode_schnorr(const ScalarField& f, ByteView data) {
  if (data.size() != 2 * f.width()) throw FormatError("schnorr signature has wrong length");
  return {f.decode(data.subspan(0, f.width())), f.decode(data.subspan(f.width()))};
}

}  // namespace evote
