#pragma once

#include "evote/sig/keys.hpp"

namespace evote {

// Blind BLS over the pairing group. The message is hashed into G under the
// signing key, masked by g^b, signed as a plain exponentiation, and unmasked
// by dividing out pk^b. The signer only ever sees a uniformly random element.

template <CyclicGroup G>
typename G::Element blind_base(const G& grp, const typename G::Element& pk, const Scalar& msg) {
  ByteWriter w;
  w.field(grp.serialize(pk)).field(grp.field().encode(msg));
  return grp.hash_to_group("evote/blind", w.bytes());
}

template <CyclicGroup G>
Bytes blind(const G& grp, const Scalar& msg, const Scalar& b, const typename G::Element& pk) {
  return grp.serialize(grp.mul(blind_base(grp, pk, msg), exp_g(grp, b)));
}

template <CyclicGroup G>
Bytes bsign(const G& grp, const Scalar& sk, ByteView blinded) {
  return grp.serialize(grp.exp(grp.deserialize(blinded), sk));
}

template <CyclicGroup G>
typename G::Element unblind(const G& grp, ByteView sig_blinded, const Scalar& b, const typename G::Element& pk) {
  return grp.mul(grp.deserialize(sig_blinded), grp.inv(grp.exp(pk, b)));
}

template <PairingGroup G>
bool bverify(const G& grp, const typename G::Element& pk, const Scalar& msg, const typename G::Element& sig) {
  return grp.pair(sig, grp.g()) == grp.pair(blind_base(grp, pk, msg), pk);
}

}  // namespace evote
