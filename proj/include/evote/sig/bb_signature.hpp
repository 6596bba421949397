#pragma once

#include "evote/sig/keys.hpp"

namespace evote {

// Boneh-Boyen short signatures: sigma = g^{1/(x+m)}, checked by e(sigma, y g^m) = e(g,g).

template <CyclicGroup G>
KeyPair<G> bb_keygen(const G& grp, Drbg& rng) {
  return keygen(grp, rng);
}

template <CyclicGroup G>
typename G::Element bb_sign(const G& grp, const Scalar& sk, const Scalar& msg) {
  const auto& F = grp.field();
  auto denom = F.add(sk, msg);
  if (denom.is_zero()) throw GroupError("x + m is not invertible");
  return exp_g(grp, F.inv(denom));
}

template <PairingGroup G>
bool bb_verify(const G& grp, const typename G::Element& pk, const Scalar& msg, const typename G::Element& sig) {
  return grp.pair(sig, grp.mul(pk, exp_g(grp, msg))) == grp.gt();
}

}  // namespace evote
