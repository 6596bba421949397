#pragma once

#include "evote/group/group.hpp"

namespace evote {

template <CyclicGroup G>
struct KeyPair {
  Scalar secret;
  typename G::Element pub;
};

template <CyclicGroup G>
KeyPair<G> keygen(const G& grp, Drbg& rng) {
  auto x = grp.field().random_nonzero(rng);
  return {x, exp_g(grp, x)};
}

template <CyclicGroup G>
bool key_matches(const G& grp, const KeyPair<G>& kp) {
  return exp_g(grp, kp.secret) == kp.pub;
}

/// Per-token key p_ik = (g^{x_k})^{r_p}; the matching secret is x_k * r_p.
template <CyclicGroup G>
struct EphemeralKey {
  Scalar r_p;
  typename G::Element pub;
};

template <CyclicGroup G>
EphemeralKey<G> derive_ephemeral(const G& grp, const typename G::Element& booth_pub, Drbg& rng) {
  auto r_p = grp.field().random_nonzero(rng);
  return {r_p, grp.exp(booth_pub, r_p)};
}

inline Scalar ephemeral_secret(const ScalarField& f, const Scalar& booth_secret, const Scalar& r_p) {
  return f.mul(booth_secret, r_p);
}

}  // namespace evote
