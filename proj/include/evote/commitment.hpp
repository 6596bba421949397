#pragma once

#include <utility>

#include "evote/group/group.hpp"

namespace evote {

/// Pedersen commitment C = g^message * h^randomness.
template <CyclicGroup G>
struct Commitment {
  typename G::Element element;
  std::uint64_t context = 0;  // fingerprint of the group that produced it

  friend bool operator==(const Commitment& a, const Commitment& b) { return a.element == b.element; }
};

struct Opening {
  Scalar message;
  Scalar randomness;

  friend bool operator==(const Opening&, const Opening&) = default;
};

template <CyclicGroup G>
Commitment<G> commit(const G& grp, const Scalar& message, const Scalar& randomness) {
  return {exp2(grp, grp.g(), message, grp.h(), randomness), grp.fingerprint()};
}

template <CyclicGroup G>
Commitment<G> commit(const G& grp, const Opening& o) {
  return commit(grp, o.message, o.randomness);
}

/// Draws fresh randomness for the commitment.
template <CyclicGroup G>
std::pair<Commitment<G>, Opening> commit_random(const G& grp, const Scalar& message, Drbg& rng) {
  Opening o{message, grp.field().random(rng)};
  return {commit(grp, o), o};
}

template <CyclicGroup G>
bool verify_opening(const G& grp, const Commitment<G>& c, const Opening& o) {
  return commit(grp, o).element == c.element;
}

/// Homomorphic product: commits to the sum of messages with the sum of randomness.
template <CyclicGroup G>
Commitment<G> combine(const G& grp, const Commitment<G>& a, const Commitment<G>& b) {
  const auto id = grp.fingerprint();
  if (a.context != id || b.context != id) throw GroupError("commitments come from different group contexts");
  return {grp.mul(a.element, b.element), id};
}

template <CyclicGroup G>
Bytes serialize(const G& grp, const Commitment<G>& c) {
  return grp.serialize(c.element);
}

template <CyclicGroup G>
Commitment<G> deserialize_commitment(const G& grp, ByteView data) {
  return {grp.deserialize(data), grp.fingerprint()};
}

}  // namespace evote
