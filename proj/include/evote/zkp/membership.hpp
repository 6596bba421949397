#pragma once

#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "evote/commitment.hpp"
#include "evote/sig/bb_signature.hpp"

namespace evote {

/// Verifier side of the set-membership proof: y = g^x and A_i = g^{1/(x+i)} for
/// every i in the set. Built once and shared read-only across proof sessions.
template <PairingGroup G>
class VerifierSetup {
 public:
  using Element = typename G::Element;

  static VerifierSetup create(const G& grp, std::span<const Scalar> elements, Drbg& rng) {
    for (;;) {
      auto x = grp.field().random_nonzero(rng);
      if (auto s = try_build(grp, x, elements)) return std::move(*s);
    }
  }

  /// Fixed verifier secret; throws if some element equals -x.
  static VerifierSetup with_secret(const G& grp, const Scalar& x, std::span<const Scalar> elements) {
    auto s = try_build(grp, x, elements);
    if (!s) throw GroupError("set element collides with -x");
    return std::move(*s);
  }

  const Element& y() const { return y_; }
  const Scalar& secret() const { return x_; }
  std::size_t size() const { return table_.size(); }
  bool contains(const Scalar& i) const { return table_.contains(i); }
  const Element* signature(const Scalar& i) const {
    auto it = table_.find(i);
    return it == table_.end() ? nullptr : &it->second;
  }
  const std::unordered_map<Scalar, Element, ScalarHash>& table() const { return table_; }

 private:
  static std::optional<VerifierSetup> try_build(const G& grp, const Scalar& x, std::span<const Scalar> elements) {
    VerifierSetup s;
    s.x_ = x;
    s.y_ = exp_g(grp, x);
    s.table_.reserve(elements.size());
    for (const auto& i : elements) {
      if (s.table_.contains(i)) throw ProtocolError("duplicate element in membership set");
      if (grp.field().add(x, i).is_zero()) return std::nullopt;
      s.table_.emplace(i, bb_sign(grp, x, i));
    }
    return s;
  }

  Scalar x_;
  Element y_;
  std::unordered_map<Scalar, Element, ScalarHash> table_;
};

template <PairingGroup G>
struct FirstMove {
  typename G::Element V;
  typename G::Target a;
  typename G::Element D;
};

struct Responses {
  Scalar z_rho, z_v, z_r;
};

template <PairingGroup G>
struct MembershipTranscript {
  FirstMove<G> first;
  Scalar c;
  Responses z;
};

/// Single-session prover secrets. Wiped on destruction.
struct ProverState {
  Opening opening;
  Scalar v_blind, s, t, mm;

  ProverState() = default;
  ProverState(Opening o, Scalar v, Scalar s_, Scalar t_, Scalar m_)
      : opening(std::move(o)), v_blind(std::move(v)), s(std::move(s_)), t(std::move(t_)), mm(std::move(m_)) {}
  ProverState(ProverState&&) = default;
  ProverState& operator=(ProverState&&) = default;
  ~ProverState() {
    opening.message.wipe();
    opening.randomness.wipe();
    v_blind.wipe();
    s.wipe();
    t.wipe();
    mm.wipe();
  }
};

/// First move with explicit randomness; v must be nonzero.
template <PairingGroup G>
FirstMove<G> prove_first_with(const G& grp, const VerifierSetup<G>& setup, const ProverState& ps) {
  const auto* A = setup.signature(ps.opening.message);
  if (!A) throw ProtocolError("committed value is not in the membership set");
  if (ps.v_blind.is_zero()) throw ProtocolError("blinding exponent must be nonzero");
  auto V = grp.exp(*A, ps.v_blind);
  // a = e(V,g)^{-s} e(g,g)^t = e(V^{-s} g^t, g)
  auto a = grp.pair(exp2(grp, grp.inv(V), ps.s, grp.g(), ps.t), grp.g());
  auto D = exp2(grp, grp.g(), ps.s, grp.h(), ps.mm);
  return {V, a, D};
}

template <PairingGroup G>
std::pair<FirstMove<G>, ProverState> prove_first(const G& grp, const VerifierSetup<G>& setup, const Opening& opening,
                                                 Drbg& rng) {
  const auto& F = grp.field();
  ProverState ps(opening, F.random_nonzero(rng), F.random(rng), F.random(rng), F.random(rng));
  auto first = prove_first_with(grp, setup, ps);
  return {first, std::move(ps)};
}

inline Responses respond(const ScalarField& F, const ProverState& ps, const Scalar& c) {
  return {F.sub(ps.s, F.mul(ps.opening.message, c)), F.sub(ps.t, F.mul(ps.v_blind, c)),
          F.sub(ps.mm, F.mul(ps.opening.randomness, c))};
}

/// D = C^c h^{z_r} g^{z_rho} and a = e(V,y)^c e(V,g)^{-z_rho} e(g,g)^{z_v}.
template <PairingGroup G>
bool verify_transcript(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C, const FirstMove<G>& first,
                       const Scalar& c, const Responses& z) {
  if (first.V == grp.identity()) return false;
  auto D = grp.mul(grp.exp(C.element, c), exp2(grp, grp.h(), z.z_r, grp.g(), z.z_rho));
  if (!(D == first.D)) return false;
  auto lhs = grp.pair(first.V, exp2(grp, setup.y(), c, grp.inv(grp.g()), z.z_rho));
  return grp.tmul(lhs, grp.texp(grp.gt(), z.z_v)) == first.a;
}

/// Three moves with a uniformly random verifier challenge. A prover whose
/// committed value has no table entry cannot form a first move and is rejected.
template <PairingGroup G>
bool run_interactive(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C, const Opening& opening,
                     Drbg& rng) {
  if (!setup.contains(opening.message)) return false;
  auto [first, ps] = prove_first(grp, setup, opening, rng);
  auto c = grp.field().random(rng);
  return verify_transcript(grp, setup, C, first, c, respond(grp.field(), ps, c));
}

/// Fiat-Shamir challenge over the context string and every prior message.
template <PairingGroup G>
Scalar fs_challenge(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C, const FirstMove<G>& first,
                    ByteView context) {
  ByteWriter w;
  w.field(context).field(grp.serialize(C.element)).field(grp.serialize(setup.y()));
  w.field(grp.serialize(first.V)).field(grp.serialize_target(first.a)).field(grp.serialize(first.D));
  return grp.field().hash_to_scalar("evote/zkp/fs", w.bytes());
}

template <PairingGroup G>
MembershipTranscript<G> prove_noninteractive(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C,
                                             const Opening& opening, ByteView context, Drbg& rng) {
  auto [first, ps] = prove_first(grp, setup, opening, rng);
  auto c = fs_challenge(grp, setup, C, first, context);
  return {first, c, respond(grp.field(), ps, c)};
}

template <PairingGroup G>
bool verify_noninteractive(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C, ByteView context,
                           const MembershipTranscript<G>& t) {
  return fs_challenge(grp, setup, C, t.first, context) == t.c && verify_transcript(grp, setup, C, t.first, t.c, t.z);
}

/// Honest-verifier simulator: V = g^k for nonzero k, responses chosen freely,
/// a and D solved from the verification equations.
template <PairingGroup G>
MembershipTranscript<G> simulate_with(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C,
                                      const Scalar& c, const Scalar& k, const Responses& z) {
  if (k.is_zero()) throw ProtocolError("simulator exponent must be nonzero");
  auto V = exp_g(grp, k);
  auto D = grp.mul(grp.exp(C.element, c), exp2(grp, grp.h(), z.z_r, grp.g(), z.z_rho));
  auto a = grp.tmul(grp.pair(V, exp2(grp, setup.y(), c, grp.inv(grp.g()), z.z_rho)), grp.texp(grp.gt(), z.z_v));
  return {{V, a, D}, c, z};
}

template <PairingGroup G>
MembershipTranscript<G> simulate(const G& grp, const VerifierSetup<G>& setup, const Commitment<G>& C, const Scalar& c,
                                 Drbg& rng) {
  const auto& F = grp.field();
  auto k = F.random_nonzero(rng);
  return simulate_with(grp, setup, C, c, k, {F.random(rng), F.random(rng), F.random(rng)});
}

/// Special soundness: two accepting transcripts sharing a first move with distinct
/// challenges yield the opening (rho, r) of C.
inline Opening extract(const ScalarField& F, const Scalar& c1, const Responses& z1, const Scalar& c2,
                       const Responses& z2) {
  if (c1 == c2) throw ProtocolError("extraction needs distinct challenges");
  auto dc = F.sub(c2, c1);
  return {F.div(F.sub(z1.z_rho, z2.z_rho), dc), F.div(F.sub(z1.z_r, z2.z_r), dc)};
}

template <PairingGroup G>
Bytes encode(const G& grp, const MembershipTranscript<G>& t) {
  const auto& F = grp.field();
  ByteWriter w;
  w.field(grp.serialize(t.first.V)).field(grp.serialize_target(t.first.a)).field(grp.serialize(t.first.D));
  w.field(F.encode(t.c)).field(F.encode(t.z.z_rho)).field(F.encode(t.z.z_v)).field(F.encode(t.z.z_r));
  return w.take();
}

template <PairingGroup G>
MembershipTranscript<G> decode_transcript(const G& grp, ByteView data) {
  const auto& F = grp.field();
  ByteReader r(data);
  MembershipTranscript<G> t;
  t.first.V = grp.deserialize(r.field());
  t.first.a = grp.deserialize_target(r.field());
  t.first.D = grp.deserialize(r.field());
  t.c = F.decode(r.field());
  t.z.z_rho = F.decode(r.field());
  t.z.z_v = F.decode(r.field());
  t.z.z_r = F.decode(r.field());
  r.expect_done();
  return t;
}

}  // namespace evote
