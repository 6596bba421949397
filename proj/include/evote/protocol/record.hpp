#pragma once

#include "evote/protocol/token.hpp"
#include "evote/sig/hybrid.hpp"
#include "evote/sig/record_hash.hpp"

namespace evote {

/// P = (w, w', r_w). w is the integer u + v, not reduced mod q.
struct VoteProof {
  BigInt w;
  std::uint32_t w_prime = 0;
  Scalar r_w;

  friend bool operator==(const VoteProof&, const VoteProof&) = default;
};

inline Bytes encode(const ScalarField& F, const VoteProof& p) {
  ByteWriter w;
  w.field(to_bytes_be(p.w, F.width() + 1)).u32(p.w_prime).field(F.encode(p.r_w));
  return w.take();
}

inline VoteProof decode_vote_proof(const ScalarField& F, ByteView data) {
  ByteReader r(data);
  auto wb = r.field();
  if (wb.size() != F.width() + 1) throw FormatError("w has wrong width");
  VoteProof p{from_bytes_be(wb), r.u32(), F.decode(r.field())};
  r.expect_done();
  return p;
}

/// What the voter walks away with.
template <CyclicGroup G>
struct VoterReceipt {
  TokenCommitments<G> token;  // C_rid, C_u, lambda
  Commitment<G> c_rid;        // as printed by the EVM
  Commitment<G> c_v;
  VoteProof proof;
  RingSignature mu_receipt;
};

template <CyclicGroup G>
Bytes receipt_message(const G& grp, const Commitment<G>& c_rid, const Commitment<G>& c_v, const VoteProof& p) {
  ByteWriter w;
  w.field("evote/receipt").field(grp.serialize(c_rid.element)).field(grp.serialize(c_v.element));
  w.field(encode(grp.field(), p));
  return w.take();
}

inline Bytes record_hash_message(const Digest& h) {
  ByteWriter w;
  w.field("evote/record-hash").field(h);
  return w.take();
}

/// s_i: the secrets the EA needs to re-derive every commitment.
template <CyclicGroup G>
struct RecordSecrets {
  Scalar rid, u;
  std::uint32_t v = 0;
  Scalar b, r_i, r_u, r_v;
  typename G::Element p_ik;
};

/// m_i: the public material produced during the session.
template <CyclicGroup G>
struct RecordPublic {
  Commitment<G> c_rid, c_u, c_v;
  VoteProof proof;
  Digest h{};
  SchnorrSignature lambda;
  RingSignature mu_receipt;
  RingSignature mu_h;
};

template <CyclicGroup G>
struct SealedRecord {
  RecordSecrets<G> s;
  RecordPublic<G> m;
};

template <CyclicGroup G>
Bytes encode(const G& grp, const SealedRecord<G>& rec) {
  const auto& F = grp.field();
  ByteWriter w;
  const auto& s = rec.s;
  w.field(F.encode(s.rid)).field(F.encode(s.u)).u32(s.v).field(F.encode(s.b)).field(F.encode(s.r_i));
  w.field(F.encode(s.r_u)).field(F.encode(s.r_v)).field(grp.serialize(s.p_ik));
  const auto& m = rec.m;
  w.field(grp.serialize(m.c_rid.element)).field(grp.serialize(m.c_u.element)).field(grp.serialize(m.c_v.element));
  w.field(encode(F, m.proof)).field(m.h).field(encode(F, m.lambda)).field(encode(F, m.mu_receipt));
  w.field(encode(F, m.mu_h));
  return w.take();
}

template <CyclicGroup G>
SealedRecord<G> decode_sealed_record(const G& grp, ByteView data) {
  const auto& F = grp.field();
  ByteReader r(data);
  SealedRecord<G> rec;
  auto& s = rec.s;
  s.rid = F.decode(r.field());
  s.u = F.decode(r.field());
  s.v = r.u32();
  s.b = F.decode(r.field());
  s.r_i = F.decode(r.field());
  s.r_u = F.decode(r.field());
  s.r_v = F.decode(r.field());
  s.p_ik = grp.deserialize(r.field());
  auto& m = rec.m;
  m.c_rid = deserialize_commitment(grp, r.field());
  m.c_u = deserialize_commitment(grp, r.field());
  m.c_v = deserialize_commitment(grp, r.field());
  m.proof = decode_vote_proof(F, r.field());
  auto h = r.field();
  if (h.size() != m.h.size()) throw FormatError("record hash has wrong width");
  std::copy(h.begin(), h.end(), m.h.begin());
  m.lambda = decode_schnorr(F, r.field());
  m.mu_receipt = decode_ring(F, r.field());
  m.mu_h = decode_ring(F, r.field());
  r.expect_done();
  return rec;
}

/// An EVM ledger entry before booth closure.
template <CyclicGroup G>
struct BoothRecord {
  Bytes brid;
  Digest h{};
  HybridCiphertext<G> ct;
};

/// What leaves the booth: encrypted record, brid and the PO's blinded acknowledgment.
template <CyclicGroup G>
struct Envelope {
  HybridCiphertext<G> ct;
  Bytes brid;
  Bytes sigma_blinded;
};

struct Printout {
  Bytes brid;
  Bytes sigma_blinded;
};

template <CyclicGroup G>
struct Bb1Row {
  std::uint32_t booth = 0;
  Digest h_k{};
  std::uint32_t n_k = 0;
  RingSignature mu_hk;     // EVM ring
  RingSignature sigma_nk;  // PO ring
};

inline Bytes booth_hash_message(std::uint32_t booth, const Digest& h_k) {
  ByteWriter w;
  w.field("evote/booth-hash").u32(booth).field(h_k);
  return w.take();
}

inline Bytes booth_count_message(std::uint32_t booth, std::uint32_t n_k) {
  ByteWriter w;
  w.field("evote/booth-count").u32(booth).u32(n_k);
  return w.take();
}

}  // namespace evote
