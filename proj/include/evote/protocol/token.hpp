#pragma once

#include <optional>
#include <string>
#include <vector>

#include "evote/commitment.hpp"
#include "evote/protocol/keys.hpp"
#include "evote/shuffle.hpp"
#include "evote/sig/blind.hpp"
#include "evote/sig/schnorr.hpp"

namespace evote {

/// Part 1: stays with the voter as the token remnant.
template <CyclicGroup G>
struct TokenCommitments {
  Commitment<G> c_rid;
  Commitment<G> c_u;
  SchnorrSignature lambda;
};

/// Part 2: scanned by the EVM and then destroyed.
template <CyclicGroup G>
struct TokenSecrets {
  Scalar r_i, r_u, rid, u;
  std::uint32_t u_prime = 0;
  Bytes brid;
  Scalar b;
  typename G::Element p_ik;

  void wipe() {
    r_i.wipe();
    r_u.wipe();
    rid.wipe();
    u.wipe();
    b.wipe();
    u_prime = 0;
    secure_wipe(brid.data(), brid.size());
    brid.clear();
  }
};

/// Part 3: torn off at the PO desk.
struct TokenChit {
  Scalar r_p;
  Bytes brid;
};

template <CyclicGroup G>
struct Token {
  std::uint32_t booth = 0;
  TokenCommitments<G> main;
  TokenSecrets<G> secrets;
  TokenChit chit;
};

template <CyclicGroup G>
Bytes token_message(const G& grp, const Commitment<G>& c_rid, const Commitment<G>& c_u) {
  ByteWriter w;
  w.field("evote/token").field(grp.serialize(c_rid.element)).field(grp.serialize(c_u.element));
  return w.take();
}

/// One token for booth `booth`. A fixed rid may be supplied (used to model a
/// faulty authority); otherwise it is drawn uniformly.
template <CyclicGroup G>
Token<G> make_token(const G& grp, const KeyPair<G>& ea_sign, const typename G::Element& po_pub, std::uint32_t booth,
                    std::uint32_t m, Drbg& rng, std::optional<Scalar> fixed_rid = std::nullopt) {
  const auto& F = grp.field();
  Token<G> t;
  t.booth = booth;
  auto& s = t.secrets;
  s.rid = fixed_rid ? *fixed_rid : F.random(rng);
  s.r_i = F.random(rng);
  s.u = F.random(rng);
  s.r_u = F.random(rng);
  s.u_prime = mod_small(s.u.value(), m);
  auto eph = derive_ephemeral(grp, po_pub, rng);
  s.p_ik = eph.pub;
  s.b = F.random(rng);
  s.brid = blind(grp, s.rid, s.b, s.p_ik);
  t.chit = {eph.r_p, s.brid};
  t.main.c_rid = commit(grp, s.rid, s.r_i);
  t.main.c_u = commit(grp, s.u, s.r_u);
  t.main.lambda = schnorr_sign(grp, ea_sign, token_message(grp, t.main.c_rid, t.main.c_u), rng);
  return t;
}

template <CyclicGroup G>
struct TokenBatch {
  std::vector<std::vector<Token<G>>> per_booth;
  std::vector<typename G::Element> bb0;  // every p_ik, shuffled across booths
};

template <CyclicGroup G>
TokenBatch<G> generate_tokens(const G& grp, const AuthorityKeys<G>& keys, std::uint32_t per_booth, std::uint32_t m,
                              Drbg& rng) {
  if (m < 2) throw ProtocolError("at least two candidates are required");
  if (per_booth == 0) throw ProtocolError("token count must be positive");
  TokenBatch<G> batch;
  for (std::uint32_t k = 0; k < keys.po.size(); ++k) {
    auto& list = batch.per_booth.emplace_back();
    for (std::uint32_t i = 0; i < per_booth; ++i) {
      list.push_back(make_token(grp, keys.ea_sign, keys.po[k].pub, k, m, rng));
      batch.bb0.push_back(list.back().secrets.p_ik);
    }
  }
  fisher_yates(batch.bb0, rng);
  return batch;
}

struct AuditReport {
  std::uint32_t booth = 0;
  Bytes brid;  // identifies the audited token
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

template <CyclicGroup G>
AuditReport audit_token(const G& grp, const ElectionPublics<G>& pub, const Token<G>& t) {
  AuditReport r;
  const auto& s = t.secrets;
  r.booth = t.booth;
  r.brid = s.brid;
  if (!verify_opening(grp, t.main.c_rid, {s.rid, s.r_i})) r.failures.push_back("C_rid does not open to rid");
  if (!verify_opening(grp, t.main.c_u, {s.u, s.r_u})) r.failures.push_back("C_u does not open to u");
  if (mod_small(s.u.value(), pub.m) != s.u_prime) r.failures.push_back("u' is not u mod m");
  if (!schnorr_verify(grp, pub.ea_sign, token_message(grp, t.main.c_rid, t.main.c_u), t.main.lambda))
    r.failures.push_back("token signature invalid");
  if (blind(grp, s.rid, s.b, s.p_ik) != s.brid) r.failures.push_back("brid is not blind(rid, b, p_ik)");
  if (t.chit.brid != s.brid) r.failures.push_back("chit brid differs from secrets brid");
  if (t.booth >= pub.booths() || !(grp.exp(pub.po_ring[t.booth], t.chit.r_p) == s.p_ik))
    r.failures.push_back("ephemeral key does not match booth key");
  return r;
}

// Serialization: three length-prefixed segments in print order; u' is decimal text.

template <CyclicGroup G>
Bytes encode_commitments(const G& grp, const TokenCommitments<G>& p) {
  ByteWriter w;
  w.field(grp.serialize(p.c_rid.element)).field(grp.serialize(p.c_u.element)).field(encode(grp.field(), p.lambda));
  return w.take();
}

template <CyclicGroup G>
TokenCommitments<G> decode_commitments(const G& grp, ByteView data) {
  ByteReader r(data);
  TokenCommitments<G> p;
  p.c_rid = deserialize_commitment(grp, r.field());
  p.c_u = deserialize_commitment(grp, r.field());
  p.lambda = decode_schnorr(grp.field(), r.field());
  r.expect_done();
  return p;
}

template <CyclicGroup G>
Bytes encode_secrets(const G& grp, const TokenSecrets<G>& s) {
  const auto& F = grp.field();
  ByteWriter w;
  w.field(F.encode(s.r_i)).field(F.encode(s.r_u)).field(F.encode(s.rid)).field(F.encode(s.u));
  w.field(std::to_string(s.u_prime)).field(s.brid).field(F.encode(s.b)).field(grp.serialize(s.p_ik));
  return w.take();
}

template <CyclicGroup G>
TokenSecrets<G> decode_secrets(const G& grp, ByteView data) {
  const auto& F = grp.field();
  ByteReader r(data);
  TokenSecrets<G> s;
  s.r_i = F.decode(r.field());
  s.r_u = F.decode(r.field());
  s.rid = F.decode(r.field());
  s.u = F.decode(r.field());
  auto txt = r.field();
  if (txt.empty() || txt.size() > 9) throw FormatError("u' text has bad length");
  for (auto ch : txt) {
    if (ch < '0' || ch > '9') throw FormatError("u' text is not decimal");
    s.u_prime = s.u_prime * 10 + (ch - '0');
  }
  s.brid = r.field_copy();
  s.b = F.decode(r.field());
  s.p_ik = grp.deserialize(r.field());
  r.expect_done();
  return s;
}

inline Bytes encode_chit(const ScalarField& F, const TokenChit& c) {
  ByteWriter w;
  w.field(F.encode(c.r_p)).field(c.brid);
  return w.take();
}

inline TokenChit decode_chit(const ScalarField& F, ByteView data) {
  ByteReader r(data);
  TokenChit c{F.decode(r.field()), r.field_copy()};
  r.expect_done();
  return c;
}

}  // namespace evote
