#pragma once

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "evote/protocol/booth.hpp"

namespace evote {

/// The shuffler: a plain seeded permutation, contents untouched.
template <class T>
std::vector<T> shuffle(std::vector<T> items, Drbg& rng) {
  fisher_yates(items, rng);
  return items;
}

struct IngestFlag {
  enum class Kind {
    decrypt,
    malformed,
    brid_mismatch,
    unknown_ephemeral_key,
    reused_ephemeral_key,
    ack_signature,
    commitment,
    vote_proof,
    record_hash,
    token_signature,
    receipt_signature,
    hash_signature,
    vote_range,
    rid_collision,
    rid_proximity,
  };
  Kind kind;
  std::size_t envelope = 0;  // position in the ingested batch
  Bytes brid;
};

inline std::string_view flag_name(IngestFlag::Kind k) {
  using K = IngestFlag::Kind;
  switch (k) {
    case K::decrypt: return "decrypt";
    case K::malformed: return "malformed";
    case K::brid_mismatch: return "brid_mismatch";
    case K::unknown_ephemeral_key: return "unknown_ephemeral_key";
    case K::reused_ephemeral_key: return "reused_ephemeral_key";
    case K::ack_signature: return "ack_signature";
    case K::commitment: return "commitment";
    case K::vote_proof: return "vote_proof";
    case K::record_hash: return "record_hash";
    case K::token_signature: return "token_signature";
    case K::receipt_signature: return "receipt_signature";
    case K::hash_signature: return "hash_signature";
    case K::vote_range: return "vote_range";
    case K::rid_collision: return "rid_collision";
    case K::rid_proximity: return "rid_proximity";
  }
  return "?";
}

/// Pairs (i, j) of positions whose values lie within m of each other on the
/// circle Z_q. Equal values are reported as collisions.
struct ProximityHit {
  std::size_t a, b;
  bool equal;
};

inline std::vector<ProximityHit> find_rid_proximity(const std::vector<BigInt>& rids, const BigInt& q, std::uint32_t m) {
  std::vector<std::size_t> order(rids.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](auto x, auto y) { return rids[x] < rids[y]; });
  std::vector<ProximityHit> hits;
  const std::size_t n = order.size();
  if (n < 2) return hits;
  for (std::size_t i = 0; i < n; ++i) {
    auto lo = order[i], hi = order[(i + 1) % n];
    BigInt d = rids[hi] - rids[lo];
    if (i + 1 == n) d += q;
    if (d < m) hits.push_back({lo, hi, d == 0});
  }
  return hits;
}

/// An accepted record as held by the EA.
template <CyclicGroup G>
struct StoredRecord {
  SealedRecord<G> rec;
  Bytes brid;
  typename G::Element sigma_ack;  // unblinded
};

template <CyclicGroup G>
struct EaStore {
  std::vector<StoredRecord<G>> accepted;
  std::vector<IngestFlag> flags;
  std::size_t ingested = 0;
  std::unordered_map<std::string, std::size_t> by_combined;  // hex(C_rid * C_v) -> accepted index
  std::unordered_map<std::string, std::size_t> by_c_rid;

  void reindex(const G& grp) {
    by_combined.clear();
    by_c_rid.clear();
    for (std::size_t i = 0; i < accepted.size(); ++i) {
      const auto& m = accepted[i].rec.m;
      by_combined[to_hex(grp.serialize(grp.mul(m.c_rid.element, m.c_v.element)))] = i;
      by_c_rid[to_hex(grp.serialize(m.c_rid.element))] = i;
    }
  }
};

namespace detail {
template <PairingGroup G>
std::optional<IngestFlag::Kind> check_record(const G& grp, const ElectionPublics<G>& pub, const SealedRecord<G>& rec,
                                             ByteView brid, ByteView sigma_blinded,
                                             const std::set<Bytes>& bb0, typename G::Element& sigma_out) {
  using K = IngestFlag::Kind;
  const auto& F = grp.field();
  const auto& s = rec.s;
  const auto& m = rec.m;
  if (s.v >= pub.m) return K::vote_range;
  if (blind(grp, s.rid, s.b, s.p_ik) != Bytes(brid.begin(), brid.end())) return K::brid_mismatch;
  if (!bb0.contains(grp.serialize(s.p_ik))) return K::unknown_ephemeral_key;
  try {
    sigma_out = unblind(grp, sigma_blinded, s.b, s.p_ik);
  } catch (const FormatError&) {
    return K::ack_signature;
  }
  if (!bverify(grp, s.p_ik, s.rid, sigma_out)) return K::ack_signature;
  if (!verify_opening(grp, m.c_rid, {s.rid, s.r_i}) || !verify_opening(grp, m.c_u, {s.u, s.r_u}) ||
      !verify_opening(grp, m.c_v, {F.from_u64(s.v), s.r_v}))
    return K::commitment;
  const auto& p = m.proof;
  if (p.w != s.u.value() + s.v || p.w_prime != mod_small(p.w, pub.m) || !(p.r_w == F.add(s.r_u, s.r_v)) ||
      !(combine(grp, m.c_u, m.c_v) == commit(grp, F.from(p.w), p.r_w)))
    return K::vote_proof;
  if (m.h != record_hash(s.rid, s.v, pub.m)) return K::record_hash;
  if (!schnorr_verify(grp, pub.ea_sign, token_message(grp, m.c_rid, m.c_u), m.lambda)) return K::token_signature;
  if (!ring_verify(grp, pub.evm_ring, receipt_message(grp, m.c_rid, m.c_v, p), m.mu_receipt))
    return K::receipt_signature;
  if (!ring_verify(grp, pub.evm_ring, record_hash_message(m.h), m.mu_h)) return K::hash_signature;
  return std::nullopt;
}
}  // namespace detail

/// Decrypts and re-verifies every envelope. Failures are flagged and kept out of
/// the accepted set; records whose rids collide or lie within m are flagged too.
template <PairingGroup G>
EaStore<G> ea_ingest(const G& grp, const ElectionPublics<G>& pub, const Scalar& ea_enc_secret,
                     const std::vector<typename G::Element>& bb0, const std::vector<Envelope<G>>& envelopes) {
  using K = IngestFlag::Kind;
  EaStore<G> store;
  store.ingested = envelopes.size();
  std::set<Bytes> bb0_keys;
  for (const auto& p : bb0) bb0_keys.insert(grp.serialize(p));

  struct Candidate {
    std::size_t envelope;
    StoredRecord<G> rec;
  };
  std::vector<Candidate> ok;
  for (std::size_t i = 0; i < envelopes.size(); ++i) {
    const auto& env = envelopes[i];
    Bytes plain;
    try {
      plain = hybrid_decrypt(grp, ea_enc_secret, env.ct);
    } catch (const Error&) {
      store.flags.push_back({K::decrypt, i, env.brid});
      continue;
    }
    SealedRecord<G> rec;
    try {
      rec = decode_sealed_record(grp, plain);
    } catch (const Error&) {
      store.flags.push_back({K::malformed, i, env.brid});
      continue;
    }
    secure_wipe(plain.data(), plain.size());
    typename G::Element sigma;
    if (auto bad = detail::check_record(grp, pub, rec, env.brid, env.sigma_blinded, bb0_keys, sigma)) {
      store.flags.push_back({*bad, i, env.brid});
      continue;
    }
    ok.push_back({i, {std::move(rec), env.brid, sigma}});
  }

  // Each ephemeral key signs exactly one acknowledgment.
  std::map<Bytes, std::vector<std::size_t>> by_key;
  for (std::size_t j = 0; j < ok.size(); ++j) by_key[grp.serialize(ok[j].rec.rec.s.p_ik)].push_back(j);
  std::vector<bool> drop(ok.size(), false);
  for (const auto& [_, idx] : by_key) {
    if (idx.size() < 2) continue;
    for (auto j : idx) {
      drop[j] = true;
      store.flags.push_back({K::reused_ephemeral_key, ok[j].envelope, ok[j].rec.brid});
    }
  }

  std::vector<BigInt> rids;
  std::vector<std::size_t> pos;
  for (std::size_t j = 0; j < ok.size(); ++j) {
    if (drop[j]) continue;
    rids.push_back(ok[j].rec.rec.s.rid.value());
    pos.push_back(j);
  }
  std::set<std::size_t> near;
  for (const auto& hit : find_rid_proximity(rids, grp.field().order(), pub.m)) {
    for (auto x : {hit.a, hit.b}) {
      if (!near.insert(pos[x]).second) continue;
      store.flags.push_back({hit.equal ? K::rid_collision : K::rid_proximity, ok[pos[x]].envelope, ok[pos[x]].rec.brid});
    }
  }
  for (auto j : near) drop[j] = true;

  for (std::size_t j = 0; j < ok.size(); ++j)
    if (!drop[j]) store.accepted.push_back(std::move(ok[j].rec));
  std::sort(store.flags.begin(), store.flags.end(), [](const auto& a, const auto& b) { return a.envelope < b.envelope; });
  store.reindex(grp);
  return store;
}

}  // namespace evote
