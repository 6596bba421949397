#pragma once

#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evote/protocol/record.hpp"

namespace evote {

/// Presiding officer's desk for one booth.
template <CyclicGroup G>
class PoDesk {
 public:
  PoDesk(const G& grp, std::uint32_t booth, Scalar po_secret) : grp_(&grp), booth_(booth), x_k_(std::move(po_secret)) {}
  PoDesk(const PoDesk&) = delete;
  PoDesk& operator=(const PoDesk&) = delete;
  PoDesk(PoDesk&&) = default;
  ~PoDesk() {
    x_k_.wipe();
    for (auto& [_, slot] : slots_) slot.sk.wipe();
  }

  std::uint32_t booth() const { return booth_; }

  /// Audited tokens can never be used for voting.
  void mark_audited(ByteView brid) { seen_.insert(key(brid)); }

  /// Tears off the chit. Rejects tokens that were already drawn or audited.
  void accept_chit(const TokenChit& chit, bool identity_verified) {
    if (!identity_verified) throw ProtocolError("voter identity not verified");
    auto id = key(chit.brid);
    if (!seen_.insert(id).second) throw ProtocolError("token is not fresh");
    slots_.emplace(id, Slot{ephemeral_secret(grp_->field(), x_k_, chit.r_p), chit.brid, false});
  }

  /// Voter's acknowledgment arriving over the PO channel: sign the blinded rid once.
  void acknowledge(ByteView brid) {
    auto it = slots_.find(key(brid));
    if (it == slots_.end()) throw ProtocolError("no open slot for this token");
    auto& slot = it->second;
    if (slot.signed_) throw ProtocolError("token already acknowledged");
    printouts_.push_back({slot.brid, bsign(*grp_, slot.sk, slot.brid)});
    slot.signed_ = true;
    slot.sk.wipe();
  }

  bool has_slot(ByteView brid) const { return slots_.contains(key(brid)); }
  const std::vector<Printout>& printouts() const { return printouts_; }

 private:
  struct Slot {
    Scalar sk;
    Bytes brid;
    bool signed_;
  };
  static std::string key(ByteView brid) { return to_hex(brid); }

  const G* grp_;
  std::uint32_t booth_;
  Scalar x_k_;
  std::set<std::string> seen_;
  std::map<std::string, Slot> slots_;
  std::vector<Printout> printouts_;
};

/// Voting machine for one booth. A session walks ready -> vote_committed ->
/// token_scanned -> ready; the vote commitment is always emitted before any
/// token data is read.
template <PairingGroup G>
class Evm {
 public:
  enum class Phase { ready, vote_committed, token_scanned };

  Evm(const G& grp, const ElectionPublics<G>& pub, std::uint32_t booth, Scalar evm_secret, Drbg rng)
      : grp_(&grp), pub_(&pub), booth_(booth), e_k_(std::move(evm_secret)), rng_(std::move(rng)) {
    if (booth >= pub.evm_ring.size() || !(exp_g(grp, e_k_) == pub.evm_ring[booth]))
      throw ProtocolError("EVM key does not match the published ring");
  }
  Evm(const Evm&) = delete;
  Evm& operator=(const Evm&) = delete;
  ~Evm() {
    reset();
    e_k_.wipe();
  }

  Phase phase() const { return phase_; }
  std::uint32_t booth() const { return booth_; }
  bool holds_token_secrets() const { return session_.secrets.has_value(); }
  std::uint32_t declined() const { return declined_; }
  const std::vector<BoothRecord<G>>& records() const { return records_; }

  /// Step 1: voter presses a candidate; C_v is printed immediately.
  Commitment<G> commit_vote(std::uint32_t v) {
    if (phase_ != Phase::ready) throw ProtocolError("session already in progress");
    if (v >= pub_->m) throw ProtocolError("vote out of range");
    session_.v = v;
    session_.r_v = grp_->field().random(rng_);
    session_.c_v = commit(*grp_, grp_->field().from_u64(v), session_.r_v);
    phase_ = Phase::vote_committed;
    return session_.c_v;
  }

  /// Step 2: scan the token. Takes ownership of the secrets part (the caller's
  /// copy is emptied) and returns w' for display. Any check failure aborts the
  /// session with nothing recorded.
  std::uint32_t scan_token(const TokenCommitments<G>& main, std::optional<TokenSecrets<G>>& secrets) {
    if (phase_ != Phase::vote_committed) throw ProtocolError("token scanned before the vote commitment was printed");
    if (!secrets) throw ProtocolError("token secrets missing");
    session_.secrets = std::move(secrets);
    secrets.reset();
    session_.main = main;
    auto& s = *session_.secrets;
    const auto& F = grp_->field();
    try {
      if (!schnorr_verify(*grp_, pub_->ea_sign, token_message(*grp_, main.c_rid, main.c_u), main.lambda))
        throw ProtocolError("token signature invalid");
      if (!verify_opening(*grp_, main.c_rid, {s.rid, s.r_i})) throw ProtocolError("C_rid does not open");
      if (!verify_opening(*grp_, main.c_u, {s.u, s.r_u})) throw ProtocolError("C_u does not open");
      if (mod_small(s.u.value(), pub_->m) != s.u_prime) throw ProtocolError("u' inconsistent with u");
      if (blind(*grp_, s.rid, s.b, s.p_ik) != s.brid) throw ProtocolError("brid inconsistent with token");
    } catch (...) {
      reset();
      throw;
    }
    auto& p = session_.proof;
    p.w = s.u.value() + session_.v;
    p.w_prime = mod_small(p.w, pub_->m);
    p.r_w = F.add(s.r_u, session_.r_v);
    phase_ = Phase::token_scanned;
    return p.w_prime;
  }

  struct Completed {
    VoterReceipt<G> receipt;
    Bytes brid;  // what the voter's PO-channel acknowledgment refers to
  };

  /// Step 3a: voter accepts w'. Signs the receipt, seals the record and destroys the token secrets.
  Completed confirm() {
    if (phase_ != Phase::token_scanned) throw ProtocolError("nothing to confirm");
    auto& s = *session_.secrets;
    const auto& main = session_.main;

    SealedRecord<G> rec;
    rec.s = {s.rid, s.u, session_.v, s.b, s.r_i, s.r_u, session_.r_v, s.p_ik};
    auto& m = rec.m;
    m.c_rid = main.c_rid;
    m.c_u = main.c_u;
    m.c_v = session_.c_v;
    m.proof = session_.proof;
    m.h = record_hash(s.rid, session_.v, pub_->m);
    m.lambda = main.lambda;
    m.mu_receipt = ring_sign(*grp_, pub_->evm_ring, booth_, e_k_, receipt_message(*grp_, m.c_rid, m.c_v, m.proof), rng_);
    m.mu_h = ring_sign(*grp_, pub_->evm_ring, booth_, e_k_, record_hash_message(m.h), rng_);

    auto plain = encode(*grp_, rec);
    records_.push_back({s.brid, m.h, hybrid_encrypt(*grp_, pub_->ea_enc, plain, rng_)});
    secure_wipe(plain.data(), plain.size());
    for (auto* x : {&rec.s.rid, &rec.s.u, &rec.s.b, &rec.s.r_i, &rec.s.r_u, &rec.s.r_v}) x->wipe();

    Completed out{{main, m.c_rid, m.c_v, m.proof, m.mu_receipt}, s.brid};
    reset();
    return out;
  }

  /// Step 3b: voter rejects w'. Nothing is recorded; the abort is counted for manual procedure.
  void decline() {
    if (phase_ != Phase::token_scanned) throw ProtocolError("nothing to decline");
    ++declined_;
    reset();
  }

 private:
  struct Session {
    std::uint32_t v = 0;
    Scalar r_v;
    Commitment<G> c_v;
    TokenCommitments<G> main;
    std::optional<TokenSecrets<G>> secrets;
    VoteProof proof;
  };

  void reset() {
    if (session_.secrets) session_.secrets->wipe();
    session_.secrets.reset();
    session_.r_v.wipe();
    session_.proof.r_w.wipe();
    session_.proof.w = 0;
    session_.v = 0;
    phase_ = Phase::ready;
  }

  const G* grp_;
  const ElectionPublics<G>* pub_;
  std::uint32_t booth_;
  Scalar e_k_;
  Drbg rng_;
  Phase phase_ = Phase::ready;
  Session session_;
  std::vector<BoothRecord<G>> records_;
  std::uint32_t declined_ = 0;
};

struct BoothFlag {
  enum class Kind { unacknowledged, unmatched_ack, duplicate_ack };
  Kind kind;
  Bytes brid;
};

inline std::string_view flag_name(BoothFlag::Kind k) {
  switch (k) {
    case BoothFlag::Kind::unacknowledged:
      return "unacknowledged";
    case BoothFlag::Kind::unmatched_ack:
      return "unmatched_ack";
    case BoothFlag::Kind::duplicate_ack:
      return "duplicate_ack";
  }
  return "?";
}

template <CyclicGroup G>
struct BoothClosure {
  std::vector<Envelope<G>> envelopes;  // acknowledged records only
  std::vector<BoothFlag> flags;
  Bb1Row<G> row;
};

/// Post-polling: pair each record with the PO's acknowledgment, discard (and
/// flag) the rest, then aggregate and sign H_k and N_k.
template <CyclicGroup G>
BoothClosure<G> close_booth(const G& grp, const ElectionPublics<G>& pub, std::uint32_t booth, const Scalar& evm_secret,
                            const Scalar& po_secret, const std::vector<BoothRecord<G>>& records,
                            const std::vector<Printout>& printouts, Drbg& rng) {
  BoothClosure<G> out;
  std::map<std::string, const Printout*> acks;
  for (const auto& p : printouts) {
    if (!acks.emplace(to_hex(p.brid), &p).second) out.flags.push_back({BoothFlag::Kind::duplicate_ack, p.brid});
  }
  std::set<std::string> used;
  std::vector<Digest> hashes;
  for (const auto& rec : records) {
    auto id = to_hex(rec.brid);
    auto it = acks.find(id);
    if (it == acks.end() || used.contains(id)) {
      out.flags.push_back({BoothFlag::Kind::unacknowledged, rec.brid});
      continue;
    }
    used.insert(id);
    out.envelopes.push_back({rec.ct, rec.brid, it->second->sigma_blinded});
    hashes.push_back(rec.h);
  }
  for (const auto& [id, p] : acks)
    if (!used.contains(id)) out.flags.push_back({BoothFlag::Kind::unmatched_ack, p->brid});

  auto& row = out.row;
  row.booth = booth;
  row.h_k = xor_fold(hashes);
  row.n_k = static_cast<std::uint32_t>(hashes.size());
  row.mu_hk = ring_sign(grp, pub.evm_ring, booth, evm_secret, booth_hash_message(booth, row.h_k), rng);
  row.sigma_nk = ring_sign(grp, pub.po_ring, booth, po_secret, booth_count_message(booth, row.n_k), rng);
  return out;
}

}  // namespace evote
