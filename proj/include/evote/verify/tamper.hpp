#pragma once

#include <algorithm>
#include <string>
#include <vector>

#include "evote/sim/election.hpp"

namespace evote {

enum class Attack { inject_row, delete_row, alter_vote, replay_token, malform_token, collide_rid, drop_ack };

inline constexpr Attack kAllAttacks[] = {Attack::inject_row,    Attack::delete_row,  Attack::alter_vote, Attack::replay_token,
                                         Attack::malform_token, Attack::collide_rid, Attack::drop_ack};

inline std::string_view attack_name(Attack a) {
  switch (a) {
    case Attack::inject_row: return "inject_row";
    case Attack::delete_row: return "delete_row";
    case Attack::alter_vote: return "alter_vote";
    case Attack::replay_token: return "replay_token";
    case Attack::malform_token: return "malform_token";
    case Attack::collide_rid: return "collide_rid";
    case Attack::drop_ack: return "drop_ack";
  }
  return "?";
}

inline Attack parse_attack(std::string_view name) {
  for (auto a : kAllAttacks)
    if (attack_name(a) == name) return a;
  throw FormatError("unknown attack: " + std::string(name));
}

/// Post-publication attacks rewrite BB3; the rest are injected while polling.
inline bool is_board_attack(Attack a) {
  return a == Attack::inject_row || a == Attack::delete_row || a == Attack::alter_vote;
}

/// What a perfect detector must report for one applied attack.
struct TamperDelta {
  Attack attack = Attack::inject_row;
  std::optional<std::size_t> row;        // BB3 row touched (index before mutation)
  std::vector<Bytes> victim_commitments;  // serialized C_rid of voters whose individual check must not pass
  std::vector<sim::VoterId> victim_voters;
  std::vector<std::string> universal_flags;  // checks that must fail
  std::string expected;
};

namespace detail {
template <CyclicGroup G>
Bytes c_rid_of(const G& grp, const EaStore<G>& store, const Scalar& rid) {
  for (const auto& r : store.accepted)
    if (r.rec.s.rid == rid) return grp.serialize(r.rec.m.c_rid.element);
  throw ProtocolError("row has no matching stored record");
}

// Random rid at least m away from every existing rid.
template <CyclicGroup G>
Scalar fresh_rid(const G& grp, const std::vector<Bb3Row<G>>& bb3, std::uint32_t m, Drbg& rng) {
  for (;;) {
    auto rid = grp.field().random(rng);
    std::vector<BigInt> rids{rid.value()};
    for (const auto& r : bb3) rids.push_back(r.rid.value());
    bool clear = true;
    for (const auto& hit : find_rid_proximity(rids, grp.field().order(), m)) clear = clear && hit.a != 0 && hit.b != 0;
    if (clear) return rid;
  }
}
}  // namespace detail

/// Applies one post-publication attack to BB3 (and, as a careful adversary
/// would, to the published tally so the recount stays consistent).
template <PairingGroup G>
TamperDelta tamper_boards(const G& grp, const ElectionPublics<G>& pub, const EaStore<G>& store,
                          PublishedBoards<G>& boards, TallyResult& tally_out, Attack attack, Drbg& rng,
                          std::optional<std::size_t> row = std::nullopt) {
  if (!is_board_attack(attack)) throw ProtocolError("attack does not apply to published boards");
  const auto& F = grp.field();
  auto& bb3 = boards.bb3;
  TamperDelta d;
  d.attack = attack;
  if (attack != Attack::inject_row) {
    if (bb3.empty()) throw ProtocolError("attack needs a nonempty BB3");
    std::size_t j = row ? *row : static_cast<std::size_t>(rng.uniform(bb3.size()));
    if (j >= bb3.size()) throw ProtocolError("row out of range");
    d.row = j;
  }

  switch (attack) {
    case Attack::inject_row: {
      Bb3Row<G> fake;
      fake.rid = detail::fresh_rid(grp, bb3, pub.m, rng);
      fake.v = static_cast<std::uint32_t>(rng.uniform(pub.m));
      fake.rho = F.add(fake.rid, F.from_u64(fake.v));
      fake.h = record_hash(fake.rid, fake.v, pub.m);
      if (!bb3.empty()) {
        // signatures can only be copied from honest rows
        const auto& donor = bb3[rng.uniform(bb3.size())];
        fake.mu_h = donor.mu_h;
        fake.sigma_ack = donor.sigma_ack;
        fake.p_ik = donor.p_ik;
      } else {
        fake.mu_h = {F.random(rng), std::vector<Scalar>(pub.evm_ring.size(), F.zero())};
        fake.sigma_ack = grp.g();
        fake.p_ik = grp.g();
      }
      auto pos = std::lower_bound(bb3.begin(), bb3.end(), fake, [](const auto& a, const auto& b) { return a.rid < b.rid; });
      d.row = static_cast<std::size_t>(pos - bb3.begin());
      bb3.insert(pos, fake);
      d.universal_flags = {"group-signature", "ack-signature-vs-BB0", "xor-aggregate", "count"};
      d.expected = "injected row fails signature, aggregate and count checks";
      break;
    }
    case Attack::delete_row: {
      d.victim_commitments.push_back(detail::c_rid_of(grp, store, bb3[*d.row].rid));
      bb3.erase(bb3.begin() + static_cast<std::ptrdiff_t>(*d.row));
      d.universal_flags = {"xor-aggregate", "count"};
      d.expected = "victim's proof fails; aggregate and count checks fail";
      break;
    }
    case Attack::alter_vote: {
      auto& r = bb3[*d.row];
      d.victim_commitments.push_back(detail::c_rid_of(grp, store, r.rid));
      r.v = static_cast<std::uint32_t>((r.v + 1 + rng.uniform(pub.m - 1)) % pub.m);
      r.rho = F.add(r.rid, F.from_u64(r.v));
      if (rng.uniform(2) == 0) {
        r.h = record_hash(r.rid, r.v, pub.m);
        d.universal_flags = {"group-signature", "xor-aggregate"};
      } else {
        d.universal_flags = {"hash-recompute"};
      }
      d.expected = "victim's Phi proof fails";
      break;
    }
    default:
      break;
  }
  tally_out = tally(bb3, pub.m);
  return d;
}

/// Polling-phase attack: hooks for the simulator plus the expected outcome.
struct SessionAttackPlan {
  sim::SessionHooks hooks;
  std::optional<std::pair<sim::VoterId, sim::VoterId>> collide;
  TamperDelta delta;
};

/// Targets are drawn at random unless `first` pins the (first) victim; a pinned
/// replay or collision pairs it with a neighbouring voter, earlier one first.
inline SessionAttackPlan plan_session_attack(Attack attack, const sim::ElectionConfig& cfg, Drbg& rng,
                                             bool po_colludes = false,
                                             std::optional<sim::VoterId> first = std::nullopt) {
  if (is_board_attack(attack)) throw ProtocolError("attack applies to published boards, not polling");
  if (cfg.voters_per_booth < 2) throw ProtocolError("polling attacks need at least two voters per booth");
  SessionAttackPlan plan;
  auto& d = plan.delta;
  d.attack = attack;
  std::uint32_t k = static_cast<std::uint32_t>(rng.uniform(cfg.booths));
  auto i = static_cast<std::uint32_t>(rng.uniform(cfg.voters_per_booth - 1));
  auto j = i + 1 + static_cast<std::uint32_t>(rng.uniform(cfg.voters_per_booth - 1 - i));
  if (first) {
    if (first->booth >= cfg.booths || first->index >= cfg.voters_per_booth)
      throw ProtocolError("target voter does not exist");
    k = first->booth;
    i = first->index;
    j = i + 1;
    if (j == cfg.voters_per_booth) j = i--;
  }
  sim::VoterId a{k, i}, b{k, j};
  switch (attack) {
    case Attack::replay_token:
      plan.hooks.replay = {a, b};
      plan.hooks.po_colludes = po_colludes;
      d.victim_voters = {b};
      d.expected = po_colludes ? "duplicate acknowledgment discarded at booth close; replaying voter's proof fails"
                               : "PO desk refuses the replayed chit";
      break;
    case Attack::malform_token:
      plan.hooks.malform_token.insert(a);
      d.victim_voters = {a};
      d.expected = "EVM rejects the token before recording a vote";
      break;
    case Attack::collide_rid:
      plan.collide = {a, b};
      d.victim_voters = {a, b};
      d.universal_flags = {"xor-aggregate", "count"};
      d.expected = "authority flags both records; both voters' proofs fail";
      break;
    case Attack::drop_ack:
      plan.hooks.drop_po_ack.insert(a);
      d.victim_voters = {a};
      d.expected = "record discarded as unacknowledged at booth close; voter's proof fails";
      break;
    default:
      break;
  }
  return plan;
}

/// True when the attack left a trace: a failing universal check, a victim whose
/// session was refused, or a victim whose individual verification did not pass.
template <PairingGroup G>
bool attack_detected(const G& grp, const TamperDelta& d, const UniversalReport& report,
                     const sim::ElectionRun<G>& run, const std::map<sim::VoterId, IndividualResult>& individual) {
  if (!report.pass()) return true;
  for (const auto& id : d.victim_voters) {
    auto it = individual.find(id);
    if (it == individual.end() || it->second != IndividualResult::verified) return true;
  }
  for (const auto& c : d.victim_commitments) {
    for (const auto* v : run.voters()) {
      if (!v->receipt || grp.serialize(v->receipt->c_rid.element) != c) continue;
      auto it = individual.find(v->id);
      if (it == individual.end() || it->second != IndividualResult::verified) return true;
    }
  }
  return false;
}

}  // namespace evote
