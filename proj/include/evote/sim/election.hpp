#pragma once

#include <functional>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "evote/group/setup.hpp"
#include "evote/verify/individual.hpp"
#include "evote/verify/receipt.hpp"
#include "evote/verify/universal.hpp"

namespace evote::sim {

struct ElectionConfig {
  std::uint32_t booths = 4;
  std::uint32_t voters_per_booth = 50;
  std::uint32_t m = 5;
  std::uint32_t token_multiple = 2;  // tokens per booth = multiple * voters + audited
  std::uint32_t audit_per_booth = 2;
  Profile profile = Profile::test;
  std::string seed = "evote";
  bool publish_bb2 = true;
  std::vector<double> vote_weights;  // relative weight per candidate; empty means uniform

  std::uint32_t tokens_per_booth() const { return token_multiple * voters_per_booth + audit_per_booth; }
  void validate() const {
    if (m < 2) throw ProtocolError("m must be at least 2");
    if (booths < 1) throw ProtocolError("at least one booth is required");
    if (token_multiple < 1) throw ProtocolError("token multiple must be at least 1");
    if (!vote_weights.empty()) {
      if (vote_weights.size() != m) throw ProtocolError("vote_weights needs one entry per candidate");
      double sum = 0;
      for (double w : vote_weights) {
        if (!(w >= 0)) throw ProtocolError("vote weights must be nonnegative");
        sum += w;
      }
      if (!(sum > 0)) throw ProtocolError("vote weights must not all be zero");
    }
  }
};

struct VoterId {
  std::uint32_t booth = 0;
  std::uint32_t index = 0;
  friend auto operator<=>(const VoterId&, const VoterId&) = default;
};

/// Picks each simulated voter's candidate. Ground truth stays outside the protocol path.
using VoteChooser = std::function<std::uint32_t(VoterId, Drbg&)>;

inline VoteChooser uniform_votes(std::uint32_t m) {
  return [m](VoterId, Drbg& rng) { return static_cast<std::uint32_t>(rng.uniform(m)); };
}

inline VoteChooser weighted_votes(std::vector<double> weights) {
  double total = 0;
  for (double w : weights) total += w;
  return [weights = std::move(weights), total](VoterId, Drbg& rng) {
    double x = rng.uniform_real() * total;
    std::uint32_t last = 0;
    for (std::uint32_t i = 0; i < weights.size(); ++i) {
      if (weights[i] <= 0) continue;
      last = i;
      if (x < weights[i]) return i;
      x -= weights[i];
    }
    return last;
  };
}

inline VoteChooser default_chooser(const ElectionConfig& cfg) {
  return cfg.vote_weights.empty() ? uniform_votes(cfg.m) : weighted_votes(cfg.vote_weights);
}

/// Deviations injected into the polling phase.
struct SessionHooks {
  std::set<VoterId> drop_po_ack;   // voter's acknowledgment never reaches the PO
  std::set<VoterId> decline;       // voter rejects the displayed w'
  std::set<VoterId> malform_token; // the drawn token's C_u is replaced
  std::optional<std::pair<VoterId, VoterId>> replay;   // second voter reuses a copy of the first voter's token
  bool po_colludes = false;                            // PO signs the replayed chit anyway
  std::map<VoterId, std::uint32_t> forced_draw;        // voter -> token index in the booth's batch
};

enum class SessionStatus { cast, rejected_by_po, rejected_by_evm, declined };

inline std::string_view status_name(SessionStatus s) {
  switch (s) {
    case SessionStatus::cast:
      return "cast";
    case SessionStatus::rejected_by_po:
      return "rejected_by_po";
    case SessionStatus::rejected_by_evm:
      return "rejected_by_evm";
    case SessionStatus::declined:
      return "declined";
  }
  return "?";
}

template <CyclicGroup G>
struct VoterOutcome {
  VoterId id;
  std::uint32_t vote = 0;
  SessionStatus status = SessionStatus::cast;
  std::optional<VoterReceipt<G>> receipt;
};

template <CyclicGroup G>
struct BoothRun {
  std::vector<BoothRecord<G>> records;
  std::vector<Printout> printouts;
  std::vector<VoterOutcome<G>> voters;
};

struct StageRng {
  Drbg master;
  explicit StageRng(std::string_view seed) : master(seed) {}
  Drbg stage(std::string_view name) const { return master.derive(name); }
  Drbg booth(std::string_view name, std::uint32_t k) const {
    return master.derive(std::string(name) + "/" + std::to_string(k));
  }
};

/// Audits `count` random tokens per booth. Returns the audited brids per booth.
template <CyclicGroup G>
std::vector<std::set<Bytes>> audit_tokens(const G& grp, const ElectionPublics<G>& pub, const TokenBatch<G>& batch,
                                          std::uint32_t count, Drbg& rng, std::vector<AuditReport>* reports = nullptr) {
  std::vector<std::set<Bytes>> audited(batch.per_booth.size());
  for (std::size_t k = 0; k < batch.per_booth.size(); ++k) {
    const auto& tokens = batch.per_booth[k];
    std::vector<std::size_t> idx(tokens.size());
    for (std::size_t i = 0; i < idx.size(); ++i) idx[i] = i;
    fisher_yates(idx, rng);
    for (std::size_t j = 0; j < std::min<std::size_t>(count, idx.size()); ++j) {
      const auto& t = tokens[idx[j]];
      auto rep = audit_token(grp, pub, t);
      if (reports) reports->push_back(rep);
      audited[k].insert(t.secrets.brid);
    }
  }
  return audited;
}

/// One booth's polling day: each voter draws a fresh token, passes the PO desk,
/// votes at the EVM and acknowledges over both channels.
template <PairingGroup G>
BoothRun<G> run_booth(const G& grp, const ElectionPublics<G>& pub, const AuthorityKeys<G>& keys, std::uint32_t k,
                      const std::vector<Token<G>>& tokens, const std::set<Bytes>& audited,
                      const ElectionConfig& cfg, const VoteChooser& choose, const SessionHooks& hooks,
                      Drbg rng, Drbg vote_rng) {
  PoDesk<G> po(grp, k, keys.po[k].secret);
  Evm<G> evm(grp, pub, k, keys.evm[k].secret, rng.derive("evm"));
  std::vector<const Token<G>*> pool;
  for (const auto& t : tokens) {
    if (audited.contains(t.secrets.brid)) {
      po.mark_audited(t.secrets.brid);
    } else {
      pool.push_back(&t);
    }
  }
  fisher_yates(pool, rng);
  std::set<const Token<G>*> reserved;
  for (const auto& [id, idx] : hooks.forced_draw)
    if (id.booth == k) reserved.insert(&tokens.at(idx));
  std::erase_if(pool, [&](const Token<G>* t) { return reserved.contains(t); });

  BoothRun<G> run;
  std::map<VoterId, Token<G>> drawn;
  for (std::uint32_t i = 0; i < cfg.voters_per_booth; ++i) {
    VoterId id{k, i};
    VoterOutcome<G> out{id, choose(id, vote_rng), SessionStatus::cast, std::nullopt};

    Token<G> token;
    bool replayed = hooks.replay && hooks.replay->second == id;
    if (replayed) {
      token = drawn.at(hooks.replay->first);
    } else if (auto f = hooks.forced_draw.find(id); f != hooks.forced_draw.end()) {
      token = tokens.at(f->second);
    } else {
      if (pool.empty()) throw ProtocolError("booth ran out of tokens");
      token = *pool.back();
      pool.pop_back();
    }
    if (hooks.malform_token.contains(id)) token.main.c_u = commit(grp, grp.field().random(rng), grp.field().random(rng));
    drawn[id] = token;

    try {
      po.accept_chit(token.chit, true);
    } catch (const ProtocolError&) {
      if (!(replayed && hooks.po_colludes)) {
        out.status = SessionStatus::rejected_by_po;
        run.voters.push_back(std::move(out));
        continue;
      }
    }

    evm.commit_vote(out.vote);
    std::optional<TokenSecrets<G>> secrets = token.secrets;
    std::uint32_t shown = 0;
    try {
      shown = evm.scan_token(token.main, secrets);
    } catch (const ProtocolError&) {
      out.status = SessionStatus::rejected_by_evm;
      run.voters.push_back(std::move(out));
      continue;
    }
    bool agrees = shown == (token.secrets.u_prime + out.vote) % pub.m;
    if (!agrees || hooks.decline.contains(id)) {
      evm.decline();
      out.status = SessionStatus::declined;
      run.voters.push_back(std::move(out));
      continue;
    }
    auto done = evm.confirm();
    out.receipt = std::move(done.receipt);
    if (!hooks.drop_po_ack.contains(id)) {
      if (replayed && hooks.po_colludes) {
        // a colluding officer signs the same blinded rid a second time
        auto sk = ephemeral_secret(grp.field(), keys.po[k].secret, token.chit.r_p);
        run.printouts.push_back({done.brid, bsign(grp, sk, done.brid)});
      } else {
        po.acknowledge(done.brid);
      }
    }
    run.voters.push_back(std::move(out));
  }
  run.records = evm.records();
  auto honest = po.printouts();
  run.printouts.insert(run.printouts.begin(), honest.begin(), honest.end());
  return run;
}

/// Models a faulty authority: voter b is handed a validly signed token whose rid
/// is one more than voter a's. Both tokens are pinned to those voters, and BB0
/// lists the replacement's ephemeral key in place of the token it displaced.
template <CyclicGroup G>
void plant_rid_collision(const G& grp, const AuthorityKeys<G>& keys, std::uint32_t m, TokenBatch<G>& batch,
                         const std::vector<std::set<Bytes>>& audited, VoterId a, VoterId b, SessionHooks& hooks,
                         Drbg& rng) {
  auto pick = [&](std::uint32_t booth, std::optional<std::uint32_t> avoid) {
    const auto& list = batch.per_booth.at(booth);
    for (std::uint32_t i = 0; i < list.size(); ++i) {
      bool taken = avoid && *avoid == i;
      for (const auto& [id, idx] : hooks.forced_draw) taken = taken || (id.booth == booth && idx == i);
      if (!taken && !audited.at(booth).contains(list[i].secrets.brid)) return i;
    }
    throw ProtocolError("no unaudited token left to pin");
  };
  auto ia = pick(a.booth, std::nullopt);
  auto ib = pick(b.booth, a.booth == b.booth ? std::optional(ia) : std::nullopt);
  const auto& F = grp.field();
  auto& slot = batch.per_booth[b.booth][ib];
  auto old_key = slot.secrets.p_ik;
  auto rid = F.add(batch.per_booth[a.booth][ia].secrets.rid, F.one());
  slot = make_token(grp, keys.ea_sign, keys.po[b.booth].pub, b.booth, m, rng, rid);
  for (auto& p : batch.bb0)
    if (p == old_key) p = slot.secrets.p_ik;
  hooks.forced_draw[a] = ia;
  hooks.forced_draw[b] = ib;
}

template <PairingGroup G>
struct ElectionRun {
  ElectionConfig cfg;
  AuthorityKeys<G> keys;
  ElectionPublics<G> pub;
  TokenBatch<G> batch;
  std::vector<std::set<Bytes>> audited;
  std::vector<AuditReport> audit_reports;
  std::vector<BoothRun<G>> booths;
  std::vector<BoothClosure<G>> closures;
  std::vector<Bb1Row<G>> bb1;
  std::vector<Envelope<G>> envelopes;  // shuffled
  EaStore<G> store;
  PublishedBoards<G> boards;
  TallyResult published_tally;

  std::vector<const VoterOutcome<G>*> voters() const {
    std::vector<const VoterOutcome<G>*> out;
    for (const auto& b : booths)
      for (const auto& v : b.voters) out.push_back(&v);
    return out;
  }

  /// Simulator bookkeeping: every vote that ended with a receipt.
  TallyResult ground_truth() const {
    std::vector<std::uint32_t> votes;
    for (const auto* v : voters())
      if (v->status == SessionStatus::cast) votes.push_back(v->vote);
    return tally_votes(votes, cfg.m);
  }

  UniversalInputs<G> universal_inputs() const {
    return {batch.bb0, bb1, cfg.publish_bb2 ? &boards.bb2 : nullptr, boards.bb3, &published_tally};
  }
};

template <PairingGroup G>
void collect_and_publish(const G& grp, ElectionRun<G>& run, const StageRng& rngs) {
  run.closures.clear();
  run.bb1.clear();
  std::vector<Envelope<G>> all;
  for (std::uint32_t k = 0; k < run.cfg.booths; ++k) {
    auto rng = rngs.booth("close", k);
    const auto& b = run.booths[k];
    run.closures.push_back(close_booth(grp, run.pub, k, run.keys.evm[k].secret, run.keys.po[k].secret, b.records,
                                       b.printouts, rng));
    run.bb1.push_back(run.closures.back().row);
    for (const auto& e : run.closures.back().envelopes) all.push_back(e);
  }
  auto shuffle_rng = rngs.stage("shuffle");
  run.envelopes = shuffle(std::move(all), shuffle_rng);
  run.store = ea_ingest(grp, run.pub, run.keys.ea_enc.secret, run.batch.bb0, run.envelopes);
  run.boards = publish_boards(grp, run.store);
  if (!run.cfg.publish_bb2) run.boards.bb2.clear();
  run.published_tally = tally(run.boards.bb3, run.cfg.m);
}

/// Whole election in memory, deterministic in cfg.seed.
template <PairingGroup G>
ElectionRun<G> run_election(const G& grp, const ElectionConfig& cfg, const VoteChooser& choose = {},
                            const SessionHooks& hooks = {},
                            std::optional<std::pair<VoterId, VoterId>> collide = std::nullopt) {
  cfg.validate();
  StageRng rngs(cfg.seed);
  ElectionRun<G> run;
  run.cfg = cfg;
  auto setup_rng = rngs.stage("setup");
  run.keys = generate_authority(grp, cfg.booths, setup_rng);
  run.pub = run.keys.publics(cfg.m);
  auto token_rng = rngs.stage("tokens");
  run.batch = generate_tokens(grp, run.keys, cfg.tokens_per_booth(), cfg.m, token_rng);
  auto audit_rng = rngs.stage("audit");
  run.audited = audit_tokens(grp, run.pub, run.batch, cfg.audit_per_booth, audit_rng, &run.audit_reports);
  SessionHooks h = hooks;
  if (collide) {
    auto rng = rngs.stage("collide");
    plant_rid_collision(grp, run.keys, cfg.m, run.batch, run.audited, collide->first, collide->second, h, rng);
  }
  const auto chooser = choose ? choose : default_chooser(cfg);
  for (std::uint32_t k = 0; k < cfg.booths; ++k)
    run.booths.push_back(run_booth(grp, run.pub, run.keys, k, run.batch.per_booth[k], run.audited[k], cfg, chooser,
                                   h, rngs.booth("booth", k), rngs.booth("votes", k)));
  collect_and_publish(grp, run, rngs);
  return run;
}

template <CyclicGroup G>
IndividualProofRequest<G> request_for(const VoterReceipt<G>& r) {
  return {r.c_rid, r.c_v};
}

/// Individual verification for every voter holding a receipt.
template <PairingGroup G>
std::map<VoterId, IndividualResult> verify_voters(const G& grp, const ElectionRun<G>& run,
                                                  const std::vector<Bb3Row<G>>& bb3, Drbg& rng) {
  auto verifier = BoardVerifier<G>::build(grp, bb3, rng);
  std::map<VoterId, IndividualResult> out;
  for (const auto* v : run.voters())
    if (v->receipt) out[v->id] = individual_verify(grp, request_for(*v->receipt), run.store, verifier, rng);
  return out;
}

}  // namespace evote::sim
