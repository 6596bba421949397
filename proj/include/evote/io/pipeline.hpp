#pragma once

// File-backed election stages. Each stage reads its predecessors' artifacts
// from one directory and writes its own; all randomness comes from labeled
// streams of the configured seed, so any stage can be rerun in isolation.

#include <filesystem>
#include <iostream>
#include <map>
#include <optional>

#include "evote/io/codec.hpp"

namespace evote::io {

namespace fs = std::filesystem;

namespace file {
inline constexpr std::string_view config = "config";
inline constexpr std::string_view keys = "keys";
inline constexpr std::string_view publics = "publics";
inline constexpr std::string_view tokens = "tokens";
inline constexpr std::string_view bb0 = "bb0";
inline constexpr std::string_view audit = "audit";
inline constexpr std::string_view attack = "attack";
inline constexpr std::string_view voters = "voters";
inline constexpr std::string_view booth_records = "booth_records";
inline constexpr std::string_view printouts = "printouts";
inline constexpr std::string_view envelopes = "envelopes";
inline constexpr std::string_view bb1 = "bb1";
inline constexpr std::string_view booth_flags = "booth_flags";
inline constexpr std::string_view ea_store = "ea_store";
inline constexpr std::string_view ingest_flags = "ingest_flags";
inline constexpr std::string_view bb2 = "bb2";
inline constexpr std::string_view bb3 = "bb3";
inline constexpr std::string_view tally = "tally";
inline constexpr std::string_view tamper_delta = "tamper_delta";
}  // namespace file

inline fs::path artifact_path(const fs::path& dir, std::string_view name) { return dir / (std::string(name) + ".art"); }

/// Reads the configuration without knowing the group yet; the caller checks
/// the header once the group is built.
inline std::pair<sim::ElectionConfig, ArtifactHeader> load_config(const fs::path& dir) {
  auto path = artifact_path(dir, file::config);
  try {
    auto a = parse_artifact(read_text(path));
    if (a.header.kind != file::config) throw ArtifactError("not a config artifact");
    auto cfg = decode_config(a.rows);
    cfg.validate();
    return {cfg, a.header};
  } catch (const ProtocolError& e) {
    throw ArtifactError(path.filename().string() + ": " + e.what());
  } catch (const FormatError& e) {
    throw ArtifactError(path.filename().string() + ": " + e.what());
  }
}

/// Exit status shared by every stage.
enum class Outcome { ok = 0, verification_failed = 1 };

template <PairingGroup G>
class Workspace {
 public:
  Workspace(const G& grp, fs::path dir, sim::ElectionConfig cfg, std::ostream& out = std::cout)
      : grp_(grp), dir_(std::move(dir)), cfg_(std::move(cfg)), rngs_(cfg_.seed), out_(out) {}

  const G& grp() const { return grp_; }
  const sim::ElectionConfig& cfg() const { return cfg_; }
  const sim::StageRng& rngs() const { return rngs_; }
  std::ostream& out() const { return out_; }
  fs::path path(std::string_view name) const { return artifact_path(dir_, name); }
  bool exists(std::string_view name) const { return fs::exists(path(name)); }

  std::vector<Row> read(std::string_view name) const {
    return read_artifact(path(name), header_for(grp_, std::string(name), cfg_.m)).rows;
  }
  void write(std::string_view name, std::vector<Row> rows) const {
    write_artifact(path(name), {header_for(grp_, std::string(name), cfg_.m), std::move(rows)});
  }
  void remove(std::string_view name) const { fs::remove(path(name)); }

  AuthorityKeys<G> keys() const { return decode_keys(grp_, read(file::keys), cfg_.booths); }
  ElectionPublics<G> publics() const { return decode_publics(grp_, read(file::publics), cfg_.m, cfg_.booths); }
  std::vector<typename G::Element> bb0() const { return decode_elements(grp_, read(file::bb0)); }
  TokenBatch<G> tokens() const { return {decode_tokens(grp_, read(file::tokens), cfg_.booths), bb0()}; }
  std::vector<sim::VoterOutcome<G>> voters() const { return decode_voters(grp_, read(file::voters)); }
  EaStore<G> store() const { return decode_store(grp_, read(file::ea_store)); }
  std::vector<Bb1Row<G>> bb1() const { return decode_bb1(grp_, read(file::bb1)); }
  std::vector<Bb2Row<G>> bb2() const { return decode_bb2(grp_, read(file::bb2)); }
  std::vector<Bb3Row<G>> bb3() const { return decode_bb3(grp_, read(file::bb3)); }
  TallyResult tally() const { return decode_tally(read(file::tally), cfg_.m); }

 private:
  const G& grp_;
  fs::path dir_;
  sim::ElectionConfig cfg_;
  sim::StageRng rngs_;
  std::ostream& out_;
};

template <PairingGroup G>
Outcome stage_setup(const Workspace<G>& ws) {
  auto rng = ws.rngs().stage("setup");
  auto keys = generate_authority(ws.grp(), ws.cfg().booths, rng);
  ws.write(file::config, encode_config(ws.cfg()));
  ws.write(file::keys, encode_keys(ws.grp(), keys));
  ws.write(file::publics, encode_publics(ws.grp(), keys.publics(ws.cfg().m)));
  ws.out() << "setup: " << ws.cfg().booths << " booth(s), m=" << ws.cfg().m << ", profile "
           << profile_name(ws.cfg().profile) << '\n';
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_gen_tokens(const Workspace<G>& ws) {
  auto keys = ws.keys();
  auto rng = ws.rngs().stage("tokens");
  auto batch = generate_tokens(ws.grp(), keys, ws.cfg().tokens_per_booth(), ws.cfg().m, rng);
  ws.write(file::tokens, encode_tokens(ws.grp(), batch));
  ws.write(file::bb0, encode_elements(ws.grp(), batch.bb0));
  ws.out() << "gen-tokens: " << batch.bb0.size() << " token(s), " << ws.cfg().tokens_per_booth() << " per booth\n";
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_audit_tokens(const Workspace<G>& ws) {
  auto pub = ws.publics();
  auto batch = ws.tokens();
  auto rng = ws.rngs().stage("audit");
  std::vector<AuditReport> reports;
  sim::audit_tokens(ws.grp(), pub, batch, ws.cfg().audit_per_booth, rng, &reports);
  ws.write(file::audit, encode_audit(reports));
  std::size_t bad = 0;
  for (const auto& r : reports) {
    if (r.ok()) continue;
    ++bad;
    ws.out() << "audit: booth " << r.booth << " token " << to_hex(r.brid).substr(0, 16) << ": " << join(r.failures, "; ")
             << '\n';
  }
  ws.out() << "audit-tokens: " << reports.size() << " audited, " << bad << " failed\n";
  return bad ? Outcome::verification_failed : Outcome::ok;
}

template <PairingGroup G>
Outcome stage_run_election(const Workspace<G>& ws) {
  auto keys = ws.keys();
  auto pub = ws.publics();
  auto batch = ws.tokens();
  auto audited = decode_audited(ws.read(file::audit), ws.cfg().booths);
  sim::SessionHooks hooks;
  if (ws.exists(file::attack)) {
    hooks = decode_hooks(ws.read(file::attack));
    ws.out() << "run-election: applying attack plan from " << ws.path(file::attack).filename().string() << '\n';
  }
  auto chooser = sim::default_chooser(ws.cfg());
  std::vector<sim::VoterOutcome<G>> voters;
  std::vector<Row> records, printouts;
  for (std::uint32_t k = 0; k < ws.cfg().booths; ++k) {
    auto run = sim::run_booth(ws.grp(), pub, keys, k, batch.per_booth[k], audited[k], ws.cfg(), chooser, hooks,
                              ws.rngs().booth("booth", k), ws.rngs().booth("votes", k));
    for (auto& v : run.voters) voters.push_back(std::move(v));
    for (auto& r : encode_booth_records(ws.grp(), k, run.records)) records.push_back(std::move(r));
    for (auto& r : encode_printouts(k, run.printouts)) printouts.push_back(std::move(r));
  }
  std::map<std::string_view, std::size_t> by_status;
  for (const auto& v : voters) ++by_status[sim::status_name(v.status)];
  ws.write(file::voters, encode_voters(ws.grp(), voters));
  ws.write(file::booth_records, std::move(records));
  ws.write(file::printouts, std::move(printouts));
  ws.out() << "run-election: " << voters.size() << " session(s)";
  for (const auto& [s, n] : by_status) ws.out() << ", " << s << "=" << n;
  ws.out() << '\n';
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_close(const Workspace<G>& ws) {
  auto keys = ws.keys();
  auto pub = ws.publics();
  auto records = decode_booth_records(ws.grp(), ws.read(file::booth_records), ws.cfg().booths);
  auto printouts = decode_printouts(ws.read(file::printouts), ws.cfg().booths);
  std::vector<Envelope<G>> all;
  std::vector<Bb1Row<G>> bb1;
  std::vector<Row> flags;
  for (std::uint32_t k = 0; k < ws.cfg().booths; ++k) {
    auto rng = ws.rngs().booth("close", k);
    auto c = close_booth(ws.grp(), pub, k, keys.evm[k].secret, keys.po[k].secret, records[k], printouts[k], rng);
    for (auto& e : c.envelopes) all.push_back(std::move(e));
    for (auto& f : encode_booth_flags(k, c.flags)) flags.push_back(std::move(f));
    for (const auto& f : c.flags)
      ws.out() << "close: booth " << k << " " << flag_name(f.kind) << " " << to_hex(f.brid).substr(0, 16) << '\n';
    bb1.push_back(c.row);
  }
  // the anonymizing channel: envelopes reach the authority in random order
  auto rng = ws.rngs().stage("shuffle");
  all = shuffle(std::move(all), rng);
  ws.write(file::envelopes, encode_envelopes(ws.grp(), all));
  ws.write(file::bb1, encode_bb1(ws.grp(), bb1));
  ws.write(file::booth_flags, std::move(flags));
  ws.out() << "close: " << all.size() << " envelope(s) from " << bb1.size() << " booth(s)\n";
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_collect(const Workspace<G>& ws) {
  auto keys = ws.keys();
  auto pub = ws.publics();
  auto envelopes = decode_envelopes(ws.grp(), ws.read(file::envelopes));
  auto store = ea_ingest(ws.grp(), pub, keys.ea_enc.secret, ws.bb0(), envelopes);
  ws.write(file::ea_store, encode_store(ws.grp(), store));
  ws.write(file::ingest_flags, encode_ingest_flags(store.flags));
  for (const auto& f : store.flags) ws.out() << "collect: envelope " << f.envelope << " " << flag_name(f.kind) << '\n';
  ws.out() << "collect: " << store.accepted.size() << " accepted, " << store.flags.size() << " flagged\n";
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_publish(const Workspace<G>& ws) {
  auto boards = publish_boards(ws.grp(), ws.store());
  if (!ws.cfg().publish_bb2) boards.bb2.clear();
  ws.write(file::bb2, encode_bb2(ws.grp(), boards.bb2));
  ws.write(file::bb3, encode_bb3(ws.grp(), boards.bb3));
  ws.out() << "publish: BB3 " << boards.bb3.size() << " row(s), BB2 " << boards.bb2.size() << " row(s)\n";
  return Outcome::ok;
}

template <PairingGroup G>
Outcome stage_tally(const Workspace<G>& ws) {
  auto t = tally(ws.bb3(), ws.cfg().m);
  ws.write(file::tally, encode_tally(t));
  ws.out() << "tally:";
  for (std::uint32_t i = 0; i < t.counts.size(); ++i) ws.out() << ' ' << i << '=' << t.counts[i];
  ws.out() << " total=" << t.total << '\n';
  return Outcome::ok;
}

template <PairingGroup G>
UniversalReport universal_report(const Workspace<G>& ws) {
  auto pub = ws.publics();
  auto bb0 = ws.bb0();
  auto bb1 = ws.bb1();
  auto bb2 = ws.bb2();
  auto bb3 = ws.bb3();
  auto t = ws.tally();
  return universal_verify(ws.grp(), pub, UniversalInputs<G>{bb0, bb1, ws.cfg().publish_bb2 ? &bb2 : nullptr, bb3, &t});
}

template <PairingGroup G>
Outcome stage_verify_universal(const Workspace<G>& ws) {
  auto rep = universal_report(ws);
  ws.out() << rep.render();
  return rep.pass() ? Outcome::ok : Outcome::verification_failed;
}

/// Runs the voter-side checks for one voter (or all when `who` is empty).
template <PairingGroup G>
Outcome stage_verify_individual(const Workspace<G>& ws, std::optional<sim::VoterId> who) {
  auto pub = ws.publics();
  auto voters = ws.voters();
  auto store = ws.store();
  auto bb3 = ws.bb3();
  auto rng = ws.rngs().stage("verify-individual");
  auto verifier = BoardVerifier<G>::build(ws.grp(), bb3, rng);
  std::size_t checked = 0, failed = 0;
  for (const auto& v : voters) {
    if (who && v.id != *who) continue;
    ++checked;
    ws.out() << "voter " << v.id.booth << "/" << v.id.index << ": ";
    if (!v.receipt) {
      ws.out() << "no receipt (" << sim::status_name(v.status) << ")\n";
      if (who) ++failed;
      continue;
    }
    auto local = verify_receipt_local(ws.grp(), pub, *v.receipt);
    auto res = individual_verify(ws.grp(), sim::request_for(*v.receipt), store, verifier, rng);
    bool ok = local.ok() && res == IndividualResult::verified;
    failed += ok ? 0 : 1;
    ws.out() << "receipt " << (local.ok() ? "ok" : "invalid [" + join(local.failures, "; ") + "]") << ", proof "
             << result_name(res) << '\n';
  }
  if (who && checked == 0) throw ProtocolError("no such voter");
  ws.out() << "verify-individual: " << checked << " checked, " << failed << " failed\n";
  return failed ? Outcome::verification_failed : Outcome::ok;
}

struct TamperOptions {
  Attack attack = Attack::alter_vote;
  std::optional<std::size_t> row;
  std::optional<sim::VoterId> voter;
  bool po_colludes = false;
};

// BB3 position of the row holding a voter's record.
template <PairingGroup G>
std::size_t row_of_voter(const Workspace<G>& ws, const EaStore<G>& store, const std::vector<Bb3Row<G>>& bb3,
                         sim::VoterId who) {
  for (const auto& v : ws.voters()) {
    if (v.id != who) continue;
    if (!v.receipt) throw ProtocolError("voter has no receipt");
    auto it = store.by_c_rid.find(to_hex(ws.grp().serialize(v.receipt->c_rid.element)));
    if (it == store.by_c_rid.end()) throw ProtocolError("voter's record was not accepted");
    const auto& rid = store.accepted[it->second].rec.s.rid;
    for (std::size_t i = 0; i < bb3.size(); ++i)
      if (bb3[i].rid == rid) return i;
    throw ProtocolError("voter's record is not on BB3");
  }
  throw ProtocolError("no such voter");
}

template <PairingGroup G>
Outcome stage_tamper(const Workspace<G>& ws, const TamperOptions& opt) {
  auto rng = ws.rngs().stage("tamper");
  TamperDelta delta;
  std::vector<sim::VoterId> victims;
  if (is_board_attack(opt.attack)) {
    auto pub = ws.publics();
    auto store = ws.store();
    PublishedBoards<G> boards{ws.bb2(), ws.bb3()};
    auto t = ws.tally();
    auto row = opt.row;
    if (!row && opt.voter && opt.attack != Attack::inject_row) row = row_of_voter(ws, store, boards.bb3, *opt.voter);
    delta = tamper_boards(ws.grp(), pub, store, boards, t, opt.attack, rng, row);
    ws.write(file::bb3, encode_bb3(ws.grp(), boards.bb3));
    ws.write(file::tally, encode_tally(t));
    if (!delta.victim_commitments.empty()) {
      for (const auto& v : ws.voters())
        for (const auto& c : delta.victim_commitments)
          if (v.receipt && ws.grp().serialize(v.receipt->c_rid.element) == c) victims.push_back(v.id);
    }
  } else {
    auto plan = plan_session_attack(opt.attack, ws.cfg(), rng, opt.po_colludes, opt.voter);
    if (plan.collide) {
      auto keys = ws.keys();
      auto batch = ws.tokens();
      auto audited = decode_audited(ws.read(file::audit), ws.cfg().booths);
      auto crng = ws.rngs().stage("collide");
      sim::plant_rid_collision(ws.grp(), keys, ws.cfg().m, batch, audited, plan.collide->first, plan.collide->second,
                               plan.hooks, crng);
      ws.write(file::tokens, encode_tokens(ws.grp(), batch));
      ws.write(file::bb0, encode_elements(ws.grp(), batch.bb0));
    }
    ws.write(file::attack, encode_hooks(plan.hooks));
    delta = plan.delta;
    victims = delta.victim_voters;
  }
  std::vector<Row> rows{{text_field("attack"), text_field(attack_name(delta.attack))}};
  if (delta.row) rows.push_back({text_field("row"), be32(static_cast<std::uint32_t>(*delta.row))});
  for (const auto& f : delta.universal_flags) rows.push_back({text_field("flag"), text_field(f)});
  for (const auto& v : victims) rows.push_back({text_field("victim"), be32(v.booth), be32(v.index)});
  rows.push_back({text_field("expected"), text_field(delta.expected)});
  ws.write(file::tamper_delta, std::move(rows));

  ws.out() << "tamper: " << attack_name(delta.attack);
  if (delta.row) ws.out() << " row=" << *delta.row;
  for (const auto& v : victims) ws.out() << " victim=" << v.booth << "/" << v.index;
  ws.out() << "\nexpected: " << delta.expected << '\n';
  if (!is_board_attack(opt.attack)) ws.out() << "rerun run-election and later stages to apply\n";
  return Outcome::ok;
}

/// Setup through universal verification; stops at the first failing stage.
template <PairingGroup G>
Outcome stage_pipeline(const Workspace<G>& ws) {
  ws.remove(file::attack);
  for (auto fn : {stage_setup<G>, stage_gen_tokens<G>, stage_audit_tokens<G>, stage_run_election<G>, stage_close<G>,
                  stage_collect<G>, stage_publish<G>, stage_tally<G>})
    if (fn(ws) != Outcome::ok) return Outcome::verification_failed;
  return stage_verify_universal(ws);
}

}  // namespace evote::io
