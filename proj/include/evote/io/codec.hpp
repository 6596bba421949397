#pragma once

// Row encodings for every on-disk artifact. One row per record; each field is
// a fixed-width or self-describing byte string.

#include <string>
#include <vector>

#include "evote/io/artifact.hpp"
#include "evote/verify/tamper.hpp"

namespace evote::io {

inline Bytes u64_field(std::uint64_t v) {
  Bytes out(8);
  for (int i = 7; i >= 0; --i, v >>= 8) out[static_cast<std::size_t>(i)] = static_cast<std::uint8_t>(v);
  return out;
}

inline std::uint64_t read_u64(const Bytes& b) {
  if (b.size() != 8) throw ArtifactError("count field must be 8 bytes");
  std::uint64_t v = 0;
  for (auto x : b) v = (v << 8) | x;
  return v;
}

inline Bytes digest_field(const Digest& d) { return Bytes(d.begin(), d.end()); }

// --- configuration ---

inline std::vector<Row> encode_config(const sim::ElectionConfig& c) {
  std::string weights;
  for (std::size_t i = 0; i < c.vote_weights.size(); ++i) {
    if (i) weights += ',';
    std::ostringstream os;
    os.precision(17);
    os << c.vote_weights[i];
    weights += os.str();
  }
  auto kv = [](std::string_view k, const std::string& v) { return Row{text_field(k), text_field(v)}; };
  return {kv("booths", std::to_string(c.booths)),
          kv("voters_per_booth", std::to_string(c.voters_per_booth)),
          kv("candidates", std::to_string(c.m)),
          kv("token_multiple", std::to_string(c.token_multiple)),
          kv("audit_per_booth", std::to_string(c.audit_per_booth)),
          kv("profile", std::string(profile_name(c.profile))),
          kv("seed", c.seed),
          kv("publish_bb2", c.publish_bb2 ? "1" : "0"),
          kv("vote_weights", weights)};
}

inline sim::ElectionConfig decode_config(const std::vector<Row>& rows) {
  sim::ElectionConfig c;
  auto num = [](const std::string& key, const std::string& v) {
    std::uint32_t out = 0;
    auto [end, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc{} || end != v.data() + v.size()) throw ArtifactError("config value for " + key + " is not a number");
    return out;
  };
  std::set<std::string> seen;
  for (const auto& row : rows) {
    RowReader r(row, 2, "config");
    auto key = r.text();
    auto val = r.text();
    if (!seen.insert(key).second) throw ArtifactError("config key repeated: " + key);
    if (key == "booths") c.booths = num(key, val);
    else if (key == "voters_per_booth") c.voters_per_booth = num(key, val);
    else if (key == "candidates") c.m = num(key, val);
    else if (key == "token_multiple") c.token_multiple = num(key, val);
    else if (key == "audit_per_booth") c.audit_per_booth = num(key, val);
    else if (key == "profile") c.profile = parse_profile(val);
    else if (key == "seed") c.seed = val;
    else if (key == "publish_bb2") c.publish_bb2 = val == "1";
    else if (key == "vote_weights") {
      c.vote_weights.clear();
      if (!val.empty())
        for (auto part : detail::split(val, ',')) c.vote_weights.push_back(std::stod(std::string(part)));
    } else {
      throw ArtifactError("unknown config key: " + key);
    }
  }
  return c;
}

// --- keys ---

template <CyclicGroup G>
std::vector<Row> encode_keys(const G& grp, const AuthorityKeys<G>& k) {
  const auto& F = grp.field();
  std::vector<Row> rows;
  auto add = [&](std::string_view role, std::uint32_t i, const KeyPair<G>& kp) {
    rows.push_back({text_field(role), be32(i), F.encode(kp.secret), grp.serialize(kp.pub)});
  };
  add("ea_sign", 0, k.ea_sign);
  add("ea_enc", 0, k.ea_enc);
  for (std::uint32_t i = 0; i < k.po.size(); ++i) add("po", i, k.po[i]);
  for (std::uint32_t i = 0; i < k.evm.size(); ++i) add("evm", i, k.evm[i]);
  return rows;
}

template <CyclicGroup G>
AuthorityKeys<G> decode_keys(const G& grp, const std::vector<Row>& rows, std::uint32_t booths) {
  AuthorityKeys<G> k;
  bool sign = false, enc = false;
  for (const auto& row : rows) {
    RowReader r(row, 4, "keys");
    auto role = r.text();
    auto i = r.u32();
    KeyPair<G> kp{grp.field().decode(r.next()), grp.deserialize(r.next())};
    if (!key_matches(grp, kp)) throw ArtifactError("key pair for " + role + " does not match");
    auto put = [&](std::vector<KeyPair<G>>& list) {
      if (i != list.size()) throw ArtifactError(role + " keys out of order");
      list.push_back(kp);
    };
    if (role == "ea_sign") k.ea_sign = kp, sign = true;
    else if (role == "ea_enc") k.ea_enc = kp, enc = true;
    else if (role == "po") put(k.po);
    else if (role == "evm") put(k.evm);
    else throw ArtifactError("unknown key role: " + role);
  }
  if (!sign || !enc || k.po.size() != booths || k.evm.size() != booths) throw ArtifactError("key file is incomplete");
  return k;
}

template <CyclicGroup G>
std::vector<Row> encode_publics(const G& grp, const ElectionPublics<G>& p) {
  std::vector<Row> rows{{text_field("ea_sign"), be32(0), grp.serialize(p.ea_sign)},
                        {text_field("ea_enc"), be32(0), grp.serialize(p.ea_enc)}};
  for (std::uint32_t i = 0; i < p.po_ring.size(); ++i) rows.push_back({text_field("po"), be32(i), grp.serialize(p.po_ring[i])});
  for (std::uint32_t i = 0; i < p.evm_ring.size(); ++i)
    rows.push_back({text_field("evm"), be32(i), grp.serialize(p.evm_ring[i])});
  return rows;
}

template <CyclicGroup G>
ElectionPublics<G> decode_publics(const G& grp, const std::vector<Row>& rows, std::uint32_t m, std::uint32_t booths) {
  ElectionPublics<G> p{m, grp.identity(), grp.identity(), {}, {}};
  int seen = 0;
  for (const auto& row : rows) {
    RowReader r(row, 3, "publics");
    auto role = r.text();
    auto i = r.u32();
    auto e = grp.deserialize(r.next());
    auto put = [&](std::vector<typename G::Element>& list) {
      if (i != list.size()) throw ArtifactError(role + " keys out of order");
      list.push_back(e);
    };
    if (role == "ea_sign") p.ea_sign = e, seen |= 1;
    else if (role == "ea_enc") p.ea_enc = e, seen |= 2;
    else if (role == "po") put(p.po_ring);
    else if (role == "evm") put(p.evm_ring);
    else throw ArtifactError("unknown public key role: " + role);
  }
  if (seen != 3 || p.po_ring.size() != booths || p.evm_ring.size() != booths)
    throw ArtifactError("public key file is incomplete");
  return p;
}

// --- tokens, BB0, audit ---

template <CyclicGroup G>
std::vector<Row> encode_tokens(const G& grp, const TokenBatch<G>& b) {
  std::vector<Row> rows;
  for (const auto& list : b.per_booth)
    for (std::uint32_t i = 0; i < list.size(); ++i) {
      const auto& t = list[i];
      rows.push_back({be32(t.booth), be32(i), encode_commitments(grp, t.main), encode_secrets(grp, t.secrets),
                      encode_chit(grp.field(), t.chit)});
    }
  return rows;
}

template <CyclicGroup G>
std::vector<std::vector<Token<G>>> decode_tokens(const G& grp, const std::vector<Row>& rows, std::uint32_t booths) {
  std::vector<std::vector<Token<G>>> per(booths);
  for (const auto& row : rows) {
    RowReader r(row, 5, "tokens");
    Token<G> t;
    t.booth = r.u32();
    auto i = r.u32();
    if (t.booth >= booths || i != per[t.booth].size()) throw ArtifactError("token rows out of order");
    t.main = decode_commitments(grp, r.next());
    t.secrets = decode_secrets(grp, r.next());
    t.chit = decode_chit(grp.field(), r.next());
    per[t.booth].push_back(std::move(t));
  }
  return per;
}

template <CyclicGroup G>
std::vector<Row> encode_elements(const G& grp, const std::vector<typename G::Element>& v) {
  std::vector<Row> rows;
  for (const auto& e : v) rows.push_back({grp.serialize(e)});
  return rows;
}

template <CyclicGroup G>
std::vector<typename G::Element> decode_elements(const G& grp, const std::vector<Row>& rows) {
  std::vector<typename G::Element> out;
  for (const auto& row : rows) {
    RowReader r(row, 1, "BB0");
    out.push_back(grp.deserialize(r.next()));
  }
  return out;
}

inline std::string join(const std::vector<std::string>& parts, std::string_view sep) {
  std::string out;
  for (std::size_t i = 0; i < parts.size(); ++i) {
    if (i) out += sep;
    out += parts[i];
  }
  return out;
}

inline std::vector<Row> encode_audit(const std::vector<AuditReport>& reports) {
  std::vector<Row> rows;
  for (const auto& r : reports)
    rows.push_back({be32(r.booth), r.brid, text_field(r.ok() ? "ok" : "fail"), text_field(join(r.failures, "; "))});
  return rows;
}

inline std::vector<std::set<Bytes>> decode_audited(const std::vector<Row>& rows, std::uint32_t booths) {
  std::vector<std::set<Bytes>> out(booths);
  for (const auto& row : rows) {
    RowReader r(row, 4, "audit");
    auto k = r.u32();
    if (k >= booths) throw ArtifactError("audit row names an unknown booth");
    out[k].insert(r.next());
  }
  return out;
}

// --- polling-phase attack plan ---

inline std::vector<Row> encode_hooks(const sim::SessionHooks& h) {
  std::vector<Row> rows;
  auto voter = [](std::string_view tag, const sim::VoterId& id) { return Row{text_field(tag), be32(id.booth), be32(id.index)}; };
  for (const auto& id : h.drop_po_ack) rows.push_back(voter("drop_ack", id));
  for (const auto& id : h.decline) rows.push_back(voter("decline", id));
  for (const auto& id : h.malform_token) rows.push_back(voter("malform", id));
  if (h.replay) {
    rows.push_back({text_field("replay"), be32(h.replay->first.booth), be32(h.replay->first.index),
                    be32(h.replay->second.booth), be32(h.replay->second.index)});
  }
  if (h.po_colludes) rows.push_back({text_field("po_colludes")});
  for (const auto& [id, slot] : h.forced_draw) rows.push_back({text_field("forced"), be32(id.booth), be32(id.index), be32(slot)});
  return rows;
}

inline sim::SessionHooks decode_hooks(const std::vector<Row>& rows) {
  sim::SessionHooks h;
  for (const auto& row : rows) {
    if (row.empty()) throw ArtifactError("empty attack-plan row");
    std::string tag(row[0].begin(), row[0].end());
    auto id_at = [&](RowReader& r) { return sim::VoterId{r.u32(), r.u32()}; };
    if (tag == "drop_ack" || tag == "decline" || tag == "malform") {
      RowReader r(row, 3, "attack");
      r.next();
      auto id = id_at(r);
      (tag == "drop_ack" ? h.drop_po_ack : tag == "decline" ? h.decline : h.malform_token).insert(id);
    } else if (tag == "replay") {
      RowReader r(row, 5, "attack");
      r.next();
      auto a = id_at(r);
      h.replay = std::pair{a, id_at(r)};
    } else if (tag == "po_colludes") {
      RowReader r(row, 1, "attack");
      h.po_colludes = true;
    } else if (tag == "forced") {
      RowReader r(row, 4, "attack");
      r.next();
      auto id = id_at(r);
      h.forced_draw[id] = r.u32();
    } else {
      throw ArtifactError("unknown attack-plan entry: " + tag);
    }
  }
  return h;
}

// --- polling outputs ---

template <CyclicGroup G>
std::vector<Row> encode_voters(const G& grp, const std::vector<sim::VoterOutcome<G>>& voters) {
  const auto& F = grp.field();
  std::vector<Row> rows;
  for (const auto& v : voters) {
    Row row{be32(v.id.booth), be32(v.id.index), be32(v.vote), text_field(sim::status_name(v.status))};
    if (v.receipt) {
      const auto& r = *v.receipt;
      for (auto&& f : {encode_commitments(grp, r.token), grp.serialize(r.c_rid.element), grp.serialize(r.c_v.element),
                       encode(F, r.proof), encode(F, r.mu_receipt)})
        row.push_back(f);
    } else {
      row.resize(9);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline sim::SessionStatus parse_status(const std::string& s) {
  for (auto st : {sim::SessionStatus::cast, sim::SessionStatus::rejected_by_po, sim::SessionStatus::rejected_by_evm,
                  sim::SessionStatus::declined})
    if (sim::status_name(st) == s) return st;
  throw ArtifactError("unknown session status: " + s);
}

template <CyclicGroup G>
std::vector<sim::VoterOutcome<G>> decode_voters(const G& grp, const std::vector<Row>& rows) {
  const auto& F = grp.field();
  std::vector<sim::VoterOutcome<G>> out;
  for (const auto& row : rows) {
    RowReader r(row, 9, "voters");
    sim::VoterOutcome<G> v;
    v.id.booth = r.u32();
    v.id.index = r.u32();
    v.vote = r.u32();
    v.status = parse_status(r.text());
    const auto& token = r.next();
    if (!token.empty()) {
      VoterReceipt<G> rc;
      rc.token = decode_commitments(grp, token);
      rc.c_rid = deserialize_commitment(grp, r.next());
      rc.c_v = deserialize_commitment(grp, r.next());
      rc.proof = decode_vote_proof(F, r.next());
      rc.mu_receipt = decode_ring(F, r.next());
      v.receipt = std::move(rc);
    }
    out.push_back(std::move(v));
  }
  return out;
}

template <CyclicGroup G>
std::vector<Row> encode_booth_records(const G& grp, std::uint32_t booth, const std::vector<BoothRecord<G>>& recs) {
  std::vector<Row> rows;
  for (const auto& r : recs) rows.push_back({be32(booth), r.brid, digest_field(r.h), encode(grp, r.ct)});
  return rows;
}

template <CyclicGroup G>
std::vector<std::vector<BoothRecord<G>>> decode_booth_records(const G& grp, const std::vector<Row>& rows,
                                                              std::uint32_t booths) {
  std::vector<std::vector<BoothRecord<G>>> out(booths);
  for (const auto& row : rows) {
    RowReader r(row, 4, "booth record");
    auto k = r.u32();
    if (k >= booths) throw ArtifactError("booth record names an unknown booth");
    BoothRecord<G> rec;
    rec.brid = r.next();
    rec.h = r.digest();
    rec.ct = decode_hybrid(grp, r.next());
    out[k].push_back(std::move(rec));
  }
  return out;
}

inline std::vector<Row> encode_printouts(std::uint32_t booth, const std::vector<Printout>& ps) {
  std::vector<Row> rows;
  for (const auto& p : ps) rows.push_back({be32(booth), p.brid, p.sigma_blinded});
  return rows;
}

inline std::vector<std::vector<Printout>> decode_printouts(const std::vector<Row>& rows, std::uint32_t booths) {
  std::vector<std::vector<Printout>> out(booths);
  for (const auto& row : rows) {
    RowReader r(row, 3, "printout");
    auto k = r.u32();
    if (k >= booths) throw ArtifactError("printout names an unknown booth");
    Printout p;
    p.brid = r.next();
    p.sigma_blinded = r.next();
    out[k].push_back(std::move(p));
  }
  return out;
}

// --- booth closing and collection ---

template <CyclicGroup G>
std::vector<Row> encode_envelopes(const G& grp, const std::vector<Envelope<G>>& env) {
  std::vector<Row> rows;
  for (const auto& e : env) rows.push_back({encode(grp, e.ct), e.brid, e.sigma_blinded});
  return rows;
}

template <CyclicGroup G>
std::vector<Envelope<G>> decode_envelopes(const G& grp, const std::vector<Row>& rows) {
  std::vector<Envelope<G>> out;
  for (const auto& row : rows) {
    RowReader r(row, 3, "envelope");
    Envelope<G> e;
    e.ct = decode_hybrid(grp, r.next());
    e.brid = r.next();
    e.sigma_blinded = r.next();
    out.push_back(std::move(e));
  }
  return out;
}

template <CyclicGroup G>
std::vector<Row> encode_bb1(const G& grp, const std::vector<Bb1Row<G>>& bb1) {
  const auto& F = grp.field();
  std::vector<Row> rows;
  for (const auto& b : bb1)
    rows.push_back({be32(b.booth), digest_field(b.h_k), be32(b.n_k), encode(F, b.mu_hk), encode(F, b.sigma_nk)});
  return rows;
}

template <CyclicGroup G>
std::vector<Bb1Row<G>> decode_bb1(const G& grp, const std::vector<Row>& rows) {
  const auto& F = grp.field();
  std::vector<Bb1Row<G>> out;
  for (const auto& row : rows) {
    RowReader r(row, 5, "BB1");
    Bb1Row<G> b;
    b.booth = r.u32();
    b.h_k = r.digest();
    b.n_k = r.u32();
    b.mu_hk = decode_ring(F, r.next());
    b.sigma_nk = decode_ring(F, r.next());
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<Row> encode_booth_flags(std::uint32_t booth, const std::vector<BoothFlag>& flags) {
  std::vector<Row> rows;
  for (const auto& f : flags) rows.push_back({be32(booth), text_field(flag_name(f.kind)), f.brid});
  return rows;
}

template <CyclicGroup G>
std::vector<Row> encode_store(const G& grp, const EaStore<G>& store) {
  std::vector<Row> rows;
  for (const auto& r : store.accepted) rows.push_back({r.brid, grp.serialize(r.sigma_ack), encode(grp, r.rec)});
  return rows;
}

template <CyclicGroup G>
EaStore<G> decode_store(const G& grp, const std::vector<Row>& rows) {
  EaStore<G> store;
  for (const auto& row : rows) {
    RowReader r(row, 3, "EA store");
    StoredRecord<G> s;
    s.brid = r.next();
    s.sigma_ack = grp.deserialize(r.next());
    s.rec = decode_sealed_record(grp, r.next());
    store.accepted.push_back(std::move(s));
  }
  store.ingested = store.accepted.size();
  store.reindex(grp);
  return store;
}

inline std::vector<Row> encode_ingest_flags(const std::vector<IngestFlag>& flags) {
  std::vector<Row> rows;
  for (const auto& f : flags) rows.push_back({text_field(flag_name(f.kind)), be32(static_cast<std::uint32_t>(f.envelope)), f.brid});
  return rows;
}

// --- published boards ---

template <CyclicGroup G>
std::vector<Row> encode_bb2(const G& grp, const std::vector<Bb2Row<G>>& bb2) {
  std::vector<Row> rows;
  for (const auto& r : bb2) rows.push_back({grp.serialize(r.c_rid.element), to_bytes_min(r.w)});
  return rows;
}

template <CyclicGroup G>
std::vector<Bb2Row<G>> decode_bb2(const G& grp, const std::vector<Row>& rows) {
  std::vector<Bb2Row<G>> out;
  for (const auto& row : rows) {
    RowReader r(row, 2, "BB2");
    Bb2Row<G> b;
    b.c_rid = deserialize_commitment(grp, r.next());
    b.w = from_bytes_be(r.next());
    out.push_back(std::move(b));
  }
  return out;
}

template <CyclicGroup G>
std::vector<Row> encode_bb3(const G& grp, const std::vector<Bb3Row<G>>& bb3) {
  const auto& F = grp.field();
  std::vector<Row> rows;
  for (const auto& r : bb3)
    rows.push_back({F.encode(r.rid), be32(r.v), F.encode(r.rho), digest_field(r.h), encode(F, r.mu_h),
                    grp.serialize(r.sigma_ack), grp.serialize(r.p_ik)});
  return rows;
}

template <CyclicGroup G>
std::vector<Bb3Row<G>> decode_bb3(const G& grp, const std::vector<Row>& rows) {
  const auto& F = grp.field();
  std::vector<Bb3Row<G>> out;
  for (const auto& row : rows) {
    RowReader r(row, 7, "BB3");
    Bb3Row<G> b;
    b.rid = F.decode(r.next());
    b.v = r.u32();
    b.rho = F.decode(r.next());
    b.h = r.digest();
    b.mu_h = decode_ring(F, r.next());
    b.sigma_ack = grp.deserialize(r.next());
    b.p_ik = grp.deserialize(r.next());
    out.push_back(std::move(b));
  }
  return out;
}

inline std::vector<Row> encode_tally(const TallyResult& t) {
  std::vector<Row> rows;
  for (std::uint32_t i = 0; i < t.counts.size(); ++i) rows.push_back({be32(i), u64_field(t.counts[i])});
  return rows;
}

inline TallyResult decode_tally(const std::vector<Row>& rows, std::uint32_t m) {
  if (rows.size() != m) throw ArtifactError("tally must list every candidate once");
  TallyResult t{std::vector<std::uint64_t>(m, 0), 0};
  for (std::uint32_t i = 0; i < m; ++i) {
    RowReader r(rows[i], 2, "tally");
    if (r.u32() != i) throw ArtifactError("tally rows out of order");
    t.counts[i] = read_u64(r.next());
    t.total += t.counts[i];
  }
  return t;
}

}  // namespace evote::io
