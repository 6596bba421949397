#pragma once

#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "evote/ea/boards.hpp"

namespace evote {

struct UniversalReport {
  struct Check {
    std::string name;
    bool pass = true;
    std::string detail;
  };
  std::vector<Check> checks;
  std::optional<double> verified_fraction;  // share of voters who ran individual verification

  bool pass() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const Check* find(std::string_view name) const {
    for (const auto& c : checks)
      if (c.name == name) return &c;
    return nullptr;
  }
  bool passed(std::string_view name) const {
    const auto* c = find(name);
    return c && c->pass;
  }
  std::vector<std::string> failed() const {
    std::vector<std::string> out;
    for (const auto& c : checks)
      if (!c.pass) out.push_back(c.name);
    return out;
  }

  std::string render() const {
    std::ostringstream os;
    std::size_t ok = 0;
    for (const auto& c : checks) {
      os << (c.pass ? "PASS " : "FAIL ") << c.name;
      if (!c.detail.empty()) os << "  (" << c.detail << ")";
      os << '\n';
      ok += c.pass ? 1 : 0;
    }
    os << "summary checks=" << checks.size() << " passed=" << ok << " overall=" << (pass() ? "PASS" : "FAIL");
    if (verified_fraction) os << " verified_fraction=" << *verified_fraction;
    os << '\n';
    return os.str();
  }
};

template <CyclicGroup G>
struct UniversalInputs {
  const std::vector<typename G::Element>& bb0;
  const std::vector<Bb1Row<G>>& bb1;
  const std::vector<Bb2Row<G>>* bb2;  // optional board
  const std::vector<Bb3Row<G>>& bb3;
  const TallyResult* published_tally;
};

/// The eight public checks over the bulletin boards. Anyone can run these.
template <PairingGroup G>
UniversalReport universal_verify(const G& grp, const ElectionPublics<G>& pub, const UniversalInputs<G>& in) {
  const auto& F = grp.field();
  UniversalReport rep;
  auto add = [&](std::string name, bool pass, std::string detail = {}) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };
  auto rows = [](std::size_t n) { return std::to_string(n) + " row(s)"; };

  // column-sum: rho == rid + v and v in range
  std::size_t bad = 0;
  for (const auto& r : in.bb3)
    if (r.v >= pub.m || !(r.rho == F.add(r.rid, F.from_u64(r.v)))) ++bad;
  add("column-sum", bad == 0, bad ? rows(bad) : "");

  // rid-separation: no two rids within m on the circle
  std::vector<BigInt> rids;
  for (const auto& r : in.bb3) rids.push_back(r.rid.value());
  auto hits = find_rid_proximity(rids, F.order(), pub.m);
  add("rid-separation", hits.empty(), hits.empty() ? "" : std::to_string(hits.size()) + " close pair(s)");

  bad = 0;
  for (const auto& r : in.bb3)
    if (r.v >= pub.m || r.h != record_hash(r.rid, r.v, pub.m)) ++bad;
  add("hash-recompute", bad == 0, bad ? rows(bad) : "");

  // group-signature: every mu_h over the EVM ring; every BB1 row's mu_Hk (EVM ring) and sigma_Nk (PO ring)
  bad = 0;
  for (const auto& r : in.bb3)
    if (!ring_verify(grp, pub.evm_ring, record_hash_message(r.h), r.mu_h)) ++bad;
  std::size_t bad_bb1 = 0;
  std::set<std::uint32_t> booths;
  for (const auto& b : in.bb1) {
    bool ok = booths.insert(b.booth).second && b.booth < pub.booths() &&
              ring_verify(grp, pub.evm_ring, booth_hash_message(b.booth, b.h_k), b.mu_hk) &&
              ring_verify(grp, pub.po_ring, booth_count_message(b.booth, b.n_k), b.sigma_nk);
    if (!ok) ++bad_bb1;
  }
  add("group-signature", bad == 0 && bad_bb1 == 0,
      bad || bad_bb1 ? std::to_string(bad) + " BB3 row(s), " + std::to_string(bad_bb1) + " BB1 row(s)" : "");

  // ack-signature-vs-BB0: signer key listed in BB0, used once, signature valid on rid
  std::set<Bytes> bb0_keys, used;
  for (const auto& p : in.bb0) bb0_keys.insert(grp.serialize(p));
  bad = 0;
  for (const auto& r : in.bb3) {
    auto key = grp.serialize(r.p_ik);
    bool ok = bb0_keys.contains(key) && used.insert(key).second && bverify(grp, r.p_ik, r.rid, r.sigma_ack);
    if (!ok) ++bad;
  }
  add("ack-signature-vs-BB0", bad == 0, bad ? rows(bad) : "");

  std::vector<Digest> hs, hk;
  for (const auto& r : in.bb3) hs.push_back(r.h);
  for (const auto& b : in.bb1) hk.push_back(b.h_k);
  add("xor-aggregate", xor_fold(hs) == xor_fold(hk));

  std::uint64_t n_sum = 0;
  for (const auto& b : in.bb1) n_sum += b.n_k;
  bool count_ok = n_sum == in.bb3.size() && (!in.bb2 || in.bb2->size() == in.bb3.size());
  std::string count_detail = "sum N_k=" + std::to_string(n_sum) + " BB3=" + std::to_string(in.bb3.size());
  if (in.bb2) count_detail += " BB2=" + std::to_string(in.bb2->size());
  add("count", count_ok, count_ok ? "" : count_detail);

  bool recount_ok = true;
  std::string recount_detail;
  try {
    auto t = tally(in.bb3, pub.m);
    if (in.published_tally) recount_ok = *in.published_tally == t;
  } catch (const VerificationError& e) {
    recount_ok = false;
    recount_detail = e.what();
  }
  add("tally-recount", recount_ok, recount_detail);
  return rep;
}

}  // namespace evote
