#pragma once

#include <algorithm>
#include <vector>

#include "evote/ea/ingest.hpp"

namespace evote {

template <CyclicGroup G>
struct Bb3Row {
  Scalar rid;
  std::uint32_t v = 0;
  Scalar rho;  // rid + v mod q
  Digest h{};
  RingSignature mu_h;
  typename G::Element sigma_ack;
  typename G::Element p_ik;  // signer key of sigma_ack, must appear in BB0
};

template <CyclicGroup G>
struct Bb2Row {
  Commitment<G> c_rid;
  BigInt w;
};

template <CyclicGroup G>
struct PublishedBoards {
  std::vector<Bb2Row<G>> bb2;  // sorted by serialized C_rid
  std::vector<Bb3Row<G>> bb3;  // sorted by rid
};

template <CyclicGroup G>
PublishedBoards<G> publish_boards(const G& grp, const EaStore<G>& store) {
  const auto& F = grp.field();
  PublishedBoards<G> out;
  for (const auto& r : store.accepted) {
    const auto& s = r.rec.s;
    out.bb3.push_back({s.rid, s.v, F.add(s.rid, F.from_u64(s.v)), r.rec.m.h, r.rec.m.mu_h, r.sigma_ack, s.p_ik});
    out.bb2.push_back({r.rec.m.c_rid, r.rec.m.proof.w});
  }
  std::sort(out.bb3.begin(), out.bb3.end(), [](const auto& a, const auto& b) { return a.rid < b.rid; });
  std::sort(out.bb2.begin(), out.bb2.end(), [&](const auto& a, const auto& b) {
    return grp.serialize(a.c_rid.element) < grp.serialize(b.c_rid.element);
  });
  return out;
}

/// Psi: the rid column.
template <CyclicGroup G>
std::vector<Scalar> psi_column(const std::vector<Bb3Row<G>>& bb3) {
  std::vector<Scalar> out;
  for (const auto& r : bb3) out.push_back(r.rid);
  return out;
}

/// Phi: the rid + v column.
template <CyclicGroup G>
std::vector<Scalar> phi_column(const std::vector<Bb3Row<G>>& bb3) {
  std::vector<Scalar> out;
  for (const auto& r : bb3) out.push_back(r.rho);
  return out;
}

struct TallyResult {
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  friend bool operator==(const TallyResult&, const TallyResult&) = default;
};

inline TallyResult tally_votes(std::span<const std::uint32_t> votes, std::uint32_t m) {
  TallyResult t{std::vector<std::uint64_t>(m, 0), 0};
  for (auto v : votes) {
    if (v >= m) throw VerificationError("vote out of range in tally table");
    ++t.counts[v];
    ++t.total;
  }
  return t;
}

template <CyclicGroup G>
TallyResult tally(const std::vector<Bb3Row<G>>& bb3, std::uint32_t m) {
  std::vector<std::uint32_t> votes;
  for (const auto& r : bb3) votes.push_back(r.v);
  return tally_votes(votes, m);
}

}  // namespace evote
