#pragma once

#include <optional>

#include "evote/ea/boards.hpp"
#include "evote/zkp/membership.hpp"

namespace evote {

/// What the voter sends over the anonymous channel.
template <CyclicGroup G>
struct IndividualProofRequest {
  Commitment<G> c_rid;
  Commitment<G> c_v;
};

enum class IndividualResult { verified, proof_failed, unknown_commitment };

inline std::string_view result_name(IndividualResult r) {
  switch (r) {
    case IndividualResult::verified:
      return "verified";
    case IndividualResult::proof_failed:
      return "proof_failed";
    case IndividualResult::unknown_commitment:
      return "unknown_commitment";
  }
  return "?";
}

/// Verifier tables over the published BB3: Phi (rid + v) and Psi (rid). Built
/// once and shared by every voter's proof session.
template <PairingGroup G>
struct BoardVerifier {
  VerifierSetup<G> phi;
  VerifierSetup<G> psi;

  // Duplicate column values (only possible on a tampered board) collapse to one entry.
  static BoardVerifier build(const G& grp, const std::vector<Bb3Row<G>>& bb3, Drbg& rng) {
    auto phi_set = distinct(phi_column(bb3));
    auto psi_set = distinct(psi_column(bb3));
    return {VerifierSetup<G>::create(grp, phi_set, rng), VerifierSetup<G>::create(grp, psi_set, rng)};
  }

 private:
  static std::vector<Scalar> distinct(std::vector<Scalar> v) {
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  }
};

/// The authority's side: openings looked up by the requested commitments.
template <CyclicGroup G>
struct IndividualOpenings {
  Commitment<G> combined;
  Opening phi;  // (rid + v, r_I + r_v) for C_rid * C_v
  Opening psi;  // (rid, r_I) for C_rid
};

template <CyclicGroup G>
std::optional<IndividualOpenings<G>> lookup_openings(const G& grp, const EaStore<G>& store,
                                                     const IndividualProofRequest<G>& req) {
  const auto& F = grp.field();
  auto combined = combine(grp, req.c_rid, req.c_v);
  auto it = store.by_combined.find(to_hex(grp.serialize(combined.element)));
  auto jt = store.by_c_rid.find(to_hex(grp.serialize(req.c_rid.element)));
  if (it == store.by_combined.end() || jt == store.by_c_rid.end() || it->second != jt->second) return std::nullopt;
  const auto& s = store.accepted[it->second].rec.s;
  return IndividualOpenings<G>{combined, {F.add(s.rid, F.from_u64(s.v)), F.add(s.r_i, s.r_v)}, {s.rid, s.r_i}};
}

/// Two interactive membership proofs: C_rid * C_v opens into Phi, C_rid opens into Psi.
template <PairingGroup G>
IndividualResult individual_verify(const G& grp, const IndividualProofRequest<G>& req, const EaStore<G>& store,
                                   const BoardVerifier<G>& verifier, Drbg& rng) {
  auto open = lookup_openings(grp, store, req);
  if (!open) return IndividualResult::unknown_commitment;
  bool phi_ok = run_interactive(grp, verifier.phi, open->combined, open->phi, rng);
  bool psi_ok = run_interactive(grp, verifier.psi, req.c_rid, open->psi, rng);
  return phi_ok && psi_ok ? IndividualResult::verified : IndividualResult::proof_failed;
}

/// Storable variant: Fiat-Shamir transcripts bound to the request.
template <PairingGroup G>
struct IndividualProof {
  MembershipTranscript<G> phi;
  MembershipTranscript<G> psi;
};

template <CyclicGroup G>
Bytes individual_context(const G& grp, const IndividualProofRequest<G>& req, std::string_view column) {
  ByteWriter w;
  w.field(column).field(grp.serialize(req.c_rid.element)).field(grp.serialize(req.c_v.element));
  return w.take();
}

/// Returns nullopt when the request is unknown or a value is absent from its column.
template <PairingGroup G>
std::optional<IndividualProof<G>> prove_individual(const G& grp, const IndividualProofRequest<G>& req,
                                                   const EaStore<G>& store, const BoardVerifier<G>& verifier,
                                                   Drbg& rng) {
  auto open = lookup_openings(grp, store, req);
  if (!open || !verifier.phi.contains(open->phi.message) || !verifier.psi.contains(open->psi.message))
    return std::nullopt;
  return IndividualProof<G>{
      prove_noninteractive(grp, verifier.phi, open->combined, open->phi, individual_context(grp, req, "phi"), rng),
      prove_noninteractive(grp, verifier.psi, req.c_rid, open->psi, individual_context(grp, req, "psi"), rng)};
}

template <PairingGroup G>
bool check_individual_proof(const G& grp, const IndividualProofRequest<G>& req, const BoardVerifier<G>& verifier,
                            const IndividualProof<G>& proof) {
  auto combined = combine(grp, req.c_rid, req.c_v);
  return verify_noninteractive(grp, verifier.phi, combined, individual_context(grp, req, "phi"), proof.phi) &&
         verify_noninteractive(grp, verifier.psi, req.c_rid, individual_context(grp, req, "psi"), proof.psi);
}

}  // namespace evote
