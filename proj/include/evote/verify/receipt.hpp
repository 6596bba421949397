#pragma once

#include <string>
#include <vector>

#include "evote/protocol/record.hpp"

namespace evote {

struct ReceiptCheck {
  std::vector<std::string> failures;
  bool ok() const { return failures.empty(); }
};

/// Everything a voter can check at home without talking to the authority.
template <CyclicGroup G>
ReceiptCheck verify_receipt_local(const G& grp, const ElectionPublics<G>& pub, const VoterReceipt<G>& r) {
  ReceiptCheck out;
  const auto& F = grp.field();
  if (!(r.c_rid == r.token.c_rid)) out.failures.push_back("C_rid differs between token remnant and EVM receipt");
  if (!schnorr_verify(grp, pub.ea_sign, token_message(grp, r.token.c_rid, r.token.c_u), r.token.lambda))
    out.failures.push_back("token signature invalid");
  if (!ring_verify(grp, pub.evm_ring, receipt_message(grp, r.c_rid, r.c_v, r.proof), r.mu_receipt))
    out.failures.push_back("receipt signature invalid");
  if (!(combine(grp, r.token.c_u, r.c_v) == commit(grp, F.from(r.proof.w), r.proof.r_w)))
    out.failures.push_back("C_u * C_v does not open to (w, r_w)");
  if (r.proof.w_prime != mod_small(r.proof.w, pub.m)) out.failures.push_back("w' is not w mod m");
  return out;
}

}  // namespace evote
