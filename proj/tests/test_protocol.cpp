#include <gtest/gtest.h>

#include <algorithm>

#include "evote/group/setup.hpp"
#include "evote/protocol/booth.hpp"

namespace evote {
namespace {

class ProtocolTest : public ::testing::Test {
 protected:
  MockGroup grp = test_group(as_bytes("protocol"));
  const ScalarField& F = grp.field();
  Drbg rng{"protocol"};
  AuthorityKeys<MockGroup> keys = generate_authority(grp, 2, rng);
  ElectionPublics<MockGroup> pub = keys.publics(5);

  Evm<MockGroup> make_evm(std::uint32_t k) { return Evm<MockGroup>(grp, pub, k, keys.evm[k].secret, rng.derive("evm")); }
  PoDesk<MockGroup> make_po(std::uint32_t k) { return PoDesk<MockGroup>(grp, k, keys.po[k].secret); }
  Token<MockGroup> token(std::uint32_t k) { return make_token(grp, keys.ea_sign, keys.po[k].pub, k, pub.m, rng); }

  // Voter walks through PO desk and EVM, accepting w' when it matches their own check.
  typename Evm<MockGroup>::Completed vote(PoDesk<MockGroup>& po, Evm<MockGroup>& evm, Token<MockGroup> t,
                                          std::uint32_t v) {
    po.accept_chit(t.chit, true);
    evm.commit_vote(v);
    std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
    auto shown = evm.scan_token(t.main, secrets);
    EXPECT_EQ(shown, (t.secrets.u_prime + v) % pub.m);
    auto done = evm.confirm();
    po.acknowledge(done.brid);
    return done;
  }
};

TEST_F(ProtocolTest, GenerateTokens) {
  auto batch = generate_tokens(grp, keys, 10, 5, rng);
  ASSERT_EQ(batch.per_booth.size(), 2u);
  EXPECT_EQ(batch.bb0.size(), 20u);
  std::vector<Bytes> keys_in_tokens, keys_in_bb0;
  for (const auto& booth : batch.per_booth) {
    EXPECT_EQ(booth.size(), 10u);
    for (const auto& t : booth) {
      auto report = audit_token(grp, pub, t);
      EXPECT_TRUE(report.ok()) << (report.failures.empty() ? "" : report.failures[0]);
      EXPECT_TRUE(verify_opening(grp, t.main.c_u, {t.secrets.u, t.secrets.r_u}));
      EXPECT_EQ(t.secrets.u_prime, mod_small(t.secrets.u.value(), 5));
      keys_in_tokens.push_back(grp.serialize(t.secrets.p_ik));
    }
  }
  for (const auto& p : batch.bb0) keys_in_bb0.push_back(grp.serialize(p));
  EXPECT_NE(keys_in_bb0, keys_in_tokens);  // shuffled
  std::sort(keys_in_tokens.begin(), keys_in_tokens.end());
  std::sort(keys_in_bb0.begin(), keys_in_bb0.end());
  EXPECT_EQ(keys_in_bb0, keys_in_tokens);

  EXPECT_THROW(generate_tokens(grp, keys, 10, 1, rng), ProtocolError);
  EXPECT_THROW(generate_tokens(grp, keys, 0, 5, rng), ProtocolError);
}

TEST_F(ProtocolTest, AuditFlagsMutations) {
  auto t = token(0);
  EXPECT_TRUE(audit_token(grp, pub, t).ok());

  auto bad_cu = t;
  bad_cu.main.c_u = commit(grp, F.random(rng), F.random(rng));
  auto r = audit_token(grp, pub, bad_cu);
  EXPECT_FALSE(r.ok());
  EXPECT_NE(std::find(r.failures.begin(), r.failures.end(), "C_u does not open to u"), r.failures.end());

  auto bad_up = t;
  bad_up.secrets.u_prime = (bad_up.secrets.u_prime + 1) % pub.m;
  r = audit_token(grp, pub, bad_up);
  ASSERT_EQ(r.failures.size(), 1u);
  EXPECT_EQ(r.failures[0], "u' is not u mod m");

  auto wrong_booth = t;
  wrong_booth.booth = 1;
  EXPECT_FALSE(audit_token(grp, pub, wrong_booth).ok());
}

TEST_F(ProtocolTest, TokenSerialization) {
  auto t = token(1);
  auto main = decode_commitments(grp, encode_commitments(grp, t.main));
  EXPECT_EQ(main.c_rid, t.main.c_rid);
  EXPECT_EQ(main.lambda, t.main.lambda);
  auto s = decode_secrets(grp, encode_secrets(grp, t.secrets));
  EXPECT_EQ(s.rid, t.secrets.rid);
  EXPECT_EQ(s.u_prime, t.secrets.u_prime);
  EXPECT_EQ(s.brid, t.secrets.brid);
  EXPECT_EQ(s.p_ik, t.secrets.p_ik);
  auto c = decode_chit(F, encode_chit(F, t.chit));
  EXPECT_EQ(c.r_p, t.chit.r_p);
  EXPECT_EQ(c.brid, t.chit.brid);

  auto wire = encode_secrets(grp, t.secrets);
  wire.push_back(1);
  EXPECT_THROW(decode_secrets(grp, wire), FormatError);
}

TEST(TokenSize, ProductionPartsUnderOneKilobyte) {
  SupersingularGroup grp(as_bytes("size"));
  Drbg rng("size");
  auto keys = generate_authority(grp, 1, rng);
  auto t = make_token(grp, keys.ea_sign, keys.po[0].pub, 0, 5, rng);
  EXPECT_LE(encode_commitments(grp, t.main).size(), 1024u);
  EXPECT_LE(encode_secrets(grp, t.secrets).size(), 1024u);
  EXPECT_LE(encode_chit(grp.field(), t.chit).size(), 1024u);
  EXPECT_TRUE(audit_token(grp, keys.publics(5), t).ok());
}

TEST_F(ProtocolTest, PoDeskFreshness) {
  auto po = make_po(0);
  auto t = token(0);
  EXPECT_THROW(po.accept_chit(t.chit, false), ProtocolError);
  po.accept_chit(t.chit, true);
  EXPECT_TRUE(po.has_slot(t.chit.brid));
  EXPECT_THROW(po.accept_chit(t.chit, true), ProtocolError);

  auto audited = token(0);
  po.mark_audited(audited.chit.brid);
  EXPECT_THROW(po.accept_chit(audited.chit, true), ProtocolError);

  EXPECT_THROW(po.acknowledge(audited.chit.brid), ProtocolError);
  po.acknowledge(t.chit.brid);
  EXPECT_THROW(po.acknowledge(t.chit.brid), ProtocolError);
  ASSERT_EQ(po.printouts().size(), 1u);

  // the printout unblinds to a valid signature on rid under p_ik
  auto sig = unblind(grp, po.printouts()[0].sigma_blinded, t.secrets.b, t.secrets.p_ik);
  EXPECT_TRUE(bverify(grp, t.secrets.p_ik, t.secrets.rid, sig));
}

TEST_F(ProtocolTest, SessionProducesConsistentReceipt) {
  auto po = make_po(0);
  auto evm = make_evm(0);
  for (std::uint32_t v = 0; v < pub.m; ++v) {
    auto t = token(0);
    auto done = vote(po, evm, t, v);
    const auto& r = done.receipt;
    EXPECT_EQ(r.c_rid, r.token.c_rid);
    EXPECT_EQ(combine(grp, r.token.c_u, r.c_v), commit(grp, F.from(r.proof.w), r.proof.r_w));
    EXPECT_EQ(r.proof.w, t.secrets.u.value() + v);
    EXPECT_EQ(r.proof.w_prime, mod_small(r.proof.w, pub.m));
    EXPECT_EQ(r.proof.w_prime, (t.secrets.u_prime + v) % pub.m);
    EXPECT_TRUE(ring_verify(grp, pub.evm_ring, receipt_message(grp, r.c_rid, r.c_v, r.proof), r.mu_receipt));
    EXPECT_FALSE(evm.holds_token_secrets());
    EXPECT_EQ(evm.phase(), Evm<MockGroup>::Phase::ready);
  }
  EXPECT_EQ(evm.records().size(), 5u);
}

TEST_F(ProtocolTest, SealedRecordDecryptsForAuthority) {
  auto po = make_po(1);
  auto evm = make_evm(1);
  auto t = token(1);
  auto done = vote(po, evm, t, 3);
  const auto& rec = evm.records().at(0);
  EXPECT_EQ(rec.brid, t.secrets.brid);
  auto sealed = decode_sealed_record(grp, hybrid_decrypt(grp, keys.ea_enc.secret, rec.ct));
  EXPECT_EQ(sealed.s.rid, t.secrets.rid);
  EXPECT_EQ(sealed.s.v, 3u);
  EXPECT_EQ(sealed.s.b, t.secrets.b);
  EXPECT_EQ(sealed.m.c_v, done.receipt.c_v);
  EXPECT_EQ(sealed.m.h, record_hash(t.secrets.rid, 3, pub.m));
  EXPECT_EQ(rec.h, sealed.m.h);
  EXPECT_TRUE(verify_opening(grp, sealed.m.c_v, {F.from_u64(3), sealed.s.r_v}));
  EXPECT_TRUE(ring_verify(grp, pub.evm_ring, record_hash_message(sealed.m.h), sealed.m.mu_h));
}

TEST_F(ProtocolTest, PhaseOrderEnforced) {
  auto evm = make_evm(0);
  auto t = token(0);
  std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
  EXPECT_THROW(evm.scan_token(t.main, secrets), ProtocolError);
  EXPECT_TRUE(secrets.has_value());  // nothing was read
  EXPECT_THROW(evm.confirm(), ProtocolError);
  EXPECT_THROW(evm.decline(), ProtocolError);
  evm.commit_vote(1);
  EXPECT_THROW(evm.commit_vote(2), ProtocolError);
  EXPECT_THROW(evm.confirm(), ProtocolError);
  evm.scan_token(t.main, secrets);
  EXPECT_FALSE(secrets.has_value());
  EXPECT_TRUE(evm.holds_token_secrets());
  evm.confirm();
  EXPECT_FALSE(evm.holds_token_secrets());
}

TEST_F(ProtocolTest, VoteRangeChecked) {
  auto evm = make_evm(0);
  EXPECT_THROW(evm.commit_vote(5), ProtocolError);
}

TEST_F(ProtocolTest, TamperedTokenAbortsSession) {
  auto evm = make_evm(0);
  auto t = token(0);
  t.main.c_u = commit(grp, F.random(rng), F.random(rng));
  evm.commit_vote(2);
  std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
  EXPECT_THROW(evm.scan_token(t.main, secrets), ProtocolError);
  EXPECT_FALSE(secrets.has_value());
  EXPECT_FALSE(evm.holds_token_secrets());
  EXPECT_EQ(evm.phase(), Evm<MockGroup>::Phase::ready);
  EXPECT_TRUE(evm.records().empty());

  auto forged = token(0);
  forged.main.lambda.s = F.add(forged.main.lambda.s, F.one());
  evm.commit_vote(2);
  secrets = forged.secrets;
  EXPECT_THROW(evm.scan_token(forged.main, secrets), ProtocolError);
  EXPECT_TRUE(evm.records().empty());
}

TEST_F(ProtocolTest, DeclineRecordsNothing) {
  auto evm = make_evm(0);
  auto t = token(0);
  evm.commit_vote(4);
  std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
  evm.scan_token(t.main, secrets);
  evm.decline();
  EXPECT_TRUE(evm.records().empty());
  EXPECT_EQ(evm.declined(), 1u);
  EXPECT_FALSE(evm.holds_token_secrets());
}

TEST_F(ProtocolTest, EvmKeyMustMatchRing) {
  EXPECT_THROW(Evm<MockGroup>(grp, pub, 0, keys.evm[1].secret, rng.derive("x")), ProtocolError);
}

TEST_F(ProtocolTest, CloseBooth) {
  auto po = make_po(0);
  auto evm = make_evm(0);
  std::vector<Digest> acked;
  Bytes unacked;
  for (int i = 0; i < 4; ++i) {
    auto t = token(0);
    po.accept_chit(t.chit, true);
    evm.commit_vote(i % pub.m);
    std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
    evm.scan_token(t.main, secrets);
    auto done = evm.confirm();
    if (i == 2) {
      unacked = done.brid;  // PO channel message lost
    } else {
      po.acknowledge(done.brid);
      acked.push_back(evm.records().back().h);
    }
  }
  auto closure = close_booth(grp, pub, 0, keys.evm[0].secret, keys.po[0].secret, evm.records(), po.printouts(), rng);
  EXPECT_EQ(closure.row.n_k, 3u);
  EXPECT_EQ(closure.envelopes.size(), 3u);
  ASSERT_EQ(closure.flags.size(), 1u);
  EXPECT_EQ(closure.flags[0].kind, BoothFlag::Kind::unacknowledged);
  EXPECT_EQ(closure.flags[0].brid, unacked);
  EXPECT_EQ(closure.row.h_k, xor_fold(acked));
  EXPECT_TRUE(ring_verify(grp, pub.evm_ring, booth_hash_message(0, closure.row.h_k), closure.row.mu_hk));
  EXPECT_TRUE(ring_verify(grp, pub.po_ring, booth_count_message(0, 3), closure.row.sigma_nk));
  EXPECT_FALSE(ring_verify(grp, pub.po_ring, booth_count_message(0, 4), closure.row.sigma_nk));
}

TEST_F(ProtocolTest, CloseEmptyBoothAndStrayAck) {
  auto empty = close_booth(grp, pub, 1, keys.evm[1].secret, keys.po[1].secret, {}, {}, rng);
  EXPECT_EQ(empty.row.n_k, 0u);
  EXPECT_EQ(empty.row.h_k, Digest{});
  EXPECT_TRUE(empty.flags.empty());

  std::vector<Printout> stray{{Bytes{1, 2, 3}, Bytes{4}}};
  auto c = close_booth(grp, pub, 1, keys.evm[1].secret, keys.po[1].secret, {}, stray, rng);
  ASSERT_EQ(c.flags.size(), 1u);
  EXPECT_EQ(c.flags[0].kind, BoothFlag::Kind::unmatched_ack);
}

// Toy group arithmetic from the vote-commitment completeness example:
// m = 5, u = 9 (u' = 4), v = 3 gives w = 12 and w' = 2 = (4 + 3) mod 5.
TEST(ToySession, CompletenessExample) {
  auto grp = toy_group();
  const auto& F = grp.field();
  Drbg rng("toy-session");
  auto keys = generate_authority(grp, 1, rng);
  auto pub = keys.publics(5);
  auto t = make_token(grp, keys.ea_sign, keys.po[0].pub, 0, 5, rng);
  t.secrets.u = F.from_u64(9);
  t.secrets.u_prime = 4;
  t.main.c_u = commit(grp, t.secrets.u, t.secrets.r_u);
  t.main.lambda = schnorr_sign(grp, keys.ea_sign, token_message(grp, t.main.c_rid, t.main.c_u), rng);
  ASSERT_TRUE(audit_token(grp, pub, t).ok());

  Evm<MockGroup> evm(grp, pub, 0, keys.evm[0].secret, rng.derive("evm"));
  evm.commit_vote(3);
  std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
  EXPECT_EQ(evm.scan_token(t.main, secrets), 2u);
  auto done = evm.confirm();
  EXPECT_EQ(done.receipt.proof.w, 12);
  EXPECT_EQ(done.receipt.proof.w_prime, 2u);
  // g^12 = g^1 in the order-11 group, so the combined commitment still opens to w
  EXPECT_EQ(combine(grp, t.main.c_u, done.receipt.c_v), commit(grp, F.from(done.receipt.proof.w), done.receipt.proof.r_w));
}

TEST(ToySession, ZeroVoteZeroMask) {
  auto grp = toy_group();
  const auto& F = grp.field();
  Drbg rng("toy-zero");
  auto keys = generate_authority(grp, 1, rng);
  auto pub = keys.publics(5);
  auto t = make_token(grp, keys.ea_sign, keys.po[0].pub, 0, 5, rng);
  t.secrets.u = F.from_u64(10);
  t.secrets.u_prime = 0;
  t.main.c_u = commit(grp, t.secrets.u, t.secrets.r_u);
  t.main.lambda = schnorr_sign(grp, keys.ea_sign, token_message(grp, t.main.c_rid, t.main.c_u), rng);
  Evm<MockGroup> evm(grp, pub, 0, keys.evm[0].secret, rng.derive("evm"));
  evm.commit_vote(0);
  std::optional<TokenSecrets<MockGroup>> secrets = t.secrets;
  EXPECT_EQ(evm.scan_token(t.main, secrets), 0u);
}

// Vote-commitment soundness at q=11, m=3: any opening of C_v other than the
// real one, together with the published (C_u, P), pins down log_g h.
TEST(ToySession, SoundnessOracle) {
  auto grp = toy_group();
  const auto& F = grp.field();
  const auto log_h = MockOracle::log_h(grp);
  int alternatives = 0;
  for (std::uint64_t u = 0; u < 11; ++u) {
    for (std::uint64_t v = 0; v < 3; ++v) {
      for (std::uint64_t r_u = 0; r_u < 11; r_u += 5) {
        for (std::uint64_t r_v = 0; r_v < 11; ++r_v) {
          auto c_u = commit(grp, F.from_u64(u), F.from_u64(r_u));
          auto c_v = commit(grp, F.from_u64(v), F.from_u64(r_v));
          auto w = F.from_u64(u + v);
          auto r_w = F.from_u64(r_u + r_v);
          ASSERT_EQ(combine(grp, c_u, c_v), commit(grp, w, r_w));
          for (std::uint64_t vt = 0; vt < 3; ++vt) {
            if (vt == v) continue;
            for (std::uint64_t rt = 0; rt < 11; ++rt) {
              if (!verify_opening(grp, c_v, {F.from_u64(vt), F.from_u64(rt)})) continue;
              ++alternatives;
              auto extracted = F.div(F.sub(F.from_u64(v), F.from_u64(vt)), F.sub(F.from_u64(rt), F.from_u64(r_v)));
              EXPECT_EQ(extracted, log_h);
            }
          }
        }
      }
    }
  }
  EXPECT_GT(alternatives, 0);
}

}  // namespace
}  // namespace evote
