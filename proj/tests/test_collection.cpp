#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

#include "evote/sim/election.hpp"

namespace evote {
namespace {

using sim::ElectionConfig;

ElectionConfig small_config(std::string seed) {
  ElectionConfig cfg;
  cfg.booths = 2;
  cfg.voters_per_booth = 12;
  cfg.m = 5;
  cfg.seed = std::move(seed);
  return cfg;
}

TEST(Shuffle, Basics) {
  Drbg rng("shuffle");
  std::vector<int> items(20);
  std::iota(items.begin(), items.end(), 0);
  auto out = shuffle(items, rng);
  EXPECT_NE(out, items);
  auto sorted = out;
  std::sort(sorted.begin(), sorted.end());
  EXPECT_EQ(sorted, items);

  Drbg a("fixed"), b("fixed");
  EXPECT_EQ(shuffle(items, a), shuffle(items, b));
  EXPECT_EQ(shuffle(std::vector<int>{7}, rng), std::vector<int>{7});
  EXPECT_TRUE(shuffle(std::vector<int>{}, rng).empty());
}

// Each of the 24 orderings of 4 items shows up 1/24 of the time within 3 sigma.
TEST(Shuffle, UniformOverPermutations) {
  Drbg rng("shuffle-uniform");
  const int trials = 10000;
  std::map<std::vector<int>, int> counts;
  for (int t = 0; t < trials; ++t) ++counts[shuffle(std::vector<int>{0, 1, 2, 3}, rng)];
  ASSERT_EQ(counts.size(), 24u);
  const double p = 1.0 / 24, mean = trials * p, sigma = std::sqrt(trials * p * (1 - p));
  for (const auto& [perm, n] : counts) EXPECT_NEAR(n, mean, 3 * sigma);
}

TEST(Proximity, CircularDistance) {
  BigInt q(101);
  EXPECT_TRUE(find_rid_proximity({BigInt(10), BigInt(20), BigInt(30)}, q, 5).empty());
  auto hits = find_rid_proximity({BigInt(10), BigInt(13), BigInt(50)}, q, 5);
  ASSERT_EQ(hits.size(), 1u);
  EXPECT_FALSE(hits[0].equal);
  // 99 and 1 are 3 apart around the circle
  EXPECT_EQ(find_rid_proximity({BigInt(99), BigInt(1)}, q, 5).size(), 1u);
  EXPECT_TRUE(find_rid_proximity({BigInt(99), BigInt(1)}, q, 3).empty());
  auto eq = find_rid_proximity({BigInt(40), BigInt(40), BigInt(80)}, q, 5);
  ASSERT_EQ(eq.size(), 1u);
  EXPECT_TRUE(eq[0].equal);
  EXPECT_TRUE(find_rid_proximity({BigInt(5)}, q, 5).empty());
}

TEST(Tally, Examples) {
  std::vector<std::uint32_t> votes{0, 1, 1, 4};
  auto t = tally_votes(votes, 5);
  EXPECT_EQ(t.counts, (std::vector<std::uint64_t>{1, 2, 0, 0, 1}));
  EXPECT_EQ(t.total, 4u);
  auto empty = tally_votes({}, 5);
  EXPECT_EQ(empty.counts, std::vector<std::uint64_t>(5, 0));
  std::vector<std::uint32_t> bad{5};
  EXPECT_THROW(tally_votes(bad, 5), VerificationError);
}

class CollectionTest : public ::testing::Test {
 protected:
  MockGroup grp = test_group(as_bytes("collection"));
};

TEST_F(CollectionTest, HonestElection) {
  auto run = sim::run_election(grp, small_config("honest"));
  EXPECT_TRUE(run.store.flags.empty());
  EXPECT_EQ(run.store.accepted.size(), 24u);
  for (const auto& c : run.closures) EXPECT_TRUE(c.flags.empty());
  for (const auto& r : run.audit_reports) EXPECT_TRUE(r.ok());

  const auto& bb3 = run.boards.bb3;
  ASSERT_EQ(bb3.size(), 24u);
  EXPECT_EQ(run.boards.bb2.size(), bb3.size());
  const auto& F = grp.field();
  for (std::size_t i = 0; i < bb3.size(); ++i) {
    EXPECT_EQ(bb3[i].rho, F.add(bb3[i].rid, F.from_u64(bb3[i].v)));
    EXPECT_EQ(bb3[i].h, record_hash(bb3[i].rid, bb3[i].v, 5));
    if (i) {
      EXPECT_TRUE(bb3[i - 1].rid < bb3[i].rid);
    }
  }
  for (std::size_t i = 1; i < run.boards.bb2.size(); ++i)
    EXPECT_LT(grp.serialize(run.boards.bb2[i - 1].c_rid.element), grp.serialize(run.boards.bb2[i].c_rid.element));

  EXPECT_EQ(run.published_tally, run.ground_truth());
  EXPECT_EQ(run.published_tally.total, 24u);

  // conservation: XOR of row hashes equals XOR of booth aggregates, sum N_k equals rows
  std::vector<Digest> hs, hk;
  std::uint64_t n = 0;
  for (const auto& r : bb3) hs.push_back(r.h);
  for (const auto& b : run.bb1) {
    hk.push_back(b.h_k);
    n += b.n_k;
  }
  EXPECT_EQ(xor_fold(hs), xor_fold(hk));
  EXPECT_EQ(n, bb3.size());
}

TEST_F(CollectionTest, IndexIntegrity) {
  auto run = sim::run_election(grp, small_config("index"));
  for (const auto* v : run.voters()) {
    ASSERT_TRUE(v->receipt);
    const auto& r = *v->receipt;
    auto key = to_hex(grp.serialize(combine(grp, r.c_rid, r.c_v).element));
    ASSERT_TRUE(run.store.by_combined.contains(key));
    const auto& stored = run.store.accepted[run.store.by_combined.at(key)];
    EXPECT_EQ(stored.rec.m.c_v, r.c_v);
    EXPECT_EQ(stored.rec.s.v, v->vote);
    EXPECT_EQ(run.store.by_c_rid.at(to_hex(grp.serialize(r.c_rid.element))), run.store.by_combined.at(key));
  }
}

TEST_F(CollectionTest, Deterministic) {
  auto a = sim::run_election(grp, small_config("same"));
  auto b = sim::run_election(grp, small_config("same"));
  ASSERT_EQ(a.boards.bb3.size(), b.boards.bb3.size());
  for (std::size_t i = 0; i < a.boards.bb3.size(); ++i) {
    EXPECT_EQ(a.boards.bb3[i].rid, b.boards.bb3[i].rid);
    EXPECT_EQ(a.boards.bb3[i].mu_h, b.boards.bb3[i].mu_h);
  }
  auto c = sim::run_election(grp, small_config("other"));
  EXPECT_FALSE(a.boards.bb3[0].rid == c.boards.bb3[0].rid);
}

TEST_F(CollectionTest, TamperedCiphertextFlagged) {
  auto run = sim::run_election(grp, small_config("cipher"));
  auto envelopes = run.envelopes;
  envelopes[3].ct.body[40] ^= 0x01;  // a byte inside the sealed record
  auto store = ea_ingest(grp, run.pub, run.keys.ea_enc.secret, run.batch.bb0, envelopes);
  ASSERT_EQ(store.flags.size(), 1u);
  EXPECT_EQ(store.flags[0].kind, IngestFlag::Kind::decrypt);
  EXPECT_EQ(store.flags[0].envelope, 3u);
  EXPECT_EQ(store.accepted.size(), envelopes.size() - 1);
}

// The authority re-encrypts a record with v changed but cannot fix the signed hash.
TEST_F(CollectionTest, ReencryptedVoteFlipFlagged) {
  auto run = sim::run_election(grp, small_config("flip"));
  auto envelopes = run.envelopes;
  auto rec = decode_sealed_record(grp, hybrid_decrypt(grp, run.keys.ea_enc.secret, envelopes[0].ct));
  rec.s.v = (rec.s.v + 1) % 5;
  Drbg rng("flip-enc");
  envelopes[0].ct = hybrid_encrypt(grp, run.pub.ea_enc, encode(grp, rec), rng);
  auto store = ea_ingest(grp, run.pub, run.keys.ea_enc.secret, run.batch.bb0, envelopes);
  ASSERT_EQ(store.flags.size(), 1u);
  EXPECT_EQ(store.flags[0].kind, IngestFlag::Kind::commitment);
}

TEST_F(CollectionTest, BadAcknowledgmentAndUnknownKeyFlagged) {
  auto run = sim::run_election(grp, small_config("ack"));
  auto envelopes = run.envelopes;
  std::swap(envelopes[0].sigma_blinded, envelopes[1].sigma_blinded);
  auto store = ea_ingest(grp, run.pub, run.keys.ea_enc.secret, run.batch.bb0, envelopes);
  ASSERT_EQ(store.flags.size(), 2u);
  EXPECT_EQ(store.flags[0].kind, IngestFlag::Kind::ack_signature);

  auto used = decode_sealed_record(grp, hybrid_decrypt(grp, run.keys.ea_enc.secret, run.envelopes[2].ct)).s.p_ik;
  std::vector<MockGroup::Element> short_bb0;
  for (const auto& p : run.batch.bb0)
    if (!(p == used)) short_bb0.push_back(p);
  ASSERT_EQ(short_bb0.size() + 1, run.batch.bb0.size());
  auto store2 = ea_ingest(grp, run.pub, run.keys.ea_enc.secret, short_bb0, run.envelopes);
  ASSERT_EQ(store2.flags.size(), 1u);
  EXPECT_EQ(store2.flags[0].kind, IngestFlag::Kind::unknown_ephemeral_key);
  EXPECT_EQ(store2.flags[0].envelope, 2u);
}

TEST_F(CollectionTest, RidProximityFlagged) {
  auto cfg = small_config("collide");
  auto run = sim::run_election(grp, cfg, {}, {}, std::pair{sim::VoterId{0, 2}, sim::VoterId{1, 5}});
  ASSERT_EQ(run.store.flags.size(), 2u);
  for (const auto& f : run.store.flags) EXPECT_EQ(f.kind, IngestFlag::Kind::rid_proximity);
  EXPECT_EQ(run.boards.bb3.size(), 22u);
  EXPECT_EQ(run.boards.bb2.size(), 22u);
}

TEST_F(CollectionTest, Bb2Optional) {
  auto cfg = small_config("nobb2");
  cfg.publish_bb2 = false;
  auto run = sim::run_election(grp, cfg);
  EXPECT_TRUE(run.boards.bb2.empty());
  EXPECT_EQ(run.boards.bb3.size(), 24u);
}

}  // namespace
}  // namespace evote
