#include <gtest/gtest.h>

#include <algorithm>

#include "evote/verify/tamper.hpp"

namespace evote {
namespace {

using sim::ElectionConfig;
using sim::SessionStatus;
using sim::VoterId;

ElectionConfig small_config(std::string seed) {
  ElectionConfig cfg;
  cfg.booths = 3;
  cfg.voters_per_booth = 10;
  cfg.m = 4;
  cfg.seed = std::move(seed);
  return cfg;
}

class VerificationTest : public ::testing::Test {
 protected:
  MockGroup grp = test_group(as_bytes("verification"));

  std::vector<std::string> sorted(std::vector<std::string> v) {
    std::sort(v.begin(), v.end());
    return v;
  }
};

TEST_F(VerificationTest, ReceiptChecks) {
  auto run = sim::run_election(grp, small_config("receipt"));
  auto voters = run.voters();
  for (const auto* v : voters) {
    ASSERT_TRUE(v->receipt);
    EXPECT_TRUE(verify_receipt_local(grp, run.pub, *v->receipt).ok());
  }

  auto r = *voters[0]->receipt;
  r.proof.w += 1;
  auto bad = verify_receipt_local(grp, run.pub, r);
  EXPECT_FALSE(bad.ok());
  EXPECT_NE(std::find(bad.failures.begin(), bad.failures.end(), "C_u * C_v does not open to (w, r_w)"),
            bad.failures.end());
  EXPECT_NE(std::find(bad.failures.begin(), bad.failures.end(), "receipt signature invalid"), bad.failures.end());

  auto swapped = *voters[0]->receipt;
  swapped.c_rid = voters[1]->receipt->c_rid;
  auto s = verify_receipt_local(grp, run.pub, swapped);
  EXPECT_EQ(s.failures.front(), "C_rid differs between token remnant and EVM receipt");
}

TEST_F(VerificationTest, IndividualHonest) {
  auto run = sim::run_election(grp, small_config("individual"));
  Drbg rng("iv");
  auto results = sim::verify_voters(grp, run, run.boards.bb3, rng);
  EXPECT_EQ(results.size(), 30u);
  for (const auto& [id, res] : results) EXPECT_EQ(res, IndividualResult::verified) << id.booth << "/" << id.index;

  // the non-interactive form agrees
  auto verifier = BoardVerifier<MockGroup>::build(grp, run.boards.bb3, rng);
  auto req = sim::request_for(*run.voters()[4]->receipt);
  auto proof = prove_individual(grp, req, run.store, verifier, rng);
  ASSERT_TRUE(proof);
  EXPECT_TRUE(check_individual_proof(grp, req, verifier, *proof));
  auto other = sim::request_for(*run.voters()[5]->receipt);
  EXPECT_FALSE(check_individual_proof(grp, other, verifier, *proof));
}

TEST_F(VerificationTest, IndividualUnknownCommitment) {
  auto run = sim::run_election(grp, small_config("unknown"));
  Drbg rng("unknown");
  auto verifier = BoardVerifier<MockGroup>::build(grp, run.boards.bb3, rng);
  auto req = sim::request_for(*run.voters()[0]->receipt);
  req.c_v = commit(grp, grp.field().from_u64(1), grp.field().random(rng));
  EXPECT_EQ(individual_verify(grp, req, run.store, verifier, rng), IndividualResult::unknown_commitment);
}

TEST_F(VerificationTest, IndividualAlteredAndDeleted) {
  auto run = sim::run_election(grp, small_config("altered"));
  Drbg rng("alter");
  auto bb3 = run.boards.bb3;
  auto victim_rid = bb3[7].rid;
  bb3[7].v = (bb3[7].v + 1) % 4;
  bb3[7].rho = grp.field().add(bb3[7].rid, grp.field().from_u64(bb3[7].v));
  bb3.erase(bb3.begin() + 2);
  auto deleted_rid = run.boards.bb3[2].rid;

  auto results = sim::verify_voters(grp, run, bb3, rng);
  int failed = 0;
  for (const auto* v : run.voters()) {
    const auto& stored = run.store.accepted[run.store.by_c_rid.at(to_hex(grp.serialize(v->receipt->c_rid.element)))];
    bool victim = stored.rec.s.rid == victim_rid || stored.rec.s.rid == deleted_rid;
    EXPECT_EQ(results.at(v->id) == IndividualResult::verified, !victim);
    failed += victim ? 1 : 0;
  }
  EXPECT_EQ(failed, 2);
}

TEST_F(VerificationTest, UniversalHonest) {
  auto run = sim::run_election(grp, small_config("universal"));
  auto rep = universal_verify(grp, run.pub, run.universal_inputs());
  EXPECT_EQ(rep.checks.size(), 8u);
  EXPECT_TRUE(rep.pass()) << rep.render();
  EXPECT_NE(rep.render().find("overall=PASS"), std::string::npos);

  auto cfg = small_config("universal-nobb2");
  cfg.publish_bb2 = false;
  auto run2 = sim::run_election(grp, cfg);
  EXPECT_TRUE(universal_verify(grp, run2.pub, run2.universal_inputs()).pass());
}

TEST_F(VerificationTest, UniversalTallyMismatch) {
  auto run = sim::run_election(grp, small_config("tally"));
  ++run.published_tally.counts[0];
  auto rep = universal_verify(grp, run.pub, run.universal_inputs());
  EXPECT_EQ(rep.failed(), std::vector<std::string>{"tally-recount"});
}

TEST_F(VerificationTest, UniversalBb1Forgery) {
  auto run = sim::run_election(grp, small_config("bb1"));
  run.bb1[1].n_k += 1;
  auto rep = universal_verify(grp, run.pub, run.universal_inputs());
  EXPECT_EQ(sorted(rep.failed()), sorted({"group-signature", "count"}));
}

class BoardAttackTest : public VerificationTest, public ::testing::WithParamInterface<Attack> {};

TEST_P(BoardAttackTest, DetectedWithExpectedFlags) {
  for (int trial = 0; trial < 6; ++trial) {
    auto run = sim::run_election(grp, small_config("board-" + std::to_string(trial)));
    Drbg rng("attack-" + std::to_string(trial));
    auto delta = tamper_boards(grp, run.pub, run.store, run.boards, run.published_tally, GetParam(), rng);
    auto rep = universal_verify(grp, run.pub, run.universal_inputs());
    for (const auto& name : delta.universal_flags) EXPECT_FALSE(rep.passed(name)) << name << "\n" << rep.render();
    EXPECT_TRUE(rep.passed("tally-recount"));
    auto individual = sim::verify_voters(grp, run, run.boards.bb3, rng);
    EXPECT_TRUE(attack_detected(grp, delta, rep, run, individual));
    for (const auto& c : delta.victim_commitments)
      for (const auto* v : run.voters()) {
        if (grp.serialize(v->receipt->c_rid.element) == c) {
          EXPECT_NE(individual.at(v->id), IndividualResult::verified);
        }
      }
  }
}

INSTANTIATE_TEST_SUITE_P(All, BoardAttackTest,
                         ::testing::Values(Attack::inject_row, Attack::delete_row, Attack::alter_vote),
                         [](const auto& info) { return std::string(attack_name(info.param)); });

TEST_F(VerificationTest, AttackNames) {
  for (auto a : kAllAttacks) EXPECT_EQ(parse_attack(attack_name(a)), a);
  EXPECT_THROW(parse_attack("flip_everything"), FormatError);
}

struct SessionCase {
  Attack attack;
  bool po_colludes;
};

class SessionAttackTest : public VerificationTest, public ::testing::WithParamInterface<SessionCase> {};

TEST_P(SessionAttackTest, Detected) {
  auto [attack, colludes] = GetParam();
  for (int trial = 0; trial < 4; ++trial) {
    auto cfg = small_config("session-" + std::to_string(trial));
    Drbg rng("plan-" + std::to_string(trial));
    auto plan = plan_session_attack(attack, cfg, rng, colludes);
    auto run = sim::run_election(grp, cfg, {}, plan.hooks, plan.collide);
    auto rep = universal_verify(grp, run.pub, run.universal_inputs());
    auto individual = sim::verify_voters(grp, run, run.boards.bb3, rng);
    EXPECT_TRUE(attack_detected(grp, plan.delta, rep, run, individual)) << plan.delta.expected;

    const auto& victim = plan.delta.victim_voters.front();
    const sim::VoterOutcome<MockGroup>* outcome = nullptr;
    for (const auto* v : run.voters())
      if (v->id == victim) outcome = v;
    ASSERT_NE(outcome, nullptr);

    switch (attack) {
      case Attack::replay_token:
        if (colludes) {
          const auto& flags = run.closures[victim.booth].flags;
          EXPECT_TRUE(std::any_of(flags.begin(), flags.end(),
                                  [](const auto& f) { return f.kind == BoothFlag::Kind::duplicate_ack; }));
          EXPECT_NE(individual.at(victim), IndividualResult::verified);
        } else {
          EXPECT_EQ(outcome->status, SessionStatus::rejected_by_po);
        }
        EXPECT_TRUE(rep.pass()) << rep.render();
        break;
      case Attack::malform_token:
        EXPECT_EQ(outcome->status, SessionStatus::rejected_by_evm);
        EXPECT_FALSE(outcome->receipt);
        EXPECT_TRUE(rep.pass());
        break;
      case Attack::collide_rid:
        EXPECT_EQ(run.store.flags.size(), 2u);
        for (const auto& id : plan.delta.victim_voters) EXPECT_NE(individual.at(id), IndividualResult::verified);
        for (const auto& name : plan.delta.universal_flags) EXPECT_FALSE(rep.passed(name)) << name;
        break;
      case Attack::drop_ack: {
        const auto& flags = run.closures[victim.booth].flags;
        ASSERT_EQ(flags.size(), 1u);
        EXPECT_EQ(flags[0].kind, BoothFlag::Kind::unacknowledged);
        EXPECT_NE(individual.at(victim), IndividualResult::verified);
        EXPECT_TRUE(rep.pass());
        break;
      }
      default:
        FAIL();
    }
  }
}

INSTANTIATE_TEST_SUITE_P(All, SessionAttackTest,
                         ::testing::Values(SessionCase{Attack::replay_token, false}, SessionCase{Attack::replay_token, true},
                                           SessionCase{Attack::malform_token, false},
                                           SessionCase{Attack::collide_rid, false}, SessionCase{Attack::drop_ack, false}),
                         [](const auto& info) {
                           return std::string(attack_name(info.param.attack)) +
                                  (info.param.po_colludes ? "_colluding_po" : "");
                         });

// Both replaying voters choose the same candidate: the shared brid still
// surfaces as a duplicate acknowledgment and the second record is dropped.
TEST_F(VerificationTest, ReplaySameVote) {
  auto cfg = small_config("replay-same");
  sim::SessionHooks hooks;
  VoterId a{1, 2}, b{1, 6};
  hooks.replay = {a, b};
  hooks.po_colludes = true;
  auto same = [](VoterId id, Drbg& rng) {
    auto v = static_cast<std::uint32_t>(rng.uniform(4));
    return id.booth == 1 && (id.index == 2 || id.index == 6) ? 3u : v;
  };
  auto run = sim::run_election(grp, cfg, same, hooks);
  const auto& flags = run.closures[1].flags;
  ASSERT_EQ(flags.size(), 2u);
  EXPECT_EQ(flags[0].kind, BoothFlag::Kind::duplicate_ack);
  EXPECT_EQ(flags[1].kind, BoothFlag::Kind::unacknowledged);
  Drbg rng("replay-same");
  auto individual = sim::verify_voters(grp, run, run.boards.bb3, rng);
  EXPECT_EQ(individual.at(a), IndividualResult::verified);
  EXPECT_EQ(individual.at(b), IndividualResult::unknown_commitment);
  EXPECT_TRUE(universal_verify(grp, run.pub, run.universal_inputs()).pass());
}

TEST_F(VerificationTest, HonestElectionNotFlagged) {
  for (int trial = 0; trial < 5; ++trial) {
    auto run = sim::run_election(grp, small_config("honest-" + std::to_string(trial)));
    Drbg rng("honest");
    auto rep = universal_verify(grp, run.pub, run.universal_inputs());
    auto individual = sim::verify_voters(grp, run, run.boards.bb3, rng);
    EXPECT_FALSE(attack_detected(grp, TamperDelta{}, rep, run, individual));
  }
}

TEST_F(VerificationTest, ProductionGroupElection) {
  auto prod = setup_production_group(as_bytes("verification"));
  ElectionConfig cfg;
  cfg.booths = 2;
  cfg.voters_per_booth = 2;
  cfg.m = 3;
  cfg.audit_per_booth = 1;
  cfg.seed = "production";
  cfg.profile = Profile::production;
  auto run = sim::run_election(prod, cfg);
  auto rep = universal_verify(prod, run.pub, run.universal_inputs());
  EXPECT_TRUE(rep.pass()) << rep.render();
  Drbg rng("prod-iv");
  for (const auto& [id, res] : sim::verify_voters(prod, run, run.boards.bb3, rng))
    EXPECT_EQ(res, IndividualResult::verified);
  EXPECT_EQ(run.published_tally, run.ground_truth());
}

}  // namespace
}  // namespace evote
