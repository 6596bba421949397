#include <gtest/gtest.h>

#include <map>

#include "evote/commitment.hpp"
#include "evote/group/setup.hpp"

namespace evote {
namespace {

using Toy = MockGroup;

std::uint64_t residue_of(const Toy& grp, const Commitment<Toy>& c) { return grp.residue(c.element).get_ui(); }

// Independent oracle: direct modular arithmetic in Z_23.
std::uint64_t toy_commit_oracle(std::uint64_t rho, std::uint64_t r) {
  std::uint64_t acc = 1;
  for (std::uint64_t i = 0; i < rho; ++i) acc = acc * 2 % 23;
  for (std::uint64_t i = 0; i < r; ++i) acc = acc * 13 % 23;
  return acc;
}

TEST(Commitment, ToyExamples) {
  auto grp = toy_group();
  const auto& F = grp.field();
  ASSERT_EQ(toy_commit_oracle(3, 5), 9u);
  auto c = commit(grp, F.from_u64(3), F.from_u64(5));
  EXPECT_EQ(residue_of(grp, c), 9u);
  EXPECT_EQ(commit(grp, F.zero(), F.zero()).element, grp.identity());
  EXPECT_EQ(commit(grp, F.from_u64(3 + 11), F.from_u64(5)), c);

  for (std::uint64_t rho = 0; rho < 11; ++rho)
    for (std::uint64_t r = 0; r < 11; ++r)
      EXPECT_EQ(residue_of(grp, commit(grp, F.from_u64(rho), F.from_u64(r))), toy_commit_oracle(rho, r));
}

TEST(Commitment, VerifyOpeningExamples) {
  auto grp = toy_group();
  const auto& F = grp.field();
  auto c = commit(grp, F.from_u64(3), F.from_u64(5));
  ASSERT_NE(toy_commit_oracle(3, 6), 9u);
  EXPECT_TRUE(verify_opening(grp, c, {F.from_u64(3), F.from_u64(5)}));
  EXPECT_FALSE(verify_opening(grp, c, {F.from_u64(3), F.from_u64(6)}));
  EXPECT_TRUE(verify_opening(grp, commit(grp, F.zero(), F.zero()), {F.zero(), F.zero()}));
}

TEST(Commitment, CombineExamples) {
  auto grp = toy_group();
  const auto& F = grp.field();
  auto a = commit(grp, F.from_u64(2), F.from_u64(1));
  auto b = commit(grp, F.from_u64(3), F.from_u64(4));
  EXPECT_EQ(residue_of(grp, a), 6u);
  EXPECT_EQ(residue_of(grp, b), 6u);
  auto ab = combine(grp, a, b);
  EXPECT_EQ(residue_of(grp, ab), 13u);
  EXPECT_EQ(ab, commit(grp, F.from_u64(5), F.from_u64(5)));
  EXPECT_EQ(combine(grp, a, commit(grp, F.zero(), F.zero())), a);
  EXPECT_EQ(combine(grp, a, b), combine(grp, b, a));
}

TEST(Commitment, CombineRejectsContextMismatch) {
  auto toy = toy_group();
  auto test = test_group(as_bytes("seed"));
  auto a = commit(toy, toy.field().one(), toy.field().one());
  Commitment<MockGroup> foreign = commit(test, test.field().one(), test.field().one());
  EXPECT_THROW(combine(toy, a, foreign), GroupError);
}

TEST(Commitment, HomomorphismProperty) {
  auto grp = test_group(as_bytes("seed"));
  const auto& F = grp.field();
  Drbg rng("homomorphism");
  for (int i = 0; i < 1000; ++i) {
    auto r1 = F.random(rng), r2 = F.random(rng), m1 = F.random(rng), m2 = F.random(rng);
    EXPECT_EQ(combine(grp, commit(grp, m1, r1), commit(grp, m2, r2)), commit(grp, F.add(m1, m2), F.add(r1, r2)));
  }
}

TEST(Commitment, HomomorphismOnProductionBackend) {
  SupersingularGroup grp(as_bytes("seed"));
  const auto& F = grp.field();
  Drbg rng("homomorphism-prod");
  auto [c1, o1] = commit_random(grp, F.random(rng), rng);
  auto [c2, o2] = commit_random(grp, F.random(rng), rng);
  EXPECT_TRUE(verify_opening(grp, c1, o1));
  EXPECT_EQ(combine(grp, c1, c2), commit(grp, F.add(o1.message, o2.message), F.add(o1.randomness, o2.randomness)));
  EXPECT_EQ(deserialize_commitment(grp, serialize(grp, c1)), c1);
}

// Every alternative opening of a toy commitment reveals log_g(h) = (rho - rho') / (r' - r).
TEST(Commitment, BindingExhaustiveOracle) {
  auto grp = toy_group();
  const auto& F = grp.field();
  const auto log_h = MockOracle::log_h(grp);
  int alternatives = 0;
  for (std::uint64_t rho = 0; rho < 11; ++rho) {
    for (std::uint64_t r = 0; r < 11; ++r) {
      auto c = commit(grp, F.from_u64(rho), F.from_u64(r));
      for (std::uint64_t rho2 = 0; rho2 < 11; ++rho2) {
        for (std::uint64_t r2 = 0; r2 < 11; ++r2) {
          if (rho2 == rho && r2 == r) continue;
          if (!verify_opening(grp, c, {F.from_u64(rho2), F.from_u64(r2)})) continue;
          ++alternatives;
          ASSERT_NE(r2, r);
          auto extracted = F.div(F.sub(F.from_u64(rho), F.from_u64(rho2)), F.sub(F.from_u64(r2), F.from_u64(r)));
          EXPECT_EQ(extracted, log_h);
        }
      }
    }
  }
  // each commitment has exactly q openings, so q-1 alternatives for each of q^2 pairs
  EXPECT_EQ(alternatives, 121 * 10);
}

// Perfect hiding: over all r, the commitment distribution is identical for every message.
TEST(Commitment, HidingExhaustive) {
  auto grp = toy_group();
  const auto& F = grp.field();
  std::map<std::uint64_t, int> reference;
  for (std::uint64_t r = 0; r < 11; ++r) ++reference[residue_of(grp, commit(grp, F.zero(), F.from_u64(r)))];
  for (std::uint64_t rho = 1; rho < 11; ++rho) {
    std::map<std::uint64_t, int> dist;
    for (std::uint64_t r = 0; r < 11; ++r) ++dist[residue_of(grp, commit(grp, F.from_u64(rho), F.from_u64(r)))];
    EXPECT_EQ(dist, reference) << "message " << rho;
  }
}

}  // namespace
}  // namespace evote
