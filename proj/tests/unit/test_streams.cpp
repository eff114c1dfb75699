#include <gtest/gtest.h>

#include "delearn/delearn.hpp"
#include "oracles.hpp"

using namespace delearn;
using namespace delearn::testing;

namespace {

Observation obs(AtomMask a, AtomMask b, std::size_t w) { return {State(a, w), State(b, w)}; }

}  // namespace

TEST(StreamPolicy, ParsesNames) {
  EXPECT_EQ(parseStreamPolicy("cyclic-canonical"), StreamPolicy::CyclicCanonical);
  EXPECT_EQ(parseStreamPolicy("shuffled"), StreamPolicy::CyclicShuffled);
  EXPECT_EQ(parseStreamPolicy("iid-uniform"), StreamPolicy::IidUniform);
  EXPECT_THROW(parseStreamPolicy("random"), ParseError);
  EXPECT_STREQ(toString(StreamPolicy::CyclicShuffled), "cyclic-shuffled");
}

TEST(GeneratePrefix, CanonicalExamples) {
  auto flip = generatePrefix({scenarios::pushbuttonFlip(), 0, StreamPolicy::CyclicCanonical}, 2);
  EXPECT_EQ(flip, (StreamPrefix{obs(0, 1, 1), obs(1, 0, 1)}));

  auto id = generatePrefix({scenarios::pushbuttonNoop(), 0, StreamPolicy::CyclicCanonical}, 3);
  EXPECT_EQ(id, (StreamPrefix{obs(0, 0, 1), obs(1, 1, 1), obs(0, 0, 1)}));

  // c1 is bit 0, c2 is bit 1
  auto counter = generatePrefix({scenarios::counter(2), 0, StreamPolicy::CyclicCanonical}, 4);
  EXPECT_EQ(counter, (StreamPrefix{obs(0b00, 0b01, 2), obs(0b01, 0b10, 2), obs(0b10, 0b11, 2), obs(0b11, 0b00, 2)}));
}

TEST(GeneratePrefix, RejectsNonUniversalTargets) {
  Vocabulary p({"p"});
  ActionModel partial(p, {Event{Term::positive(0, 1), Term::top(1)}});
  EXPECT_THROW(generatePrefix({partial, 0, StreamPolicy::CyclicCanonical}, 1), ContractViolation);
}

TEST(GeneratePrefix, SoundDeterministicAndCovering) {
  Rng rng(29);
  for (int trial = 0; trial < 60; ++trial) {
    Vocabulary v = atoms(1 + below(rng, 3));
    ActionModel target = randomUniversalTarget(rng, v);
    const std::size_t g = graph(target).size();
    for (auto policy : {StreamPolicy::CyclicCanonical, StreamPolicy::CyclicShuffled, StreamPolicy::IidUniform}) {
      StreamSpec spec{target, rng(), policy};
      auto prefix = generatePrefix(spec, 3 * g + 5);
      EXPECT_TRUE(isSoundPrefix(prefix, target));
      EXPECT_EQ(prefix, generatePrefix(spec, 3 * g + 5));
      for (const auto& o : prefix) {
        EXPECT_TRUE(oracleOutcomes(o.before.bits(), target).count(o.after.bits()));
      }
      if (policy != StreamPolicy::IidUniform) {
        EXPECT_TRUE(coversGraph(StreamPrefix(prefix.begin(), prefix.begin() + g), target));
        EXPECT_TRUE(coversGraph(StreamPrefix(prefix.begin() + g, prefix.begin() + 2 * g), target));
      }
    }
  }
}

TEST(GeneratePrefix, ShuffledCyclesDiffer) {
  ActionModel target = scenarios::counter(3);
  auto prefix = generatePrefix({target, 42, StreamPolicy::CyclicShuffled}, 16);
  StreamPrefix first(prefix.begin(), prefix.begin() + 8);
  StreamPrefix second(prefix.begin() + 8, prefix.end());
  EXPECT_NE(first, second);
  EXPECT_NE(prefix, generatePrefix({target, 43, StreamPolicy::CyclicShuffled}, 16));
}

TEST(GeneratePrefix, IidEventuallyCovers) {
  ActionModel target = scenarios::coin();
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    EXPECT_TRUE(coversGraph(generatePrefix({target, seed, StreamPolicy::IidUniform}, 200), target));
  }
}

TEST(UniformBelow, StaysInRangeAndHitsEveryValue) {
  std::mt19937_64 rng(1);
  std::vector<int> hits(7, 0);
  for (int i = 0; i < 7000; ++i) {
    auto k = delearn::detail::uniformBelow(rng, 7);
    ASSERT_LT(k, 7U);
    ++hits[k];
  }
  for (int h : hits) EXPECT_GT(h, 800);
}

TEST(IsSoundPrefix, Examples) {
  ActionModel coin = scenarios::coin();
  ActionModel fake(coin.vocabulary(), {Event{Term::top(1), Term::negative(0, 1)}});
  EXPECT_TRUE(isSoundPrefix({obs(0, 1, 1)}, coin));
  EXPECT_FALSE(isSoundPrefix({obs(0, 1, 1)}, fake));
  EXPECT_TRUE(isSoundPrefix({}, coin));
  EXPECT_THROW(isSoundPrefix({obs(0, 1, 2)}, coin), VocabularyMismatch);
}

TEST(CoversGraph, Examples) {
  ActionModel flip = scenarios::pushbuttonFlip();
  EXPECT_TRUE(coversGraph({obs(1, 0, 1), obs(0, 1, 1)}, flip));
  EXPECT_FALSE(coversGraph({obs(0, 1, 1)}, flip));
  ActionModel coin = scenarios::coin();
  EXPECT_TRUE(coversGraph(graph(coin), coin));
}

TEST(Dftt, Examples) {
  EXPECT_EQ(dftt(scenarios::pushbuttonFlip()), (std::vector<Observation>{obs(0, 1, 1), obs(1, 0, 1)}));
  EXPECT_EQ(dftt(scenarios::pushbuttonNoop()), (std::vector<Observation>{obs(0, 0, 1), obs(1, 1, 1)}));
  EXPECT_EQ(dftt(scenarios::pushbuttonOn()), (std::vector<Observation>{obs(0, 1, 1), obs(1, 1, 1)}));
  EXPECT_THROW(dftt(scenarios::coin()), ContractViolation);
  Vocabulary p({"p"});
  EXPECT_THROW(dftt(ActionModel(p, {Event{Term::positive(0, 1), Term::top(1)}})), ContractViolation);
}

TEST(Dftt, SeparatesInequivalentDeterministicModels) {
  auto one = maximalDeterministicModels(Vocabulary({"p"}));
  for (const auto& a : one) {
    EXPECT_TRUE(isSoundPrefix(dftt(a), a));
    for (const auto& b : one) {
      if (!oracleEquivalent(a, b)) { EXPECT_FALSE(isSoundPrefix(dftt(a), b)); }
    }
  }
  Rng rng(31);
  Vocabulary v = atoms(2);
  for (int trial = 0; trial < 200; ++trial) {
    ActionModel a = randomDeterministicTarget(rng, v);
    ActionModel b = randomDeterministicTarget(rng, v);
    EXPECT_TRUE(isSoundPrefix(dftt(a), a));
    if (!oracleEquivalent(a, b)) { EXPECT_FALSE(isSoundPrefix(dftt(a), b)); }
  }
}
