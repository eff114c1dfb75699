#include <gtest/gtest.h>

#include <random>
#include <set>

#include "delearn/delearn.hpp"
#include "oracles.hpp"

using namespace delearn;
using namespace delearn::testing;

namespace {

Vocabulary pq() { return Vocabulary({"p", "q"}); }

}  // namespace

TEST(Vocabulary, RejectsBadNames) {
  EXPECT_THROW(Vocabulary({"p", "p"}), ContractViolation);
  EXPECT_THROW(Vocabulary({"T"}), ContractViolation);
  EXPECT_THROW(Vocabulary({"F"}), ContractViolation);
  EXPECT_THROW(Vocabulary({""}), ContractViolation);
  EXPECT_THROW(Vocabulary({"a b"}), ContractViolation);
  EXPECT_THROW(Vocabulary({"1p"}), ContractViolation);
  EXPECT_NO_THROW(Vocabulary({"s_1", "open", "lock2"}));
}

TEST(Vocabulary, CapacityIsEnforced) {
  std::vector<std::string> names;
  for (int i = 0; i < 17; ++i) names.push_back("a" + std::to_string(i));
  try {
    Vocabulary v(names);
    FAIL() << "expected capacity error";
  } catch (const CapacityError& e) {
    EXPECT_EQ(e.size(), 17U);
    EXPECT_EQ(e.limit(), 16U);
  }
  EXPECT_THROW(Vocabulary({"a", "b", "c"}, 2), CapacityError);
}

TEST(Vocabulary, Lookup) {
  Vocabulary v = pq();
  EXPECT_EQ(v.size(), 2U);
  EXPECT_EQ(*v.indexOf("q"), 1U);
  EXPECT_FALSE(v.indexOf("r").has_value());
  EXPECT_EQ(v.stateCount(), 4U);
  EXPECT_TRUE(v == Vocabulary({"p", "q"}));
  EXPECT_FALSE(v == Vocabulary({"q", "p"}));
}

TEST(Term, RejectsInconsistentPairs) {
  EXPECT_THROW(Term(0b1, 0b1, 1), ContractViolation);
  EXPECT_THROW(Term(0b100, 0, 2), ContractViolation);
}

TEST(Term, SatisfiesExamples) {
  // p&-q holds only in {p}
  Term t(0b01, 0b10, 2);
  EXPECT_TRUE(satisfies(State(0b01, 2), t));
  EXPECT_FALSE(satisfies(State(0b11, 2), t));
  EXPECT_FALSE(satisfies(State(0b00, 2), t));
  EXPECT_TRUE(satisfies(State(0, 0), Term::top(0)));
  EXPECT_TRUE(satisfies(State(0b10, 2), Term::top(2)));
}

TEST(Term, EntailsExamples) {
  Term p = Term::positive(0, 2);
  Term pq(0b11, 0, 2);
  EXPECT_TRUE(entails(pq, p));
  EXPECT_FALSE(entails(p, pq));
  EXPECT_TRUE(entails(p, Term::top(2)));
  EXPECT_FALSE(entails(Term::top(2), p));
  EXPECT_FALSE(entails(p, Term::negative(0, 2)));
}

TEST(Term, WidthMismatchIsRejected) {
  EXPECT_THROW(satisfies(State(0, 1), Term::top(2)), VocabularyMismatch);
  EXPECT_THROW(entails(Term::top(1), Term::top(2)), VocabularyMismatch);
}

TEST(Term, EntailmentMatchesStateOracle) {
  for (std::size_t w = 0; w <= 3; ++w) {
    const auto terms = oracleTerms(w);
    for (const auto& a : terms) {
      for (const auto& b : terms) EXPECT_EQ(entails(a, b), oracleEntails(a, b));
    }
  }
}

TEST(Term, CharacteristicTermPinsOneState) {
  for (std::size_t w = 0; w <= 3; ++w) {
    for (const auto& s : allStates(w)) {
      Term chi = termForState(s);
      EXPECT_TRUE(chi.isMaximal());
      for (const auto& other : allStates(w)) EXPECT_EQ(satisfies(other, chi), other == s);
    }
  }
}

TEST(Term, EnumerationCountsAndOrder) {
  EXPECT_EQ(enumerateTerms(0).size(), 1U);
  EXPECT_TRUE(enumerateTerms(0).front().isTop());

  auto one = enumerateTerms(1);
  ASSERT_EQ(one.size(), 3U);
  EXPECT_EQ(one[0], Term::top(1));
  EXPECT_EQ(one[1], Term::positive(0, 1));
  EXPECT_EQ(one[2], Term::negative(0, 1));

  // the nine terms over {p,q}
  auto two = enumerateTerms(pq());
  ASSERT_EQ(two.size(), 9U);
  std::set<std::string> rendered;
  for (const auto& t : two) rendered.insert(io::renderTerm(t, pq()));
  EXPECT_EQ(rendered, (std::set<std::string>{"T", "p", "-p", "q", "-q", "p&q", "-p&q", "p&-q", "-p&-q"}));

  for (std::size_t w = 0; w <= 4; ++w) {
    auto terms = enumerateTerms(w);
    auto oracle = oracleTerms(w);
    EXPECT_EQ(terms.size(), oracle.size());
    EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end()));
    EXPECT_EQ(std::set<Term>(terms.begin(), terms.end()), std::set<Term>(oracle.begin(), oracle.end()));
  }
}

TEST(Term, EnumerationCapacity) { EXPECT_THROW(enumerateTerms(kMaxTermEnumerationAtoms + 1), CapacityError); }

TEST(Term, CanonicalOrderIsLexicographicOnCodes) {
  // first atom is the most significant position: absent < positive < negative
  Vocabulary v = pq();
  auto terms = enumerateTerms(v);
  std::vector<std::string> names;
  for (const auto& t : terms) names.push_back(io::renderTerm(t, v));
  EXPECT_EQ(names, (std::vector<std::string>{"T", "q", "-q", "p", "p&q", "p&-q", "-p", "-p&q", "-p&-q"}));
}

TEST(Term, ConjoinAndCompatible) {
  Term p = Term::positive(0, 2);
  Term nq = Term::negative(1, 2);
  EXPECT_TRUE(compatible(p, nq));
  EXPECT_EQ(conjoin(p, nq), Term(0b01, 0b10, 2));
  EXPECT_FALSE(compatible(p, Term::negative(0, 2)));
  EXPECT_THROW(conjoin(p, Term::negative(0, 2)), ContractViolation);
}

TEST(Formula, EvalBasics) {
  Formula p = Formula::atom(0);
  Formula q = Formula::atom(1);
  Formula f = Formula::disjunction(p, Formula::negation(q));
  EXPECT_TRUE(evalFormula(State(0b00, 2), f));
  EXPECT_FALSE(evalFormula(State(0b10, 2), f));
  EXPECT_TRUE(evalFormula(State(0b11, 2), f));
  EXPECT_TRUE(evalFormula(State(0, 2), Formula::top()));
  EXPECT_FALSE(evalFormula(State(0, 2), Formula::bottom()));
  EXPECT_EQ(f.requiredWidth(), 2U);
  EXPECT_THROW(evalFormula(State(0, 1), q), VocabularyMismatch);
}

TEST(Dnf, Examples) {
  Formula p = Formula::atom(0);
  Formula q = Formula::atom(1);
  auto d = dnf(Formula::disjunction(p, q), 2);
  EXPECT_EQ(d, (std::vector<Term>{Term::positive(1, 2), Term::positive(0, 2)}));

  EXPECT_TRUE(dnf(Formula::conjunction(p, Formula::negation(p)), 2).empty());
  EXPECT_TRUE(dnf(Formula::bottom(), 2).empty());
  EXPECT_EQ(dnf(Formula::top(), 2), std::vector<Term>{Term::top(2)});

  // -(p | q) is a single term
  EXPECT_EQ(dnf(Formula::negation(Formula::disjunction(p, q)), 2), std::vector<Term>{Term(0, 0b11, 2)});
}

TEST(Dnf, AgreesWithEvaluationOnRandomFormulas) {
  Rng rng(7);
  for (int trial = 0; trial < 500; ++trial) {
    std::size_t w = below(rng, 4);
    Formula f = randomFormula(rng, w, below(rng, 5));
    auto terms = dnf(f, w);
    EXPECT_TRUE(std::is_sorted(terms.begin(), terms.end()));
    EXPECT_EQ(std::adjacent_find(terms.begin(), terms.end()), terms.end());
    for (AtomMask s = 0; s < (AtomMask{1} << w); ++s) {
      bool any = std::any_of(terms.begin(), terms.end(), [&](const Term& t) { return oracleSatisfies(s, t); });
      EXPECT_EQ(any, evalFormula(State(s, w), f));
    }
  }
}
