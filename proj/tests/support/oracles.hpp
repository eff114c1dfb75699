#pragma once

// Test-only brute-force oracles and random model generators. Nothing here
// calls the library's satisfaction, update or enumeration code paths; the
// oracles recompute everything from the per-atom truth definitions.

#include <algorithm>
#include <cstdint>
#include <random>
#include <set>
#include <vector>

#include "delearn/delearn.hpp"

namespace delearn::testing {

// Per-atom literal satisfaction straight from the truth definition.
inline bool oracleSatisfies(AtomMask state, const Term& t) {
  for (std::size_t i = 0; i < t.width(); ++i) {
    bool value = (state >> i) & 1U;
    int code = t.code(i);
    if (code == 1 && !value) return false;
    if (code == 2 && value) return false;
  }
  return true;
}

/// Semantic entailment by enumerating every state.
inline bool oracleEntails(const Term& a, const Term& b) {
  for (AtomMask s = 0; s < (AtomMask{1} << a.width()); ++s) {
    if (oracleSatisfies(s, a) && !oracleSatisfies(s, b)) return false;
  }
  return true;
}

/// Every consistent term, found by filtering all (pos, neg) mask pairs.
inline std::vector<Term> oracleTerms(std::size_t width) {
  std::vector<Term> out;
  const AtomMask full = fullMask(width);
  for (AtomMask pos = 0; pos <= full; ++pos) {
    for (AtomMask neg = 0; neg <= full; ++neg) {
      if ((pos & neg) == 0) out.emplace_back(pos, neg, width);
      if (neg == full) break;
    }
    if (pos == full) break;
  }
  return out;
}

/// Successor valuation per the product update clause: p holds afterwards iff
/// post entails p, or p held before and post does not entail -p.
inline AtomMask oracleSuccessor(AtomMask state, const Term& post) {
  AtomMask out = 0;
  for (std::size_t i = 0; i < post.width(); ++i) {
    bool before = (state >> i) & 1U;
    int code = post.code(i);
    if (code == 1 || (before && code != 2)) out |= AtomMask{1} << i;
  }
  return out;
}

inline std::set<AtomMask> oracleOutcomes(AtomMask state, const ActionModel& m) {
  std::set<AtomMask> out;
  for (const auto& e : m.events()) {
    if (oracleSatisfies(state, e.pre)) out.insert(oracleSuccessor(state, e.post));
  }
  return out;
}

inline std::set<AtomMask> oracleOutcomes(AtomMask state, const RawActionModel& m) {
  std::set<AtomMask> out;
  State s(state, m.vocabulary.size());
  for (const auto& e : m.events) {
    if (evalFormula(s, e.pre)) out.insert(oracleSuccessor(state, e.post));
  }
  return out;
}

inline bool oracleEquivalent(const ActionModel& a, const ActionModel& b) {
  for (AtomMask s = 0; s < (AtomMask{1} << a.width()); ++s) {
    if (oracleOutcomes(s, a) != oracleOutcomes(s, b)) return false;
  }
  return true;
}

inline bool oracleDeterministic(const ActionModel& m) {
  for (AtomMask s = 0; s < (AtomMask{1} << m.width()); ++s) {
    int applicable = 0;
    for (const auto& e : m.events()) applicable += oracleSatisfies(s, e.pre) ? 1 : 0;
    if (applicable > 1) return false;
  }
  return true;
}

inline bool oracleNormal(const Event& e) {
  for (std::size_t i = 0; i < e.pre.width(); ++i) {
    if (e.pre.code(i) != 0 && e.pre.code(i) == e.post.code(i)) return false;
  }
  return true;
}

/// The initial hypotheses by filtering every (pre, post) pair of terms.
inline std::size_t oracleHypothesisSize(std::size_t width, LearnerKind kind) {
  std::size_t count = 0;
  const auto terms = oracleTerms(width);
  for (const auto& pre : terms) {
    if (kind == LearnerKind::L1 && !pre.isTop()) continue;
    if (kind == LearnerKind::L2 && pre.literalCount() != width) continue;
    for (const auto& post : terms) {
      if (kind != LearnerKind::L1 && !oracleNormal({pre, post})) continue;
      ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------
// Random generators

using Rng = std::mt19937_64;

inline std::size_t below(Rng& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

inline Term randomTerm(Rng& rng, std::size_t width) {
  AtomMask pos = 0;
  AtomMask neg = 0;
  for (std::size_t i = 0; i < width; ++i) {
    switch (below(rng, 3)) {
      case 1: pos |= AtomMask{1} << i; break;
      case 2: neg |= AtomMask{1} << i; break;
      default: break;
    }
  }
  return Term(pos, neg, width);
}

/// A postcondition sharing no literal with pre.
inline Term randomNormalPost(Rng& rng, const Term& pre) {
  AtomMask pos = 0;
  AtomMask neg = 0;
  for (std::size_t i = 0; i < pre.width(); ++i) {
    const AtomMask bit = AtomMask{1} << i;
    std::size_t r = below(rng, 3);
    if (pre.code(i) == 1) {
      if (r == 0) neg |= bit;
    } else if (pre.code(i) == 2) {
      if (r == 0) pos |= bit;
    } else {
      if (r == 1) pos |= bit;
      if (r == 2) neg |= bit;
    }
  }
  return Term(pos, neg, pre.width());
}

namespace detail {

// Splits the region described by `region` on random unused atoms; leaves
// partition the state space, so leaf preconditions are mutually exclusive
// and jointly exhaustive.
inline void splitRegion(Rng& rng, const Term& region, std::vector<Term>& leaves) {
  std::vector<std::size_t> free;
  for (std::size_t i = 0; i < region.width(); ++i) {
    if (region.code(i) == 0) free.push_back(i);
  }
  if (free.empty() || below(rng, 3) == 0) {
    leaves.push_back(region);
    return;
  }
  std::size_t atom = free[below(rng, free.size())];
  const AtomMask bit = AtomMask{1} << atom;
  splitRegion(rng, Term(region.pos() | bit, region.neg(), region.width()), leaves);
  splitRegion(rng, Term(region.pos(), region.neg() | bit, region.width()), leaves);
}

}  // namespace detail

/// Deterministic, universally applicable, normal, basic preconditions.
inline ActionModel randomDeterministicTarget(Rng& rng, const Vocabulary& vocab) {
  std::vector<Term> leaves;
  detail::splitRegion(rng, Term::top(vocab.size()), leaves);
  std::vector<Event> events;
  for (const auto& pre : leaves) events.push_back({pre, randomNormalPost(rng, pre)});
  return ActionModel(vocab, std::move(events));
}

/// Universally applicable, possibly non-deterministic: each region of a
/// random partition gets one to three normal events.
inline ActionModel randomUniversalTarget(Rng& rng, const Vocabulary& vocab) {
  std::vector<Term> leaves;
  detail::splitRegion(rng, Term::top(vocab.size()), leaves);
  std::vector<Event> events;
  for (const auto& pre : leaves) {
    std::size_t n = 1 + below(rng, 3);
    for (std::size_t k = 0; k < n; ++k) events.push_back({pre, randomNormalPost(rng, pre)});
  }
  return ActionModel(vocab, std::move(events));
}

inline Formula randomFormula(Rng& rng, std::size_t width, std::size_t depth) {
  std::size_t pick = depth == 0 ? below(rng, 3) : below(rng, 7);
  switch (pick) {
    case 0: return width == 0 ? Formula::top() : Formula::atom(below(rng, width));
    case 1: return width == 0 ? Formula::bottom() : Formula::atom(below(rng, width));
    case 2: return below(rng, 2) ? Formula::top() : Formula::bottom();
    case 3: return Formula::negation(randomFormula(rng, width, depth - 1));
    case 4:
    case 5: return Formula::conjunction(randomFormula(rng, width, depth - 1), randomFormula(rng, width, depth - 1));
    default: return Formula::disjunction(randomFormula(rng, width, depth - 1), randomFormula(rng, width, depth - 1));
  }
}

inline RawActionModel randomRawModel(Rng& rng, const Vocabulary& vocab, std::size_t maxDepth = 4) {
  RawActionModel raw{vocab, {}};
  std::size_t n = 1 + below(rng, 3);
  for (std::size_t k = 0; k < n; ++k) {
    raw.events.push_back({randomFormula(rng, vocab.size(), below(rng, maxDepth + 1)), randomTerm(rng, vocab.size())});
  }
  return raw;
}

inline Vocabulary atoms(std::size_t n) {
  std::vector<std::string> names;
  for (std::size_t i = 0; i < n; ++i) names.push_back("p" + std::to_string(i));
  return Vocabulary(names);
}

}  // namespace delearn::testing
