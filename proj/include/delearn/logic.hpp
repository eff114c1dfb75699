#pragma once

// Propositional core: vocabularies, states, literal-conjunction terms and a
// small formula tree. States and terms are fixed-width bit-vectors indexed by
// the vocabulary ordering; the width is carried along so that objects built
// over vocabularies of different sizes are rejected instead of mixed.

#include <algorithm>
#include <bit>
#include <compare>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delearn/errors.hpp"

namespace delearn {

using AtomMask = std::uint32_t;

/// Default upper bound on vocabulary size. 2^16 states is still cheap to scan.
inline constexpr std::size_t kMaxAtoms = 16;

/// Upper bound for enumerateTerms (3^12 = 531441 terms).
inline constexpr std::size_t kMaxTermEnumerationAtoms = 12;

inline constexpr AtomMask fullMask(std::size_t width) {
  return width >= 32 ? ~AtomMask{0} : ((AtomMask{1} << width) - 1);
}

class Vocabulary {
 public:
  Vocabulary() : atoms_(std::make_shared<const std::vector<std::string>>()) {}

  explicit Vocabulary(std::vector<std::string> atoms, std::size_t max_atoms = kMaxAtoms) {
    if (atoms.size() > max_atoms) {
      throw CapacityError("vocabulary too large", atoms.size(), max_atoms);
    }
    for (std::size_t i = 0; i < atoms.size(); ++i) {
      if (!validAtomName(atoms[i])) {
        throw ContractViolation("invalid atom name '" + atoms[i] + "'");
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (atoms[i] == atoms[j]) {
          throw ContractViolation("duplicate atom '" + atoms[i] + "'");
        }
      }
    }
    atoms_ = std::make_shared<const std::vector<std::string>>(std::move(atoms));
  }

  std::size_t size() const noexcept { return atoms_->size(); }
  const std::string& atom(std::size_t i) const { return atoms_->at(i); }
  const std::vector<std::string>& atoms() const noexcept { return *atoms_; }

  std::optional<std::size_t> indexOf(const std::string& name) const {
    auto it = std::find(atoms_->begin(), atoms_->end(), name);
    if (it == atoms_->end()) return std::nullopt;
    return static_cast<std::size_t>(it - atoms_->begin());
  }

  AtomMask mask() const noexcept { return fullMask(size()); }
  std::uint64_t stateCount() const noexcept { return std::uint64_t{1} << size(); }

  /// Atom names are identifiers; "T" and "F" are reserved for the constants.
  static bool validAtomName(const std::string& name) {
    if (name.empty() || name == "T" || name == "F") return false;
    auto alpha = [](char c) { return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_'; };
    auto digit = [](char c) { return c >= '0' && c <= '9'; };
    if (!alpha(name.front())) return false;
    return std::all_of(name.begin(), name.end(), [&](char c) { return alpha(c) || digit(c); });
  }

  friend bool operator==(const Vocabulary& a, const Vocabulary& b) {
    return a.atoms_ == b.atoms_ || *a.atoms_ == *b.atoms_;
  }

 private:
  std::shared_ptr<const std::vector<std::string>> atoms_;
};

/// A propositional valuation: bit i set iff atom i is true.
class State {
 public:
  constexpr State() = default;
  constexpr State(AtomMask bits, std::size_t width) : bits_(bits), width_(static_cast<std::uint8_t>(width)) {
    if (width > kMaxAtoms || (bits & ~fullMask(width)) != 0) {
      throw ContractViolation("state bits outside vocabulary");
    }
  }

  constexpr AtomMask bits() const noexcept { return bits_; }
  constexpr std::size_t width() const noexcept { return width_; }
  constexpr bool contains(std::size_t atom) const noexcept { return (bits_ >> atom) & 1U; }

  /// Canonical state order: the valuation read as a binary number, atom 0
  /// being the least significant bit.
  friend constexpr auto operator<=>(const State&, const State&) = default;

 private:
  AtomMask bits_ = 0;
  std::uint8_t width_ = 0;
};

/// A consistent conjunction of literals. The empty term is T.
class Term {
 public:
  constexpr Term() = default;

  constexpr Term(AtomMask pos, AtomMask neg, std::size_t width)
      : pos_(pos), neg_(neg), width_(static_cast<std::uint8_t>(width)) {
    if (width > kMaxAtoms || ((pos | neg) & ~fullMask(width)) != 0) {
      throw ContractViolation("term mentions atoms outside vocabulary");
    }
    if ((pos & neg) != 0) {
      throw ContractViolation("inconsistent term");
    }
  }

  static constexpr Term top(std::size_t width) { return Term(0, 0, width); }
  static constexpr Term positive(std::size_t atom, std::size_t width) { return Term(AtomMask{1} << atom, 0, width); }
  static constexpr Term negative(std::size_t atom, std::size_t width) { return Term(0, AtomMask{1} << atom, width); }

  constexpr AtomMask pos() const noexcept { return pos_; }
  constexpr AtomMask neg() const noexcept { return neg_; }
  constexpr AtomMask mentioned() const noexcept { return pos_ | neg_; }
  constexpr std::size_t width() const noexcept { return width_; }
  constexpr bool isTop() const noexcept { return (pos_ | neg_) == 0; }
  constexpr bool isMaximal() const noexcept { return mentioned() == fullMask(width_); }
  constexpr std::size_t literalCount() const noexcept { return static_cast<std::size_t>(std::popcount(mentioned())); }

  /// Per-atom code: 0 absent, 1 positive, 2 negative.
  constexpr int code(std::size_t atom) const noexcept {
    if ((pos_ >> atom) & 1U) return 1;
    if ((neg_ >> atom) & 1U) return 2;
    return 0;
  }

  /// Base-3 rank of the code sequence with atom 0 most significant; ordering
  /// by it is the canonical lexicographic term order.
  constexpr std::uint64_t canonicalRank() const noexcept {
    std::uint64_t rank = 0;
    for (std::size_t i = 0; i < width_; ++i) rank = rank * 3 + static_cast<std::uint64_t>(code(i));
    return rank;
  }

  friend constexpr bool operator==(const Term& a, const Term& b) noexcept {
    return a.width_ == b.width_ && a.pos_ == b.pos_ && a.neg_ == b.neg_;
  }
  friend constexpr std::strong_ordering operator<=>(const Term& a, const Term& b) noexcept {
    if (auto c = a.width_ <=> b.width_; c != 0) return c;
    return a.canonicalRank() <=> b.canonicalRank();
  }

 private:
  AtomMask pos_ = 0;
  AtomMask neg_ = 0;
  std::uint8_t width_ = 0;
};

namespace detail {

inline void requireSameWidth(std::size_t a, std::size_t b, const char* where) {
  if (a != b) {
    throw VocabularyMismatch(std::string(where) + ": vocabulary mismatch (" + std::to_string(a) + " vs " +
                             std::to_string(b) + " atoms)");
  }
}

}  // namespace detail

inline bool satisfies(const State& s, const Term& t) {
  detail::requireSameWidth(s.width(), t.width(), "satisfies");
  return (t.pos() & ~s.bits()) == 0 && (t.neg() & s.bits()) == 0;
}

/// Syntactic entailment between terms: every conjunct of t2 is a conjunct of t1.
inline bool entails(const Term& t1, const Term& t2) {
  detail::requireSameWidth(t1.width(), t2.width(), "entails");
  return (t2.pos() & ~t1.pos()) == 0 && (t2.neg() & ~t1.neg()) == 0;
}

/// True iff some state satisfies both terms.
inline bool compatible(const Term& a, const Term& b) {
  detail::requireSameWidth(a.width(), b.width(), "compatible");
  return (a.pos() & b.neg()) == 0 && (a.neg() & b.pos()) == 0;
}

/// Conjunction of two compatible terms.
inline Term conjoin(const Term& a, const Term& b) {
  if (!compatible(a, b)) throw ContractViolation("conjoin: terms are mutually inconsistent");
  return Term(a.pos() | b.pos(), a.neg() | b.neg(), a.width());
}

/// The maximal term satisfied by exactly s.
inline Term termForState(const State& s) {
  return Term(s.bits(), fullMask(s.width()) & ~s.bits(), s.width());
}

inline std::vector<State> allStates(std::size_t width) {
  if (width > kMaxAtoms) throw CapacityError("state enumeration", width, kMaxAtoms);
  std::vector<State> states;
  states.reserve(std::size_t{1} << width);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << width); ++bits) {
    states.emplace_back(static_cast<AtomMask>(bits), width);
  }
  return states;
}

/// All 3^|P| consistent terms in canonical order.
inline std::vector<Term> enumerateTerms(std::size_t width) {
  if (width > kMaxTermEnumerationAtoms) {
    throw CapacityError("term enumeration", width, kMaxTermEnumerationAtoms);
  }
  std::size_t count = 1;
  for (std::size_t i = 0; i < width; ++i) count *= 3;
  std::vector<Term> terms;
  terms.reserve(count);
  for (std::size_t rank = 0; rank < count; ++rank) {
    AtomMask pos = 0;
    AtomMask neg = 0;
    std::size_t r = rank;
    for (std::size_t k = 0; k < width; ++k) {
      std::size_t atom = width - 1 - k;  // last atom is least significant
      switch (r % 3) {
        case 1: pos |= AtomMask{1} << atom; break;
        case 2: neg |= AtomMask{1} << atom; break;
        default: break;
      }
      r /= 3;
    }
    terms.emplace_back(pos, neg, width);
  }
  return terms;
}

inline std::vector<Term> enumerateTerms(const Vocabulary& vocab) { return enumerateTerms(vocab.size()); }

/// Immutable propositional formula tree over atom indices.
class Formula {
 public:
  enum class Kind { True, False, Atom, Not, And, Or };

  static Formula top() { return Formula(Kind::True); }
  static Formula bottom() { return Formula(Kind::False); }
  static Formula atom(std::size_t index) {
    Formula f(Kind::Atom);
    f.node_ = std::make_shared<const Node>(Node{Kind::Atom, index, {}, {}});
    return f;
  }
  static Formula negation(Formula f) { return unary(Kind::Not, std::move(f)); }
  static Formula conjunction(Formula a, Formula b) { return binary(Kind::And, std::move(a), std::move(b)); }
  static Formula disjunction(Formula a, Formula b) { return binary(Kind::Or, std::move(a), std::move(b)); }

  static Formula fromTerm(const Term& t) {
    Formula f = top();
    bool first = true;
    for (std::size_t i = 0; i < t.width(); ++i) {
      int c = t.code(i);
      if (c == 0) continue;
      Formula lit = c == 1 ? atom(i) : negation(atom(i));
      f = first ? lit : conjunction(std::move(f), std::move(lit));
      first = false;
    }
    return f;
  }

  Kind kind() const noexcept { return node_->kind; }
  std::size_t atomIndex() const noexcept { return node_->atom; }
  const Formula& lhs() const { return *node_->lhs; }
  const Formula& rhs() const { return *node_->rhs; }

  /// Largest atom index used plus one (0 for atom-free formulas).
  std::size_t requiredWidth() const {
    switch (kind()) {
      case Kind::True:
      case Kind::False: return 0;
      case Kind::Atom: return atomIndex() + 1;
      case Kind::Not: return lhs().requiredWidth();
      default: return std::max(lhs().requiredWidth(), rhs().requiredWidth());
    }
  }

 private:
  struct Node {
    Kind kind;
    std::size_t atom;
    std::shared_ptr<const Formula> lhs;
    std::shared_ptr<const Formula> rhs;
  };

  explicit Formula(Kind k) : node_(std::make_shared<const Node>(Node{k, 0, {}, {}})) {}

  static Formula unary(Kind k, Formula a) {
    Formula f(k);
    f.node_ = std::make_shared<const Node>(Node{k, 0, std::make_shared<const Formula>(std::move(a)), {}});
    return f;
  }
  static Formula binary(Kind k, Formula a, Formula b) {
    Formula f(k);
    f.node_ = std::make_shared<const Node>(Node{k, 0, std::make_shared<const Formula>(std::move(a)),
                                                std::make_shared<const Formula>(std::move(b))});
    return f;
  }

  std::shared_ptr<const Node> node_;
};

inline bool evalFormula(const State& s, const Formula& f) {
  switch (f.kind()) {
    case Formula::Kind::True: return true;
    case Formula::Kind::False: return false;
    case Formula::Kind::Atom:
      if (f.atomIndex() >= s.width()) throw VocabularyMismatch("evalFormula: atom outside vocabulary");
      return s.contains(f.atomIndex());
    case Formula::Kind::Not: return !evalFormula(s, f.lhs());
    case Formula::Kind::And: return evalFormula(s, f.lhs()) && evalFormula(s, f.rhs());
    case Formula::Kind::Or: return evalFormula(s, f.lhs()) || evalFormula(s, f.rhs());
  }
  return false;
}

namespace detail {

inline void sortUnique(std::vector<Term>& terms) {
  std::sort(terms.begin(), terms.end());
  terms.erase(std::unique(terms.begin(), terms.end()), terms.end());
}

// Disjuncts of f (positive) or of its negation (negative), pushing negations
// to the leaves on the way down.
inline std::vector<Term> dnfRec(const Formula& f, bool positive, std::size_t width) {
  using K = Formula::Kind;
  switch (f.kind()) {
    case K::True: return positive ? std::vector<Term>{Term::top(width)} : std::vector<Term>{};
    case K::False: return positive ? std::vector<Term>{} : std::vector<Term>{Term::top(width)};
    case K::Atom:
      if (f.atomIndex() >= width) throw VocabularyMismatch("dnf: atom outside vocabulary");
      return {positive ? Term::positive(f.atomIndex(), width) : Term::negative(f.atomIndex(), width)};
    case K::Not: return dnfRec(f.lhs(), !positive, width);
    case K::And:
    case K::Or: {
      auto left = dnfRec(f.lhs(), positive, width);
      auto right = dnfRec(f.rhs(), positive, width);
      bool distribute = (f.kind() == K::And) == positive;
      std::vector<Term> out;
      if (distribute) {
        for (const auto& a : left) {
          for (const auto& b : right) {
            if (compatible(a, b)) out.push_back(conjoin(a, b));
          }
        }
      } else {
        out = std::move(left);
        out.insert(out.end(), right.begin(), right.end());
      }
      sortUnique(out);
      return out;
    }
  }
  return {};
}

}  // namespace detail

/// Disjunctive normal form as a sorted set of consistent terms. An
/// unsatisfiable formula yields the empty set.
inline std::vector<Term> dnf(const Formula& f, std::size_t width) { return detail::dnfRec(f, true, width); }

}  // namespace delearn
