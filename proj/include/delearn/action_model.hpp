#pragma once

// Fully observable propositional action models and the product update on
// propositional states. Indistinguishability is the identity and is not
// stored.

#include <algorithm>
#include <compare>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "delearn/errors.hpp"
#include "delearn/logic.hpp"

namespace delearn {

/// A (before, after) pair of states.
struct Observation {
  State before;
  State after;

  friend constexpr auto operator<=>(const Observation&, const Observation&) = default;
};

struct Event {
  Term pre;
  Term post;

  /// No literal is a conjunct of both pre and post.
  bool isNormal() const noexcept {
    return (pre.pos() & post.pos()) == 0 && (pre.neg() & post.neg()) == 0;
  }

  friend constexpr auto operator<=>(const Event&, const Event&) = default;
};

/// Events are kept sorted by canonical (pre, post) order with duplicates
/// removed, so equal event sets compare equal.
class ActionModel {
 public:
  ActionModel() = default;

  ActionModel(Vocabulary vocab, std::vector<Event> events) : vocab_(std::move(vocab)), events_(std::move(events)) {
    for (const auto& e : events_) {
      detail::requireSameWidth(e.pre.width(), vocab_.size(), "ActionModel");
      detail::requireSameWidth(e.post.width(), vocab_.size(), "ActionModel");
    }
    if (!std::is_sorted(events_.begin(), events_.end())) std::sort(events_.begin(), events_.end());
    events_.erase(std::unique(events_.begin(), events_.end()), events_.end());
  }

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  std::size_t width() const noexcept { return vocab_.size(); }
  const std::vector<Event>& events() const noexcept { return events_; }
  std::size_t size() const noexcept { return events_.size(); }
  bool empty() const noexcept { return events_.empty(); }

  friend bool operator==(const ActionModel& a, const ActionModel& b) {
    return a.vocab_ == b.vocab_ && a.events_ == b.events_;
  }

 private:
  Vocabulary vocab_;
  std::vector<Event> events_;
};

struct RawEvent {
  Formula pre;
  Term post;
};

/// Action model with arbitrary propositional preconditions.
struct RawActionModel {
  Vocabulary vocabulary;
  std::vector<RawEvent> events;
};

struct TypeFlags {
  bool atomic = false;
  bool deterministic = false;
  bool preconditionFree = false;
  bool universallyApplicable = false;
  bool normal = false;
  bool basicPreconditions = false;
  bool maximalPreconditions = false;

  friend bool operator==(const TypeFlags&, const TypeFlags&) = default;
};

namespace detail {

inline State applyPost(const State& s, const Term& post) {
  return State((s.bits() | post.pos()) & ~post.neg(), s.width());
}

inline void requireEnumerable(std::size_t width, const char* where) {
  if (width > kMaxAtoms) throw CapacityError(std::string(where) + ": state enumeration", width, kMaxAtoms);
}

inline void sortUnique(std::vector<State>& states) {
  std::sort(states.begin(), states.end());
  states.erase(std::unique(states.begin(), states.end()), states.end());
}

}  // namespace detail

inline State applyEvent(const State& s, const Event& e) {
  if (!satisfies(s, e.pre)) throw InapplicableEvent("applyEvent: precondition not satisfied");
  return detail::applyPost(s, e.post);
}

/// s (x) A as a sorted set of states; empty iff no event is applicable.
inline std::vector<State> outcomes(const State& s, const ActionModel& model) {
  detail::requireSameWidth(s.width(), model.width(), "outcomes");
  std::vector<State> out;
  for (const auto& e : model.events()) {
    if (satisfies(s, e.pre)) out.push_back(detail::applyPost(s, e.post));
  }
  detail::sortUnique(out);
  return out;
}

inline std::vector<State> outcomes(const State& s, const RawActionModel& model) {
  detail::requireSameWidth(s.width(), model.vocabulary.size(), "outcomes");
  std::vector<State> out;
  for (const auto& e : model.events) {
    if (evalFormula(s, e.pre)) out.push_back(detail::applyPost(s, e.post));
  }
  detail::sortUnique(out);
  return out;
}

/// Every (s, s') with s' in s (x) A, in canonical state order.
inline std::vector<Observation> graph(const ActionModel& model) {
  detail::requireEnumerable(model.width(), "graph");
  std::vector<Observation> pairs;
  for (const auto& s : allStates(model.width())) {
    for (const auto& t : outcomes(s, model)) pairs.push_back({s, t});
  }
  return pairs;
}

inline ActionModel restrict(const ActionModel& model, const std::function<bool(const Event&)>& keep) {
  std::vector<Event> kept;
  for (const auto& e : model.events()) {
    if (keep(e)) kept.push_back(e);
  }
  return ActionModel(model.vocabulary(), std::move(kept));
}

/// Action-type flags. Determinism and universal applicability are decided
/// by state enumeration.
inline TypeFlags classify(const ActionModel& model) {
  detail::requireEnumerable(model.width(), "classify");
  TypeFlags flags;
  const auto& events = model.events();
  flags.atomic = events.size() == 1;
  flags.basicPreconditions = true;
  flags.preconditionFree = std::all_of(events.begin(), events.end(), [](const Event& e) { return e.pre.isTop(); });
  flags.normal = std::all_of(events.begin(), events.end(), [](const Event& e) { return e.isNormal(); });
  flags.maximalPreconditions =
      std::all_of(events.begin(), events.end(), [](const Event& e) { return e.pre.isMaximal(); });
  flags.deterministic = true;
  flags.universallyApplicable = true;
  for (const auto& s : allStates(model.width())) {
    std::size_t applicable = 0;
    for (const auto& e : events) {
      if (satisfies(s, e.pre)) ++applicable;
    }
    if (applicable > 1) flags.deterministic = false;
    if (applicable == 0) flags.universallyApplicable = false;
  }
  return flags;
}

inline bool isUniversallyApplicable(const ActionModel& model) {
  detail::requireEnumerable(model.width(), "isUniversallyApplicable");
  for (const auto& s : allStates(model.width())) {
    bool covered = std::any_of(model.events().begin(), model.events().end(),
                               [&](const Event& e) { return satisfies(s, e.pre); });
    if (!covered) return false;
  }
  return true;
}

/// A state on which the two models have different outcome sets, if any.
inline std::optional<State> inequivalenceWitness(const ActionModel& a, const ActionModel& b) {
  if (!(a.vocabulary() == b.vocabulary())) throw VocabularyMismatch("equivalent: vocabulary mismatch");
  detail::requireEnumerable(a.width(), "equivalent");
  for (const auto& s : allStates(a.width())) {
    if (outcomes(s, a) != outcomes(s, b)) return s;
  }
  return std::nullopt;
}

/// Outcome-set equality on every propositional state.
inline bool equivalent(const ActionModel& a, const ActionModel& b) { return !inequivalenceWitness(a, b).has_value(); }

/// Splits each raw precondition into its DNF disjuncts and drops
/// postcondition conjuncts already forced by the precondition.
inline ActionModel normalize(const RawActionModel& raw) {
  const std::size_t width = raw.vocabulary.size();
  std::vector<Event> events;
  for (const auto& e : raw.events) {
    detail::requireSameWidth(e.post.width(), width, "normalize");
    for (const auto& d : dnf(e.pre, width)) {
      Term post(e.post.pos() & ~d.pos(), e.post.neg() & ~d.neg(), width);
      events.push_back({d, post});
    }
  }
  return ActionModel(raw.vocabulary, std::move(events));
}

inline RawActionModel toRaw(const ActionModel& model) {
  RawActionModel raw{model.vocabulary(), {}};
  for (const auto& e : model.events()) raw.events.push_back({Formula::fromTerm(e.pre), e.post});
  return raw;
}

/// Adds <d, T> for every disjunct d of the negated disjunction of all
/// preconditions. Models that are already universally applicable come back
/// unchanged.
inline ActionModel makeUniversal(const ActionModel& model) {
  if (isUniversallyApplicable(model)) return model;
  Formula any = Formula::bottom();
  bool first = true;
  for (const auto& e : model.events()) {
    Formula pre = Formula::fromTerm(e.pre);
    any = first ? pre : Formula::disjunction(std::move(any), std::move(pre));
    first = false;
  }
  std::vector<Event> events = model.events();
  for (const auto& d : dnf(Formula::negation(any), model.width())) {
    events.push_back({d, Term::top(model.width())});
  }
  return ActionModel(model.vocabulary(), std::move(events));
}

}  // namespace delearn
