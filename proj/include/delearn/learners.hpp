#pragma once

// Update learners over the three initial hypothesis spaces, the limit
// learner and the generic tell-tale learner.

#include <algorithm>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delearn/action_model.hpp"
#include "delearn/errors.hpp"
#include "delearn/logic.hpp"
#include "delearn/stream.hpp"

namespace delearn {

/// Either undecided or a definite output.
template <class T>
class Verdict {
 public:
  static Verdict undecided() { return Verdict(); }
  static Verdict identified(T value) {
    Verdict v;
    v.value_ = std::move(value);
    return v;
  }

  bool isIdentified() const noexcept { return value_.has_value(); }
  explicit operator bool() const noexcept { return isIdentified(); }
  const T& value() const {
    if (!value_) throw ContractViolation("verdict is undecided");
    return *value_;
  }

 private:
  std::optional<T> value_;
};

enum class LearnerKind { L1, L2, L3 };

inline const char* toString(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::L1: return "l1";
    case LearnerKind::L2: return "l2";
    case LearnerKind::L3: return "l3";
  }
  return "?";
}

/// Largest vocabulary each initial hypothesis is built for
/// (3^12, 4^9 and 7^6 events respectively).
inline constexpr std::size_t hypothesisAtomLimit(LearnerKind kind) {
  switch (kind) {
    case LearnerKind::L1: return 12;
    case LearnerKind::L2: return 9;
    case LearnerKind::L3: return 6;
  }
  return 0;
}

namespace detail {

// Postconditions sharing no conjunct with pre: per atom, the codes allowed
// are everything when pre omits the atom, otherwise absent or the opposite
// literal.
inline void appendNormalEvents(const Term& pre, std::vector<Event>& out) {
  const std::size_t width = pre.width();
  std::vector<int> choice(width, 0);
  auto optionCount = [&](std::size_t atom) { return pre.code(atom) == 0 ? 3 : 2; };
  for (;;) {
    AtomMask pos = 0;
    AtomMask neg = 0;
    for (std::size_t i = 0; i < width; ++i) {
      const AtomMask bit = AtomMask{1} << i;
      switch (pre.code(i)) {
        case 0:
          if (choice[i] == 1) pos |= bit;
          if (choice[i] == 2) neg |= bit;
          break;
        case 1:
          if (choice[i] == 1) neg |= bit;
          break;
        default:
          if (choice[i] == 1) pos |= bit;
          break;
      }
    }
    out.push_back({pre, Term(pos, neg, width)});
    std::size_t i = 0;
    while (i < width && ++choice[i] == optionCount(i)) choice[i++] = 0;
    if (i == width) return;
  }
}

}  // namespace detail

/// Initial hypothesis of each update learner:
///   L1: <T, psi> for every consistent term psi;
///   L2: <phi, psi> with phi maximal and psi sharing no conjunct with phi;
///   L3: as L2 with phi ranging over all consistent terms.
inline ActionModel initHypothesis(const Vocabulary& vocab, LearnerKind kind) {
  const std::size_t width = vocab.size();
  if (width > hypothesisAtomLimit(kind)) {
    throw CapacityError(std::string("initial hypothesis for ") + toString(kind), width, hypothesisAtomLimit(kind));
  }
  std::vector<Event> events;
  switch (kind) {
    case LearnerKind::L1:
      for (const auto& t : enumerateTerms(width)) events.push_back({Term::top(width), t});
      break;
    case LearnerKind::L2:
      for (const auto& s : allStates(width)) detail::appendNormalEvents(termForState(s), events);
      break;
    case LearnerKind::L3:
      for (const auto& t : enumerateTerms(width)) detail::appendNormalEvents(t, events);
      break;
  }
  return ActionModel(vocab, std::move(events));
}

/// Keeps the events that agree with the observation wherever they apply.
inline ActionModel updateModel(const ActionModel& model, const Observation& obs) {
  detail::requireSameWidth(obs.before.width(), model.width(), "updateModel");
  detail::requireSameWidth(obs.after.width(), model.width(), "updateModel");
  std::vector<Event> kept;
  kept.reserve(model.size());
  for (const auto& e : model.events()) {
    if (!satisfies(obs.before, e.pre) || detail::applyPost(obs.before, e.post) == obs.after) kept.push_back(e);
  }
  return ActionModel(model.vocabulary(), std::move(kept));
}

/// Drops every event whose precondition strictly entails the precondition
/// of another event. Events sharing a precondition are kept or dropped
/// together.
inline ActionModel minimize(const ActionModel& model) {
  const auto& events = model.events();
  std::vector<Event> kept;
  for (const auto& e : events) {
    bool dominated = std::any_of(events.begin(), events.end(), [&](const Event& other) {
      return other.pre != e.pre && entails(e.pre, other.pre);
    });
    if (!dominated) kept.push_back(e);
  }
  return ActionModel(model.vocabulary(), std::move(kept));
}

/// Mutable state of one update learner. `fired` latches after the single
/// definite output.
struct LearnerState {
  LearnerKind kind = LearnerKind::L3;
  ActionModel hypothesis;
  std::vector<bool> observedInputs;
  std::size_t distinctInputs = 0;
  bool fired = false;
  std::size_t steps = 0;
};

inline LearnerState initialLearnerState(const Vocabulary& vocab, LearnerKind kind) {
  LearnerState state;
  state.kind = kind;
  state.hypothesis = initHypothesis(vocab, kind);
  state.observedInputs.assign(static_cast<std::size_t>(vocab.stateCount()), false);
  return state;
}

namespace detail {

inline bool distinctPreconditions(const ActionModel& model) {
  const auto& events = model.events();
  for (std::size_t i = 1; i < events.size(); ++i) {
    if (events[i].pre == events[i - 1].pre) return false;
  }
  return true;
}

inline bool triggerHolds(const LearnerState& state) {
  bool trigger = false;
  switch (state.kind) {
    case LearnerKind::L1: trigger = state.hypothesis.size() == 1; break;
    case LearnerKind::L2: trigger = distinctPreconditions(state.hypothesis); break;
    case LearnerKind::L3: trigger = state.distinctInputs == state.observedInputs.size(); break;
  }
  // A hypothesis that no longer covers every state has been refuted as a
  // member of the target class; a correct target never lets this happen.
  return trigger && isUniversallyApplicable(state.hypothesis);
}

}  // namespace detail

/// One observation for an update learner. Once the learner has fired, all
/// further steps return undecided.
inline std::pair<LearnerState, Verdict<ActionModel>> learnerStep(LearnerState state, const Observation& obs) {
  state.hypothesis = updateModel(state.hypothesis, obs);
  ++state.steps;
  auto input = static_cast<std::size_t>(obs.before.bits());
  if (!state.observedInputs.at(input)) {
    state.observedInputs[input] = true;
    ++state.distinctInputs;
  }
  if (state.fired || !detail::triggerHolds(state)) return {std::move(state), Verdict<ActionModel>::undecided()};
  state.fired = true;
  ActionModel output = state.kind == LearnerKind::L3 ? minimize(state.hypothesis) : state.hypothesis;
  return {std::move(state), Verdict<ActionModel>::identified(std::move(output))};
}

/// Convenience owner of a LearnerState.
class UpdateLearner {
 public:
  UpdateLearner(const Vocabulary& vocab, LearnerKind kind) : state_(initialLearnerState(vocab, kind)) {}

  Verdict<ActionModel> observe(const Observation& obs) {
    auto [next, verdict] = learnerStep(std::move(state_), obs);
    state_ = std::move(next);
    return verdict;
  }

  const LearnerState& state() const noexcept { return state_; }
  const ActionModel& hypothesis() const noexcept { return state_.hypothesis; }
  bool fired() const noexcept { return state_.fired; }

 private:
  LearnerState state_;
};

namespace detail {

inline Term changeTerm(const State& before, const State& after) {
  return Term(after.bits() & ~before.bits(), before.bits() & ~after.bits(), before.width());
}

inline ActionModel conjectureFromOutcomes(const Vocabulary& vocab, const std::vector<std::vector<State>>& seen) {
  std::vector<Event> events;
  for (const auto& s : allStates(vocab.size())) {
    const auto& outs = seen[s.bits()];
    if (outs.empty()) {
      events.push_back({termForState(s), Term::top(vocab.size())});
    } else {
      for (const auto& t : outs) events.push_back({termForState(s), changeTerm(s, t)});
    }
  }
  return ActionModel(vocab, std::move(events));
}

}  // namespace detail

/// Conjecture of the limit learner: one maximal-precondition event per
/// observed transition, and a no-op event for each state never seen as an
/// input.
inline ActionModel limitConjecture(const StreamPrefix& prefix, const Vocabulary& vocab) {
  detail::requireEnumerable(vocab.size(), "limitConjecture");
  std::vector<std::vector<State>> seen(static_cast<std::size_t>(vocab.stateCount()));
  for (const auto& o : prefix) {
    detail::requireSameWidth(o.before.width(), vocab.size(), "limitConjecture");
    detail::requireSameWidth(o.after.width(), vocab.size(), "limitConjecture");
    seen[o.before.bits()].push_back(o.after);
  }
  for (auto& outs : seen) detail::sortUnique(outs);
  return detail::conjectureFromOutcomes(vocab, seen);
}

/// Incremental form of limitConjecture.
class LimitLearner {
 public:
  explicit LimitLearner(const Vocabulary& vocab) : vocab_(vocab), seen_(static_cast<std::size_t>(vocab.stateCount())) {
    detail::requireEnumerable(vocab.size(), "LimitLearner");
  }

  ActionModel observe(const Observation& obs) {
    detail::requireSameWidth(obs.before.width(), vocab_.size(), "LimitLearner");
    detail::requireSameWidth(obs.after.width(), vocab_.size(), "LimitLearner");
    auto& outs = seen_[obs.before.bits()];
    auto it = std::lower_bound(outs.begin(), outs.end(), obs.after);
    if (it == outs.end() || *it != obs.after) outs.insert(it, obs.after);
    return conjecture();
  }

  ActionModel conjecture() const { return detail::conjectureFromOutcomes(vocab_, seen_); }

 private:
  Vocabulary vocab_;
  std::vector<std::vector<State>> seen_;
};

/// An enumerated class of models with a tell-tale set per member.
struct ModelClass {
  std::vector<ActionModel> members;
  std::vector<std::vector<Observation>> tellTales;  // sorted, parallel to members
};

/// Dedupes by equivalence and attaches the DFTT (the graph) of each member.
/// All members must be deterministic and universally applicable.
inline ModelClass deterministicClass(const std::vector<ActionModel>& models) {
  ModelClass cls;
  for (const auto& m : models) {
    bool known = std::any_of(cls.members.begin(), cls.members.end(),
                             [&](const ActionModel& other) { return equivalent(m, other); });
    if (known) continue;
    auto tellTale = dftt(m);
    std::sort(tellTale.begin(), tellTale.end());
    cls.members.push_back(m);
    cls.tellTales.push_back(std::move(tellTale));
  }
  return cls;
}

/// First member whose tell-tale is contained in the prefix and for which the
/// prefix is sound.
inline Verdict<ActionModel> tellTaleStep(const ModelClass& cls, const StreamPrefix& prefix) {
  const auto seen = observationSet(prefix);
  for (std::size_t k = 0; k < cls.members.size(); ++k) {
    if (containsAll(seen, cls.tellTales[k]) && isSoundPrefix(prefix, cls.members[k])) {
      return Verdict<ActionModel>::identified(cls.members[k]);
    }
  }
  return Verdict<ActionModel>::undecided();
}

/// Once-defined streaming wrapper around tellTaleStep.
class TellTaleLearner {
 public:
  explicit TellTaleLearner(std::shared_ptr<const ModelClass> cls)
      : class_(std::move(cls)), stillSound_(class_->members.size(), true) {}

  Verdict<ActionModel> observe(const Observation& obs) {
    auto it = std::lower_bound(seen_.begin(), seen_.end(), obs);
    if (it == seen_.end() || *it != obs) seen_.insert(it, obs);
    for (std::size_t k = 0; k < class_->members.size(); ++k) {
      if (stillSound_[k] && !isSoundPrefix({obs}, class_->members[k])) stillSound_[k] = false;
    }
    if (fired_) return Verdict<ActionModel>::undecided();
    for (std::size_t k = 0; k < class_->members.size(); ++k) {
      if (stillSound_[k] && containsAll(seen_, class_->tellTales[k])) {
        fired_ = true;
        return Verdict<ActionModel>::identified(class_->members[k]);
      }
    }
    return Verdict<ActionModel>::undecided();
  }

  bool fired() const noexcept { return fired_; }
  std::size_t consistentMembers() const noexcept {
    return static_cast<std::size_t>(std::count(stillSound_.begin(), stillSound_.end(), true));
  }

 private:
  std::shared_ptr<const ModelClass> class_;
  std::vector<bool> stillSound_;
  std::vector<Observation> seen_;
  bool fired_ = false;
};

/// Every deterministic, normal, universally applicable model with maximal
/// preconditions: one event per state, each picking a successor state.
inline std::vector<ActionModel> maximalDeterministicModels(const Vocabulary& vocab,
                                                           std::uint64_t limit = std::uint64_t{1} << 20) {
  const std::uint64_t states = vocab.stateCount();
  std::uint64_t count = 1;
  for (std::uint64_t i = 0; i < states; ++i) {
    count *= states;
    if (count > limit) throw CapacityError("maximal deterministic model class", static_cast<std::size_t>(count), limit);
  }
  const auto all = allStates(vocab.size());
  std::vector<ActionModel> models;
  models.reserve(static_cast<std::size_t>(count));
  for (std::uint64_t code = 0; code < count; ++code) {
    std::vector<Event> events;
    std::uint64_t c = code;
    for (const auto& s : all) {
      const State& t = all[static_cast<std::size_t>(c % states)];
      c /= states;
      events.push_back({termForState(s), detail::changeTerm(s, t)});
    }
    models.emplace_back(vocab, std::move(events));
  }
  return models;
}

}  // namespace delearn
