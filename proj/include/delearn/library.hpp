#pragma once

// Action libraries: named action models learned together from a stream of
// name-tagged observations.

#include <compare>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "delearn/action_model.hpp"
#include "delearn/learners.hpp"
#include "delearn/stream.hpp"

namespace delearn {

class ActionLibrary {
 public:
  ActionLibrary() = default;
  ActionLibrary(Vocabulary vocab, std::map<std::string, ActionModel> models)
      : vocab_(std::move(vocab)), models_(std::move(models)) {
    for (const auto& [name, model] : models_) {
      if (!(model.vocabulary() == vocab_)) throw VocabularyMismatch("action library: '" + name + "' vocabulary differs");
      if (!isUniversallyApplicable(model)) {
        throw ContractViolation("action library: '" + name + "' is not universally applicable");
      }
    }
  }

  const Vocabulary& vocabulary() const noexcept { return vocab_; }
  const std::map<std::string, ActionModel>& models() const noexcept { return models_; }
  std::vector<std::string> names() const {
    std::vector<std::string> out;
    for (const auto& [name, _] : models_) out.push_back(name);
    return out;
  }
  const ActionModel& at(const std::string& name) const { return models_.at(name); }
  bool contains(const std::string& name) const { return models_.count(name) != 0; }
  std::size_t size() const noexcept { return models_.size(); }

  friend bool operator==(const ActionLibrary&, const ActionLibrary&) = default;

 private:
  Vocabulary vocab_;
  std::map<std::string, ActionModel> models_;
};

/// Libraries over the same names with pairwise equivalent models.
inline bool equivalent(const ActionLibrary& a, const ActionLibrary& b) {
  if (a.names() != b.names()) return false;
  for (const auto& [name, model] : a.models()) {
    if (!equivalent(model, b.at(name))) return false;
  }
  return true;
}

struct TripleObservation {
  State before;
  std::string name;
  State after;

  friend auto operator<=>(const TripleObservation&, const TripleObservation&) = default;
};

/// The a-substream: (before, after) of the triples named `name`, in order.
inline StreamPrefix substream(const std::vector<TripleObservation>& prefix, const std::string& name) {
  StreamPrefix out;
  for (const auto& t : prefix) {
    if (t.name == name) out.push_back({t.before, t.after});
  }
  return out;
}

/// Each cycle emits a seeded shuffle (or canonical order, or iid draws) of
/// every (s, a, s') with s' in s (x) l(a).
inline std::vector<TripleObservation> generateLibraryPrefix(const ActionLibrary& library, std::uint64_t seed,
                                                            std::size_t length,
                                                            StreamPolicy policy = StreamPolicy::CyclicShuffled) {
  std::vector<TripleObservation> pool;
  for (const auto& [name, model] : library.models()) {
    if (!isUniversallyApplicable(model)) throw ContractViolation("library stream: '" + name + "' not universally applicable");
    for (const auto& o : graph(model)) pool.push_back({o.before, name, o.after});
  }
  if (pool.empty()) return {};
  CyclicGenerator<TripleObservation> generator(std::move(pool), seed, policy);
  std::vector<TripleObservation> prefix;
  prefix.reserve(length);
  for (std::size_t i = 0; i < length; ++i) prefix.push_back(generator.next());
  return prefix;
}

struct LibraryLearnerState {
  Vocabulary vocabulary;
  LearnerKind kind = LearnerKind::L3;
  std::vector<std::string> expectedNames;
  std::map<std::string, LearnerState> perName;
  std::map<std::string, std::optional<ActionModel>> latched;
  bool fired = false;
};

inline LibraryLearnerState initialLibraryLearnerState(const Vocabulary& vocab, std::vector<std::string> names,
                                                      LearnerKind kind = LearnerKind::L3) {
  LibraryLearnerState state;
  state.vocabulary = vocab;
  state.kind = kind;
  state.expectedNames = std::move(names);
  std::sort(state.expectedNames.begin(), state.expectedNames.end());
  state.expectedNames.erase(std::unique(state.expectedNames.begin(), state.expectedNames.end()),
                            state.expectedNames.end());
  for (const auto& name : state.expectedNames) {
    state.perName.emplace(name, initialLearnerState(vocab, kind));
    state.latched.emplace(name, std::nullopt);
  }
  return state;
}

/// Routes the triple to the learner for its name (created on first sight for
/// names outside the configured set), latches that learner's output, and
/// fires once every configured name has latched.
inline std::pair<LibraryLearnerState, Verdict<ActionLibrary>> libraryLearnerStep(LibraryLearnerState state,
                                                                                 const TripleObservation& t) {
  auto it = state.perName.find(t.name);
  if (it == state.perName.end()) {
    it = state.perName.emplace(t.name, initialLearnerState(state.vocabulary, state.kind)).first;
    state.latched.emplace(t.name, std::nullopt);
  }
  auto [next, verdict] = learnerStep(std::move(it->second), {t.before, t.after});
  it->second = std::move(next);
  if (verdict) state.latched[t.name] = verdict.value();

  if (state.fired) return {std::move(state), Verdict<ActionLibrary>::undecided()};
  std::map<std::string, ActionModel> models;
  for (const auto& name : state.expectedNames) {
    const auto& latch = state.latched.at(name);
    if (!latch) return {std::move(state), Verdict<ActionLibrary>::undecided()};
    models.emplace(name, *latch);
  }
  state.fired = true;
  ActionLibrary library(state.vocabulary, std::move(models));
  return {std::move(state), Verdict<ActionLibrary>::identified(std::move(library))};
}

class LibraryLearner {
 public:
  LibraryLearner(const Vocabulary& vocab, std::vector<std::string> names, LearnerKind kind = LearnerKind::L3)
      : state_(initialLibraryLearnerState(vocab, std::move(names), kind)) {}

  Verdict<ActionLibrary> observe(const TripleObservation& t) {
    auto [next, verdict] = libraryLearnerStep(std::move(state_), t);
    state_ = std::move(next);
    return verdict;
  }

  const LibraryLearnerState& state() const noexcept { return state_; }

 private:
  LibraryLearnerState state_;
};

}  // namespace delearn
