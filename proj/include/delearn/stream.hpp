#pragma once

// Observation streams. An infinite stream is represented by a seeded
// generator; everything downstream consumes finite prefixes.

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <string>
#include <vector>

#include "delearn/action_model.hpp"
#include "delearn/errors.hpp"

namespace delearn {

using StreamPrefix = std::vector<Observation>;

enum class StreamPolicy { CyclicCanonical, CyclicShuffled, IidUniform };

inline const char* toString(StreamPolicy p) {
  switch (p) {
    case StreamPolicy::CyclicCanonical: return "cyclic-canonical";
    case StreamPolicy::CyclicShuffled: return "cyclic-shuffled";
    case StreamPolicy::IidUniform: return "iid-uniform";
  }
  return "?";
}

inline StreamPolicy parseStreamPolicy(const std::string& name) {
  if (name == "cyclic-canonical" || name == "canonical") return StreamPolicy::CyclicCanonical;
  if (name == "cyclic-shuffled" || name == "shuffled") return StreamPolicy::CyclicShuffled;
  if (name == "iid-uniform" || name == "iid") return StreamPolicy::IidUniform;
  throw ParseError("unknown stream policy '" + name + "'");
}

struct StreamSpec {
  ActionModel target;
  std::uint64_t seed = 0;
  StreamPolicy policy = StreamPolicy::CyclicCanonical;
};

namespace detail {

/// Uniform integer in [0, n). std::mt19937_64 output is fully specified by
/// the standard, unlike the std distributions, so this keeps streams
/// reproducible across standard libraries.
inline std::uint64_t uniformBelow(std::mt19937_64& rng, std::uint64_t n) {
  const std::uint64_t threshold = (std::uint64_t{0} - n) % n;
  for (;;) {
    std::uint64_t r = rng();
    if (r >= threshold) return r % n;
  }
}

template <class T>
void seededShuffle(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    std::size_t j = static_cast<std::size_t>(uniformBelow(rng, i));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace detail

/// Cycles through (or samples from) a fixed pool of items. Shared by single
/// action streams and library streams.
template <class T>
class CyclicGenerator {
 public:
  CyclicGenerator(std::vector<T> pool, std::uint64_t seed, StreamPolicy policy)
      : pool_(std::move(pool)), order_(pool_), rng_(seed), policy_(policy) {}

  bool exhausted() const noexcept { return pool_.empty(); }

  T next() {
    if (pool_.empty()) throw ContractViolation("stream generator has nothing to emit");
    if (policy_ == StreamPolicy::IidUniform) {
      return pool_[static_cast<std::size_t>(detail::uniformBelow(rng_, pool_.size()))];
    }
    if (cursor_ == 0 && policy_ == StreamPolicy::CyclicShuffled) {
      order_ = pool_;
      detail::seededShuffle(order_, rng_);
    }
    T item = order_[cursor_];
    cursor_ = (cursor_ + 1) % order_.size();
    return item;
  }

  std::size_t cycleLength() const noexcept { return pool_.size(); }

 private:
  std::vector<T> pool_;
  std::vector<T> order_;
  std::mt19937_64 rng_;
  StreamPolicy policy_;
  std::size_t cursor_ = 0;
};

/// A sound stream for a universally applicable target that is complete in
/// the limit.
class ObservationStream {
 public:
  explicit ObservationStream(const StreamSpec& spec) : generator_(checkedGraph(spec.target), spec.seed, spec.policy) {}

  Observation next() { return generator_.next(); }
  std::size_t cycleLength() const noexcept { return generator_.cycleLength(); }

 private:
  static std::vector<Observation> checkedGraph(const ActionModel& target) {
    if (!isUniversallyApplicable(target)) {
      throw ContractViolation("stream target must be universally applicable");
    }
    return graph(target);
  }

  CyclicGenerator<Observation> generator_;
};

inline StreamPrefix generatePrefix(const StreamSpec& spec, std::size_t length) {
  ObservationStream stream(spec);
  StreamPrefix prefix;
  prefix.reserve(length);
  for (std::size_t i = 0; i < length; ++i) prefix.push_back(stream.next());
  return prefix;
}

inline bool isSoundPrefix(const StreamPrefix& prefix, const ActionModel& model) {
  return std::all_of(prefix.begin(), prefix.end(), [&](const Observation& o) {
    detail::requireSameWidth(o.after.width(), model.width(), "isSoundPrefix");
    auto outs = outcomes(o.before, model);
    return std::binary_search(outs.begin(), outs.end(), o.after);
  });
}

/// Set(prefix) as a sorted vector without duplicates.
inline std::vector<Observation> observationSet(const StreamPrefix& prefix) {
  std::vector<Observation> set = prefix;
  std::sort(set.begin(), set.end());
  set.erase(std::unique(set.begin(), set.end()), set.end());
  return set;
}

inline bool containsAll(const std::vector<Observation>& sortedSet, const std::vector<Observation>& required) {
  return std::all_of(required.begin(), required.end(),
                     [&](const Observation& o) { return std::binary_search(sortedSet.begin(), sortedSet.end(), o); });
}

inline bool coversGraph(const StreamPrefix& prefix, const ActionModel& model) {
  for (const auto& o : prefix) detail::requireSameWidth(o.before.width(), model.width(), "coversGraph");
  return containsAll(observationSet(prefix), graph(model));
}

/// Definite finite tell-tale of a deterministic, universally applicable
/// model: its whole graph.
inline std::vector<Observation> dftt(const ActionModel& model) {
  TypeFlags flags = classify(model);
  if (!flags.deterministic) throw ContractViolation("dftt: model is not deterministic");
  if (!flags.universallyApplicable) throw ContractViolation("dftt: model is not universally applicable");
  return graph(model);
}

}  // namespace delearn
