#pragma once

// Built-in scenarios: the coin toss, the four pushbuttons, the n-bit
// counter and the two-switch circuit.

#include <map>
#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "delearn/action_model.hpp"
#include "delearn/errors.hpp"
#include "delearn/io.hpp"
#include "delearn/library.hpp"

namespace delearn {

struct Scenario {
  std::string name;
  Vocabulary vocabulary;
  std::variant<ActionModel, ActionLibrary> target;
  std::string notes;

  bool isLibrary() const noexcept { return std::holds_alternative<ActionLibrary>(target); }
  const ActionModel& model() const {
    if (isLibrary()) throw ContractViolation("scenario '" + name + "' is an action library");
    return std::get<ActionModel>(target);
  }
  const ActionLibrary& library() const {
    if (!isLibrary()) throw ContractViolation("scenario '" + name + "' is a single action");
    return std::get<ActionLibrary>(target);
  }
};

namespace scenarios {

namespace detail {

inline ActionModel model(const Vocabulary& vocab, const std::vector<std::pair<std::string, std::string>>& events) {
  std::vector<Event> out;
  for (const auto& [pre, post] : events) out.push_back({io::parseTerm(pre, vocab), io::parseTerm(post, vocab)});
  return ActionModel(vocab, std::move(out));
}

}  // namespace detail

inline ActionModel coin() {
  Vocabulary v({"h"});
  return detail::model(v, {{"T", "h"}, {"T", "-h"}});
}

inline ActionModel pushbuttonFlip() {
  Vocabulary v({"p"});
  return detail::model(v, {{"p", "-p"}, {"-p", "p"}});
}

inline ActionModel pushbuttonOn() {
  Vocabulary v({"p"});
  return detail::model(v, {{"T", "p"}});
}

inline ActionModel pushbuttonOff() {
  Vocabulary v({"p"});
  return detail::model(v, {{"T", "-p"}});
}

inline ActionModel pushbuttonNoop() {
  Vocabulary v({"p"});
  return detail::model(v, {{"T", "T"}});
}

/// Increment on atoms c1..cn (c1 least significant), written with n+1
/// events: <-c1, c1>, <-ci & c(i-1) & ... & c1, ci & -c(i-1) & ... & -c1>
/// for i = 2..n, and the overflow <cn & ... & c1, -cn & ... & -c1>.
inline ActionModel counter(std::size_t bits) {
  if (bits == 0 || bits > kMaxAtoms) throw ContractViolation("counter needs between 1 and 16 bits");
  std::vector<std::string> atoms;
  for (std::size_t i = 1; i <= bits; ++i) atoms.push_back("c" + std::to_string(i));
  Vocabulary vocab(atoms);
  const std::size_t w = bits;
  std::vector<Event> events;
  for (std::size_t i = 0; i < bits; ++i) {
    const AtomMask lower = fullMask(i);
    const AtomMask bit = AtomMask{1} << i;
    events.push_back({Term(lower, bit, w), Term(bit, lower, w)});
  }
  events.push_back({Term(fullMask(w), 0, w), Term(0, fullMask(w), w)});
  return ActionModel(vocab, std::move(events));
}

/// Two switches in series with a light: flip1 and flip2 over {s1, s2, l}.
inline ActionLibrary circuit() {
  Vocabulary v({"s1", "s2", "l"});
  std::map<std::string, ActionModel> models;
  models.emplace("flip1", detail::model(v, {{"-s1&-s2", "s1&-l"},
                                            {"-s1&s2", "s1&l"},
                                            {"s1&-s2", "-s1&-l"},
                                            {"s1&s2", "-s1&-l"}}));
  models.emplace("flip2", detail::model(v, {{"-s1&-s2", "s2&-l"},
                                            {"-s1&s2", "-s2&-l"},
                                            {"s1&-s2", "s2&l"},
                                            {"s1&s2", "-s2&-l"}}));
  return ActionLibrary(v, std::move(models));
}

inline Scenario single(std::string name, ActionModel m, std::string notes) {
  Vocabulary v = m.vocabulary();
  return Scenario{std::move(name), std::move(v), std::move(m), std::move(notes)};
}

inline std::vector<std::string> names() {
  return {"coin", "pushbutton-flip", "pushbutton-on", "pushbutton-off", "pushbutton-noop", "counter-N", "circuit"};
}

/// Looks up a built-in scenario; "counter-N" takes any N in 1..16.
inline std::optional<Scenario> find(const std::string& name) {
  if (name == "coin") return single(name, coin(), "fair coin toss: non-deterministic, precondition-free");
  if (name == "pushbutton-flip") return single(name, pushbuttonFlip(), "on/off button");
  if (name == "pushbutton-on") return single(name, pushbuttonOn(), "on button");
  if (name == "pushbutton-off") return single(name, pushbuttonOff(), "off button");
  if (name == "pushbutton-noop") return single(name, pushbuttonNoop(), "button wired to nothing");
  if (name == "circuit") {
    ActionLibrary lib = circuit();
    Vocabulary v = lib.vocabulary();
    return Scenario{name, v, std::move(lib), "two switches in series with a light bulb"};
  }
  const std::string prefix = "counter-";
  if (name.rfind(prefix, 0) == 0 && name.size() > prefix.size()) {
    const std::string digits = name.substr(prefix.size());
    if (digits.find_first_not_of("0123456789") != std::string::npos || digits.size() > 2) return std::nullopt;
    std::size_t n = std::stoul(digits);
    if (n == 0 || n > kMaxAtoms) return std::nullopt;
    return single(name, counter(n), std::to_string(n) + "-bit binary counter increment");
  }
  return std::nullopt;
}

inline Scenario get(const std::string& name) {
  auto s = find(name);
  if (!s) throw ContractViolation("unknown scenario '" + name + "'");
  return *s;
}

}  // namespace scenarios
}  // namespace delearn
