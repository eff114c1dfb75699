#pragma once

// Text and JSON formats:
//   term         "p&-q", "T" for the empty conjunction
//   state        "{p,q}", "{}" for the empty state
//   observation  "{} -> {p}"
//   triple       "{s1} flip1 -> {s1,l}"
//   model JSON   {"atoms":[...],"events":[{"pre":["p","-q"],"post":["q"]}]}
//   library JSON {"atoms":[...],"actions":{"name":{"events":[...]}}}

#include <cctype>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "delearn/action_model.hpp"
#include "delearn/errors.hpp"
#include "delearn/library.hpp"
#include "delearn/logic.hpp"

namespace delearn::io {

using Json = nlohmann::ordered_json;

namespace detail {

inline std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

inline std::size_t atomIndex(const Vocabulary& vocab, std::string_view name) {
  auto idx = vocab.indexOf(std::string(name));
  if (!idx) throw ParseError("unknown atom '" + std::string(name) + "'");
  return *idx;
}

}  // namespace detail

inline std::string renderState(const State& s, const Vocabulary& vocab) {
  ::delearn::detail::requireSameWidth(s.width(), vocab.size(), "renderState");
  std::string out = "{";
  bool first = true;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (!s.contains(i)) continue;
    if (!first) out += ',';
    out += vocab.atom(i);
    first = false;
  }
  return out + "}";
}

inline State parseState(std::string_view text, const Vocabulary& vocab) {
  text = detail::trim(text);
  if (text.size() < 2 || text.front() != '{' || text.back() != '}') {
    throw ParseError("state must be written as {a,b,...}: '" + std::string(text) + "'");
  }
  std::string_view body = detail::trim(text.substr(1, text.size() - 2));
  AtomMask bits = 0;
  while (!body.empty()) {
    auto comma = body.find(',');
    auto name = detail::trim(body.substr(0, comma));
    if (name.empty()) throw ParseError("empty atom in state '" + std::string(text) + "'");
    bits |= AtomMask{1} << detail::atomIndex(vocab, name);
    if (comma == std::string_view::npos) break;
    body = body.substr(comma + 1);
    if (detail::trim(body).empty()) throw ParseError("trailing comma in state '" + std::string(text) + "'");
  }
  return State(bits, vocab.size());
}

inline std::string renderObservation(const Observation& o, const Vocabulary& vocab) {
  return renderState(o.before, vocab) + " -> " + renderState(o.after, vocab);
}

inline Observation parseObservation(std::string_view line, const Vocabulary& vocab) {
  auto arrow = line.find("->");
  if (arrow == std::string_view::npos) throw ParseError("observation needs '->': '" + std::string(line) + "'");
  return {parseState(line.substr(0, arrow), vocab), parseState(line.substr(arrow + 2), vocab)};
}

inline std::string renderTriple(const TripleObservation& t, const Vocabulary& vocab) {
  return renderState(t.before, vocab) + " " + t.name + " -> " + renderState(t.after, vocab);
}

inline TripleObservation parseTriple(std::string_view line, const Vocabulary& vocab) {
  auto close = line.find('}');
  auto arrow = line.find("->");
  if (close == std::string_view::npos || arrow == std::string_view::npos || arrow < close) {
    throw ParseError("triple must look like '{s} name -> {t}': '" + std::string(line) + "'");
  }
  auto name = detail::trim(line.substr(close + 1, arrow - close - 1));
  if (name.empty()) throw ParseError("triple is missing an action name: '" + std::string(line) + "'");
  return {parseState(line.substr(0, close + 1), vocab), std::string(name), parseState(line.substr(arrow + 2), vocab)};
}

inline std::vector<std::string> termLiterals(const Term& t, const Vocabulary& vocab) {
  ::delearn::detail::requireSameWidth(t.width(), vocab.size(), "renderTerm");
  std::vector<std::string> lits;
  for (std::size_t i = 0; i < vocab.size(); ++i) {
    if (t.code(i) == 1) lits.push_back(vocab.atom(i));
    if (t.code(i) == 2) lits.push_back("-" + vocab.atom(i));
  }
  return lits;
}

inline std::string renderTerm(const Term& t, const Vocabulary& vocab) {
  auto lits = termLiterals(t, vocab);
  if (lits.empty()) return "T";
  std::string out = lits.front();
  for (std::size_t i = 1; i < lits.size(); ++i) out += "&" + lits[i];
  return out;
}

inline Term termFromLiterals(const std::vector<std::string>& literals, const Vocabulary& vocab) {
  AtomMask pos = 0;
  AtomMask neg = 0;
  for (const auto& raw : literals) {
    std::string_view lit = detail::trim(raw);
    bool negated = !lit.empty() && lit.front() == '-';
    if (negated) lit.remove_prefix(1);
    AtomMask bit = AtomMask{1} << detail::atomIndex(vocab, detail::trim(lit));
    (negated ? neg : pos) |= bit;
  }
  if ((pos & neg) != 0) throw ParseError("inconsistent conjunction of literals");
  return Term(pos, neg, vocab.size());
}

inline Term parseTerm(std::string_view text, const Vocabulary& vocab) {
  text = detail::trim(text);
  if (text == "T" || text.empty()) return Term::top(vocab.size());
  std::vector<std::string> lits;
  while (true) {
    auto amp = text.find('&');
    lits.emplace_back(detail::trim(text.substr(0, amp)));
    if (amp == std::string_view::npos) break;
    text = text.substr(amp + 1);
  }
  return termFromLiterals(lits, vocab);
}

inline std::string renderEvent(const Event& e, const Vocabulary& vocab) {
  return "<" + renderTerm(e.pre, vocab) + ", " + renderTerm(e.post, vocab) + ">";
}

namespace detail {

class FormulaParser {
 public:
  FormulaParser(std::string_view text, const Vocabulary& vocab) : text_(text), vocab_(vocab) {}

  Formula parse() {
    Formula f = parseOr();
    skipSpace();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return f;
  }

 private:
  Formula parseOr() {
    Formula f = parseAnd();
    while (accept('|')) f = Formula::disjunction(std::move(f), parseAnd());
    return f;
  }

  Formula parseAnd() {
    Formula f = parseUnary();
    while (accept('&')) f = Formula::conjunction(std::move(f), parseUnary());
    return f;
  }

  Formula parseUnary() {
    if (accept('-') || accept('!') || accept('~')) return Formula::negation(parseUnary());
    if (accept('(')) {
      Formula f = parseOr();
      if (!accept(')')) fail("expected ')'");
      return f;
    }
    skipSpace();
    std::size_t start = pos_;
    while (pos_ < text_.size() && (std::isalnum(static_cast<unsigned char>(text_[pos_])) || text_[pos_] == '_')) ++pos_;
    if (start == pos_) fail("expected an atom");
    std::string_view name = text_.substr(start, pos_ - start);
    if (name == "T") return Formula::top();
    if (name == "F") return Formula::bottom();
    return Formula::atom(atomIndex(vocab_, name));
  }

  void skipSpace() {
    while (pos_ < text_.size() && std::isspace(static_cast<unsigned char>(text_[pos_]))) ++pos_;
  }

  bool accept(char c) {
    skipSpace();
    if (pos_ < text_.size() && text_[pos_] == c) {
      ++pos_;
      return true;
    }
    return false;
  }

  [[noreturn]] void fail(const std::string& msg) const {
    throw ParseError("formula '" + std::string(text_) + "': " + msg + " at offset " + std::to_string(pos_));
  }

  std::string_view text_;
  const Vocabulary& vocab_;
  std::size_t pos_ = 0;
};

}  // namespace detail

/// Grammar: or := and ('|' and)*, and := unary ('&' unary)*,
/// unary := '-' unary | '(' or ')' | 'T' | 'F' | atom.
inline Formula parseFormula(std::string_view text, const Vocabulary& vocab) {
  return detail::FormulaParser(text, vocab).parse();
}

namespace detail {

inline Vocabulary vocabularyFromJson(const Json& j) {
  if (!j.is_object() || !j.contains("atoms") || !j["atoms"].is_array()) throw ParseError("missing \"atoms\" array");
  std::vector<std::string> atoms;
  for (const auto& a : j["atoms"]) {
    if (!a.is_string()) throw ParseError("atoms must be strings");
    atoms.push_back(a.get<std::string>());
  }
  try {
    return Vocabulary(std::move(atoms));
  } catch (const ContractViolation& e) {
    throw ParseError(e.what());
  }
}

inline Term termFromJson(const Json& j, const Vocabulary& vocab) {
  if (j.is_string()) return parseTerm(j.get<std::string>(), vocab);
  if (!j.is_array()) throw ParseError("term must be an array of literals");
  std::vector<std::string> lits;
  for (const auto& l : j) {
    if (!l.is_string()) throw ParseError("literals must be strings");
    lits.push_back(l.get<std::string>());
  }
  return termFromLiterals(lits, vocab);
}

inline const Json& eventsArray(const Json& j) {
  if (!j.is_object() || !j.contains("events") || !j["events"].is_array()) throw ParseError("missing \"events\" array");
  return j["events"];
}

inline const Json& field(const Json& event, const char* name) {
  if (!event.is_object() || !event.contains(name)) throw ParseError(std::string("event is missing \"") + name + "\"");
  return event[name];
}

inline std::vector<Event> eventsFromJson(const Json& j, const Vocabulary& vocab) {
  std::vector<Event> events;
  for (const auto& e : eventsArray(j)) {
    events.push_back({termFromJson(field(e, "pre"), vocab), termFromJson(field(e, "post"), vocab)});
  }
  return events;
}

inline Json eventsToJson(const ActionModel& model) {
  Json events = Json::array();
  for (const auto& e : model.events()) {
    Json ev = Json::object();
    ev["pre"] = termLiterals(e.pre, model.vocabulary());
    ev["post"] = termLiterals(e.post, model.vocabulary());
    events.push_back(std::move(ev));
  }
  return events;
}

inline Json parseJsonText(std::string_view text) {
  try {
    return Json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
}

}  // namespace detail

inline Json modelToJson(const ActionModel& model) {
  Json j = Json::object();
  j["atoms"] = model.vocabulary().atoms();
  j["events"] = detail::eventsToJson(model);
  return j;
}

inline ActionModel modelFromJson(const Json& j) {
  Vocabulary vocab = detail::vocabularyFromJson(j);
  return ActionModel(vocab, detail::eventsFromJson(j, vocab));
}

/// Canonical rendering: two-space indented JSON with a trailing newline.
inline std::string renderModel(const ActionModel& model) { return modelToJson(model).dump(2) + "\n"; }

inline ActionModel parseModel(std::string_view text) { return modelFromJson(detail::parseJsonText(text)); }

/// Raw models accept a formula string ("p | -q") or a literal array as "pre".
inline RawActionModel rawModelFromJson(const Json& j) {
  RawActionModel raw{detail::vocabularyFromJson(j), {}};
  for (const auto& e : detail::eventsArray(j)) {
    const Json& pre = detail::field(e, "pre");
    Formula f = pre.is_string() ? parseFormula(pre.get<std::string>(), raw.vocabulary)
                                : Formula::fromTerm(detail::termFromJson(pre, raw.vocabulary));
    raw.events.push_back({std::move(f), detail::termFromJson(detail::field(e, "post"), raw.vocabulary)});
  }
  return raw;
}

inline RawActionModel parseRawModel(std::string_view text) { return rawModelFromJson(detail::parseJsonText(text)); }

inline Json libraryToJson(const ActionLibrary& library) {
  Json j = Json::object();
  j["atoms"] = library.vocabulary().atoms();
  Json actions = Json::object();
  for (const auto& [name, model] : library.models()) {
    Json a = Json::object();
    a["events"] = detail::eventsToJson(model);
    actions[name] = std::move(a);
  }
  j["actions"] = std::move(actions);
  return j;
}

inline ActionLibrary libraryFromJson(const Json& j) {
  Vocabulary vocab = detail::vocabularyFromJson(j);
  if (!j.contains("actions") || !j["actions"].is_object()) throw ParseError("missing \"actions\" object");
  std::map<std::string, ActionModel> models;
  for (const auto& [name, body] : j["actions"].items()) {
    models.emplace(name, ActionModel(vocab, detail::eventsFromJson(body, vocab)));
  }
  return ActionLibrary(vocab, std::move(models));
}

inline std::string renderLibrary(const ActionLibrary& library) { return libraryToJson(library).dump(2) + "\n"; }

inline ActionLibrary parseLibrary(std::string_view text) { return libraryFromJson(detail::parseJsonText(text)); }

namespace detail {

template <class F>
void forEachDataLine(std::istream& in, F&& f) {
  std::string line;
  while (std::getline(in, line)) {
    auto t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    f(t);
  }
}

}  // namespace detail

/// One observation per line; blank lines and '#' comments are skipped.
inline StreamPrefix readObservations(std::istream& in, const Vocabulary& vocab) {
  StreamPrefix prefix;
  detail::forEachDataLine(in, [&](std::string_view line) { prefix.push_back(parseObservation(line, vocab)); });
  return prefix;
}

inline std::vector<TripleObservation> readTriples(std::istream& in, const Vocabulary& vocab) {
  std::vector<TripleObservation> triples;
  detail::forEachDataLine(in, [&](std::string_view line) { triples.push_back(parseTriple(line, vocab)); });
  return triples;
}

/// One line-delimited JSON learner trace record (no trailing newline).
inline std::string traceRecord(std::size_t step, const std::string& obs, std::size_t survivors,
                               const ActionModel* verdict) {
  Json j = Json::object();
  j["step"] = step;
  j["obs"] = obs;
  j["survivors"] = survivors;
  if (verdict) {
    Json v = Json::object();
    v["model"] = modelToJson(*verdict);
    j["verdict"] = std::move(v);
  } else {
    j["verdict"] = "undecided";
  }
  return j.dump();
}

}  // namespace delearn::io
