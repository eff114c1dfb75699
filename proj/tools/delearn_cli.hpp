#pragma once

// Command-line driver. Kept in a header so the tests can call run()
// directly with in-memory streams.

#include <algorithm>
#include <atomic>
#include <chrono>
#include <fstream>
#include <memory>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"
#include "delearn/delearn.hpp"

namespace delearn::cli {

using io::Json;

enum class LearnerChoice { L1, L2, L3, Limit, TellTale };

inline LearnerChoice parseLearner(const std::string& name) {
  if (name == "l1") return LearnerChoice::L1;
  if (name == "l2") return LearnerChoice::L2;
  if (name == "l3") return LearnerChoice::L3;
  if (name == "limit") return LearnerChoice::Limit;
  if (name == "telltale") return LearnerChoice::TellTale;
  throw ContractViolation("unknown learner '" + name + "'");
}

inline LearnerKind updateKind(LearnerChoice c) {
  switch (c) {
    case LearnerChoice::L1: return LearnerKind::L1;
    case LearnerChoice::L2: return LearnerKind::L2;
    case LearnerChoice::L3: return LearnerKind::L3;
    default: throw ContractViolation("not an update learner");
  }
}

inline std::string readFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

/// A scenario name, or otherwise a path to a JSON model or library file.
inline Scenario resolveTarget(const std::string& spec, bool libraryFile = false) {
  if (auto s = scenarios::find(spec)) return *s;
  std::string text = readFile(spec);
  if (libraryFile) {
    ActionLibrary lib = io::parseLibrary(text);
    Vocabulary v = lib.vocabulary();
    return Scenario{spec, v, std::move(lib), ""};
  }
  ActionModel m = io::parseModel(text);
  Vocabulary v = m.vocabulary();
  return Scenario{spec, v, std::move(m), ""};
}

namespace detail {

// Exactly one outcome on every state.
inline bool functional(const ActionModel& m) {
  const auto states = allStates(m.width());
  return std::all_of(states.begin(), states.end(), [&](const State& s) { return outcomes(s, m).size() == 1; });
}

// Functional, and each atom is always set, always cleared or always kept:
// the model is equivalent to a single precondition-free event.
inline bool atomicUpToEquivalence(const ActionModel& m) {
  if (!functional(m)) return false;
  const auto states = allStates(m.width());
  for (std::size_t i = 0; i < m.width(); ++i) {
    bool set = true, cleared = true, kept = true;
    for (const auto& s : states) {
      bool after = outcomes(s, m).front().contains(i);
      set = set && after;
      cleared = cleared && !after;
      kept = kept && after == s.contains(i);
    }
    if (!set && !cleared && !kept) return false;
  }
  return true;
}

}  // namespace detail

/// Empty when the learner's target class contains the model up to
/// equivalence.
inline std::string classMismatch(LearnerChoice learner, const ActionModel& target) {
  switch (learner) {
    case LearnerChoice::L1:
      if (!detail::atomicUpToEquivalence(target)) return "l1 expects a precondition-free atomic target";
      break;
    case LearnerChoice::L2:
    case LearnerChoice::L3:
    case LearnerChoice::TellTale:
      if (!detail::functional(target)) return "this learner expects a deterministic, universally applicable target";
      break;
    case LearnerChoice::Limit:
      if (!isUniversallyApplicable(target)) return "limit expects a universally applicable target";
      break;
  }
  return {};
}

struct LearnOptions {
  std::string target;
  std::string learner = "l3";
  std::uint64_t seed = 0;
  std::string policy = "cyclic-canonical";
  std::size_t maxSteps = 1000;
  std::string obsFile;
  bool timing = false;
};

/// Streams observations into the chosen learner until it fires or maxSteps
/// is reached. Returns the single-line JSON report.
inline Json runLearn(const LearnOptions& opt, std::ostream* trace, std::ostream& warn) {
  const auto started = std::chrono::steady_clock::now();
  const Scenario scenario = resolveTarget(opt.target);
  const ActionModel& target = scenario.model();
  const Vocabulary& vocab = target.vocabulary();
  const LearnerChoice learner = parseLearner(opt.learner);
  if (auto why = classMismatch(learner, target); !why.empty()) warn << "warning: " << why << "; running anyway\n";

  std::optional<StreamPrefix> replay;
  std::optional<ObservationStream> stream;
  if (!opt.obsFile.empty()) {
    std::ifstream in(opt.obsFile);
    if (!in) throw ParseError("cannot open '" + opt.obsFile + "'");
    replay = io::readObservations(in, vocab);
  } else {
    stream.emplace(StreamSpec{target, opt.seed, parseStreamPolicy(opt.policy)});
  }
  const std::size_t limit = replay ? std::min(opt.maxSteps, replay->size()) : opt.maxSteps;

  std::optional<UpdateLearner> update;
  std::optional<LimitLearner> limitLearner;
  std::optional<TellTaleLearner> tellTale;
  switch (learner) {
    case LearnerChoice::Limit: limitLearner.emplace(vocab); break;
    case LearnerChoice::TellTale:
      tellTale.emplace(std::make_shared<const ModelClass>(deterministicClass(maximalDeterministicModels(vocab))));
      break;
    default: update.emplace(vocab, updateKind(learner)); break;
  }

  std::optional<ActionModel> verdict;
  std::optional<std::size_t> stepsToVerdict;
  std::size_t step = 0;
  for (; step < limit; ++step) {
    const Observation obs = replay ? (*replay)[step] : stream->next();
    std::size_t survivors = 0;
    std::optional<ActionModel> output;
    if (update) {
      auto v = update->observe(obs);
      survivors = update->hypothesis().size();
      if (v) output = v.value();
    } else if (tellTale) {
      auto v = tellTale->observe(obs);
      survivors = tellTale->consistentMembers();
      if (v) output = v.value();
    } else {
      ActionModel conjecture = limitLearner->observe(obs);
      survivors = conjecture.size();
      if (!verdict || !equivalent(*verdict, conjecture)) stepsToVerdict = step + 1;
      verdict = conjecture;
      output = std::move(conjecture);
    }
    if (trace) {
      *trace << io::traceRecord(step + 1, io::renderObservation(obs, vocab), survivors, output ? &*output : nullptr)
             << "\n";
    }
    if (output && !limitLearner) {
      verdict = std::move(output);
      stepsToVerdict = step + 1;
      ++step;
      break;
    }
  }

  Json report = Json::object();
  report["scenario"] = scenario.name;
  report["learner"] = opt.learner;
  report["seed"] = replay ? Json(nullptr) : Json(opt.seed);
  report["policy"] = replay ? Json("obs-file") : Json(toString(parseStreamPolicy(opt.policy)));
  report["steps"] = step;
  report["steps_to_verdict"] = stepsToVerdict ? Json(*stepsToVerdict) : Json(nullptr);
  report["verdict"] = verdict ? io::modelToJson(*verdict) : Json(nullptr);
  report["equivalent_to_target"] = verdict ? Json(equivalent(*verdict, target)) : Json(nullptr);
  if (opt.timing) {
    report["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }
  return report;
}

inline Json runLibraryLearn(const LearnOptions& opt, std::ostream* trace, std::ostream& warn) {
  const auto started = std::chrono::steady_clock::now();
  const Scenario scenario = resolveTarget(opt.target, true);
  const ActionLibrary& target = scenario.library();
  const Vocabulary& vocab = target.vocabulary();
  const LearnerChoice learner = parseLearner(opt.learner);
  const LearnerKind kind = updateKind(learner);
  for (const auto& [name, model] : target.models()) {
    if (auto why = classMismatch(learner, model); !why.empty()) warn << "warning: " << name << ": " << why << "\n";
  }

  std::vector<TripleObservation> triples;
  if (!opt.obsFile.empty()) {
    std::ifstream in(opt.obsFile);
    if (!in) throw ParseError("cannot open '" + opt.obsFile + "'");
    triples = io::readTriples(in, vocab);
    if (triples.size() > opt.maxSteps) triples.resize(opt.maxSteps);
  } else {
    triples = generateLibraryPrefix(target, opt.seed, opt.maxSteps, parseStreamPolicy(opt.policy));
  }

  LibraryLearner learnerState(vocab, target.names(), kind);
  std::optional<ActionLibrary> verdict;
  std::size_t step = 0;
  for (; step < triples.size(); ++step) {
    auto v = learnerState.observe(triples[step]);
    if (trace) {
      Json j = Json::object();
      j["step"] = step + 1;
      j["obs"] = io::renderTriple(triples[step], vocab);
      j["survivors"] = learnerState.state().perName.at(triples[step].name).hypothesis.size();
      if (v) {
        Json lib = Json::object();
        lib["library"] = io::libraryToJson(v.value());
        j["verdict"] = std::move(lib);
      } else {
        j["verdict"] = "undecided";
      }
      *trace << j.dump() << "\n";
    }
    if (v) {
      verdict = v.value();
      ++step;
      break;
    }
  }

  Json report = Json::object();
  report["scenario"] = scenario.name;
  report["learner"] = opt.learner;
  report["seed"] = opt.obsFile.empty() ? Json(opt.seed) : Json(nullptr);
  report["policy"] = opt.obsFile.empty() ? Json(toString(parseStreamPolicy(opt.policy))) : Json("obs-file");
  report["steps"] = step;
  report["steps_to_verdict"] = verdict ? Json(step) : Json(nullptr);
  report["verdict"] = verdict ? io::libraryToJson(*verdict) : Json(nullptr);
  report["equivalent_to_target"] = verdict ? Json(equivalent(*verdict, target)) : Json(nullptr);
  if (opt.timing) {
    report["elapsed_ms"] =
        std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - started).count();
  }
  return report;
}

inline void printSummary(const Json& report, std::ostream& out) {
  out << "scenario " << report["scenario"].get<std::string>() << ", learner " << report["learner"].get<std::string>()
      << "\n";
  if (report["steps_to_verdict"].is_null()) {
    out << "  no verdict after " << report["steps"].get<std::size_t>() << " observations\n";
    return;
  }
  out << "  verdict at step " << report["steps_to_verdict"].get<std::size_t>() << ", equivalent to target: "
      << (report["equivalent_to_target"].get<bool>() ? "yes" : "no") << "\n";
  const Json& v = report["verdict"];
  auto printEvents = [&](const Json& model, const Vocabulary& vocab, const std::string& indent) {
    for (const auto& e : io::detail::eventsFromJson(model, vocab)) out << indent << io::renderEvent(e, vocab) << "\n";
  };
  const Vocabulary vocab = io::detail::vocabularyFromJson(v);
  if (v.contains("actions")) {
    for (const auto& [name, body] : v["actions"].items()) {
      out << "  " << name << ":\n";
      printEvents(body, vocab, "    ");
    }
  } else {
    printEvents(v, vocab, "    ");
  }
}

inline std::vector<std::string> splitList(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

struct SuiteOptions {
  std::string scenarios = "pushbutton-flip,pushbutton-on,counter-2,counter-3,coin,circuit";
  std::string learners = "l1,l2,l3,limit";
  std::size_t seeds = 5;
  std::string policy = "cyclic-shuffled";
  std::size_t maxSteps = 200;
  std::size_t jobs = 0;
};

/// Runs the (scenario, learner, seed) grid; report lines come out in cell
/// order whatever order the cells finish in.
inline int runSuite(const SuiteOptions& opt, std::ostream& out, std::ostream& err) {
  struct Cell {
    LearnOptions options;
    bool library = false;
    std::string result;
    std::string warnings;
    std::string error;
  };
  std::vector<Cell> cells;
  for (const auto& name : splitList(opt.scenarios)) {
    const bool library = resolveTarget(name, scenarios::find(name) ? false : true).isLibrary();
    for (const auto& learner : splitList(opt.learners)) {
      parseLearner(learner);
      if (library && (learner == "limit" || learner == "telltale")) continue;
      for (std::size_t seed = 0; seed < opt.seeds; ++seed) {
        Cell c;
        c.options.target = name;
        c.options.learner = learner;
        c.options.seed = seed;
        c.options.policy = opt.policy;
        c.options.maxSteps = opt.maxSteps;
        c.library = library;
        cells.push_back(std::move(c));
      }
    }
  }

  std::atomic<std::size_t> nextCell{0};
  auto worker = [&] {
    for (std::size_t i = nextCell++; i < cells.size(); i = nextCell++) {
      Cell& c = cells[i];
      std::ostringstream warn;
      try {
        c.result = (c.library ? runLibraryLearn(c.options, nullptr, warn) : runLearn(c.options, nullptr, warn)).dump();
      } catch (const std::exception& e) {
        c.error = e.what();
      }
      c.warnings = warn.str();
    }
  };
  std::size_t jobs = opt.jobs ? opt.jobs : std::max(1U, std::thread::hardware_concurrency());
  jobs = std::min(jobs, std::max<std::size_t>(cells.size(), 1));
  std::vector<std::thread> threads;
  for (std::size_t j = 0; j < jobs; ++j) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  int status = 0;
  for (const auto& c : cells) {
    if (!c.error.empty()) {
      err << "error: " << c.options.target << "/" << c.options.learner << "/" << c.options.seed << ": " << c.error
          << "\n";
      status = 2;
      continue;
    }
    out << c.result << "\n";
  }
  return status;
}

inline int runGraph(const std::string& targetSpec, bool tellTale, std::ostream& out) {
  const Scenario s = resolveTarget(targetSpec);
  const ActionModel& m = s.model();
  for (const auto& o : tellTale ? dftt(m) : graph(m)) out << io::renderObservation(o, m.vocabulary()) << "\n";
  return 0;
}

inline int runEquiv(const std::string& a, const std::string& b, std::ostream& out) {
  const Scenario sa = resolveTarget(a);
  const Scenario sb = resolveTarget(b);
  const ActionModel& ma = sa.model();
  const ActionModel& mb = sb.model();
  auto witness = inequivalenceWitness(ma, mb);
  if (!witness) {
    out << "equivalent\n";
    return 0;
  }
  auto render = [&](const std::vector<State>& states) {
    std::string r = "[";
    for (std::size_t i = 0; i < states.size(); ++i) r += (i ? ", " : "") + io::renderState(states[i], ma.vocabulary());
    return r + "]";
  };
  out << "inequivalent\n";
  out << "witness " << io::renderState(*witness, ma.vocabulary()) << ": " << render(outcomes(*witness, ma)) << " vs "
      << render(outcomes(*witness, mb)) << "\n";
  return 1;
}

inline int runNormalize(const std::string& path, std::ostream& out) {
  out << io::renderModel(normalize(io::parseRawModel(readFile(path))));
  return 0;
}

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Learn propositional action models from observed state transitions"};
  app.require_subcommand(1);

  LearnOptions learn;
  std::string scenario;
  std::string modelFile;
  std::string libraryFile;
  std::string traceFile;
  bool pretty = false;

  auto addStreamOptions = [&](CLI::App* cmd) {
    cmd->add_option("--seed", learn.seed, "Stream seed");
    cmd->add_option("--policy", learn.policy, "cyclic-canonical | cyclic-shuffled | iid-uniform");
    cmd->add_option("--max-steps", learn.maxSteps, "Stop after this many observations");
    cmd->add_option("--obs-file", learn.obsFile, "Replay observations from a file (overrides --seed)");
    cmd->add_option("--trace", traceFile, "Write line-delimited JSON trace records here");
    cmd->add_flag("--pretty", pretty, "Also print a human-readable summary");
    cmd->add_flag("--timing", learn.timing, "Include elapsed_ms in the report");
  };

  auto* learnCmd = app.add_subcommand("learn", "Run a learner against a scenario or model file");
  learnCmd->add_option("--scenario", scenario, "Built-in scenario");
  learnCmd->add_option("--model", modelFile, "Target model JSON file");
  learnCmd->add_option("--learner", learn.learner, "l1 | l2 | l3 | limit | telltale");
  addStreamOptions(learnCmd);

  auto* libCmd = app.add_subcommand("library-learn", "Learn an action library from name-tagged observations");
  libCmd->add_option("--scenario", scenario, "Built-in library scenario");
  libCmd->add_option("--library", libraryFile, "Target library JSON file");
  libCmd->add_option("--learner", learn.learner, "l1 | l2 | l3");
  addStreamOptions(libCmd);

  std::vector<std::string> positional;
  auto* graphCmd = app.add_subcommand("graph", "Print every observable transition of a model");
  graphCmd->add_option("target", positional, "Scenario name or model file")->expected(0, 1);
  graphCmd->add_option("--model", modelFile, "Model JSON file");
  graphCmd->add_option("--scenario", scenario, "Built-in scenario");
  auto* dfttCmd = app.add_subcommand("dftt", "Print the definite finite tell-tale of a deterministic model");
  dfttCmd->add_option("target", positional, "Scenario name or model file")->expected(0, 1);
  dfttCmd->add_option("--model", modelFile, "Model JSON file");
  dfttCmd->add_option("--scenario", scenario, "Built-in scenario");

  auto* equivCmd = app.add_subcommand("equiv", "Compare two models by outcome sets on every state");
  equivCmd->add_option("models", positional, "Two scenario names or model files")->expected(2)->required();

  auto* normCmd = app.add_subcommand("normalize", "Rewrite a model with formula preconditions into normal form");
  normCmd->add_option("target", positional, "Raw model JSON file")->expected(0, 1);
  normCmd->add_option("--model", modelFile, "Raw model JSON file");

  SuiteOptions suite;
  auto* suiteCmd = app.add_subcommand("suite", "Run a grid of learner runs and print one report per cell");
  suiteCmd->add_option("--scenarios", suite.scenarios, "Comma-separated scenarios");
  suiteCmd->add_option("--learners", suite.learners, "Comma-separated learners");
  suiteCmd->add_option("--seeds", suite.seeds, "Seeds 0..N-1 per cell");
  suiteCmd->add_option("--policy", suite.policy, "Stream policy");
  suiteCmd->add_option("--max-steps", suite.maxSteps, "Observation budget per cell");
  suiteCmd->add_option("--jobs", suite.jobs, "Worker threads (0 = hardware concurrency)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }

  auto pickTarget = [&](const std::string& file) -> std::string {
    std::vector<std::string> given;
    if (!scenario.empty()) given.push_back(scenario);
    if (!file.empty()) given.push_back(file);
    given.insert(given.end(), positional.begin(), positional.end());
    if (given.size() != 1) throw ContractViolation("give exactly one target (scenario name or file)");
    return given.front();
  };

  try {
    if (learnCmd->parsed() || libCmd->parsed()) {
      learn.target = pickTarget(learnCmd->parsed() ? modelFile : libraryFile);
      std::ofstream traceOut;
      if (!traceFile.empty()) {
        traceOut.open(traceFile);
        if (!traceOut) throw ParseError("cannot write '" + traceFile + "'");
      }
      std::ostream* trace = traceFile.empty() ? nullptr : &traceOut;
      Json report = learnCmd->parsed() ? runLearn(learn, trace, err) : runLibraryLearn(learn, trace, err);
      out << report.dump() << "\n";
      if (pretty) printSummary(report, out);
      return 0;
    }
    if (graphCmd->parsed()) return runGraph(pickTarget(modelFile), false, out);
    if (dfttCmd->parsed()) return runGraph(pickTarget(modelFile), true, out);
    if (equivCmd->parsed()) return runEquiv(positional.at(0), positional.at(1), out);
    if (normCmd->parsed()) return runNormalize(pickTarget(modelFile), out);
    if (suiteCmd->parsed()) return runSuite(suite, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace delearn::cli
