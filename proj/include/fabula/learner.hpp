#pragma once

// Learning from answer sets over context-dependent partial
// interpretations (CDPIs).
//
// A CDPI is <inc, exc, context>.  A hypothesis H accepts a positive
// CDPI when some answer set of background + context + H contains all
// of inc and none of exc; it accepts a negative CDPI when no answer
// set does.  The learner searches the enumerated hypothesis space by
// iterative deepening on the summed rule cost, trying id-subsets in
// lexicographic order, so the returned hypothesis has minimal score
// and ties break reproducibly.
//
// Type guards in candidate rules ground over the unary facts of the
// assembled program (nnp/nn/jj tokens, time points), which keeps the
// grounding of each candidate small.

#include <chrono>
#include <functional>
#include <optional>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "ground.hpp"
#include "hypothesis_space.hpp"
#include "mode_bias.hpp"
#include "program.hpp"
#include "solver.hpp"
#include "term.hpp"

namespace fabula {

struct UnsupportedError : std::runtime_error {
  explicit UnsupportedError(const std::string& msg) : std::runtime_error(msg) {}
};

struct PartialInterpretation {
  std::vector<Atom> inc;
  std::vector<Atom> exc;

  bool extended_by(const AtomSet& a) const {
    for (const Atom& x : inc) {
      if (!a.count(x)) return false;
    }
    for (const Atom& x : exc) {
      if (a.count(x)) return false;
    }
    return true;
  }
};

struct CDPI {
  std::string id;
  bool positive = true;
  PartialInterpretation pi;
  Program context;

  // Prints the 3-argument example form.  Complete runs of time facts
  // starting at 1 collapse to a time(1..h) interval.
  std::string str() const {
    std::ostringstream os;
    os << (positive ? "#pos(" : "#neg(") << '{';
    for (size_t i = 0; i < pi.inc.size(); ++i) {
      if (i) os << ',';
      os << pi.inc[i].str();
    }
    os << "},{";
    for (size_t i = 0; i < pi.exc.size(); ++i) {
      if (i) os << ',';
      os << pi.exc[i].str();
    }
    os << "},{";
    std::set<long long> times;
    std::vector<std::string> rest;
    for (const Rule& r : context.rules()) {
      if (r.is_fact() && r.head().predicate == "time" && r.head().args.size() == 1 &&
          r.head().args[0].kind() == Term::Kind::integer) {
        times.insert(r.head().args[0].value());
        continue;
      }
      rest.push_back(r.str());
    }
    bool contiguous = !times.empty() && *times.begin() == 1 &&
                      *times.rbegin() == static_cast<long long>(times.size());
    std::vector<std::string> parts;
    if (contiguous) {
      parts.push_back("time(1.." + std::to_string(*times.rbegin()) + ").");
    } else {
      for (long long t : times) parts.push_back("time(" + std::to_string(t) + ").");
    }
    parts.insert(parts.end(), rest.begin(), rest.end());
    for (size_t i = 0; i < parts.size(); ++i) {
      if (i) os << ' ';
      os << parts[i];
    }
    os << "}).";
    return os.str();
  }
};

struct LearningTask {
  Program background;
  std::vector<ModeDecl> decls;
  BiasConfig config;
  HypothesisSpace space;
  std::vector<CDPI> examples;
};

inline bool accepts(const Program& background, const std::vector<Rule>& hypothesis,
                    const CDPI& ex, const SolveOptions& opts = {}) {
  Program p = background;
  p.add_all(ex.context);
  for (const Rule& r : hypothesis) p.add(r);
  SolveResult res = answer_sets(p, opts);
  bool extended = false;
  for (const AtomSet& a : res.answer_sets) {
    if (ex.pi.extended_by(a)) {
      extended = true;
      break;
    }
  }
  return ex.positive ? extended : !extended;
}

struct Hypothesis {
  std::vector<size_t> ids;
  int score = 0;

  std::vector<Rule> rules(const HypothesisSpace& space) const {
    std::vector<Rule> out;
    for (size_t id : ids) out.push_back(space.rules[id].rule);
    return out;
  }
};

struct LearnOptions {
  double budget_seconds = 60.0;
  SolveOptions solve;
};

struct LearnResult {
  std::optional<Hypothesis> hypothesis;
  size_t subsets_tested = 0;
  bool timed_out = false;
};

// Iterative deepening over summed cost; first accepting subset wins.
// Examples are checked newest first, since the newest example is the
// one the previous hypothesis failed on.
inline LearnResult solve_task(const LearningTask& task, const LearnOptions& opts = {}) {
  LearnResult result;
  const auto deadline = std::chrono::steady_clock::now() +
                        std::chrono::duration_cast<std::chrono::steady_clock::duration>(
                            std::chrono::duration<double>(opts.budget_seconds));
  const std::vector<CandidateRule>& rules = task.space.rules;
  std::vector<Rule> chosen;
  std::vector<size_t> ids;

  // A candidate that cannot be verified within solver or grounder
  // bounds is rejected; only tractable hypotheses are learnable.
  auto subset_accepts = [&]() -> bool {
    ++result.subsets_tested;
    try {
      for (size_t i = task.examples.size(); i-- > 0;) {
        if (!accepts(task.background, chosen, task.examples[i], opts.solve)) return false;
      }
    } catch (const SolveLimitError&) {
      return false;
    } catch (const GroundLimitError&) {
      return false;
    }
    return true;
  };

  bool out_of_time = false;
  std::function<bool(size_t, int)> search = [&](size_t start, int remaining) -> bool {
    if (remaining == 0) {
      if ((result.subsets_tested & 63) == 0 &&
          std::chrono::steady_clock::now() > deadline) {
        out_of_time = true;
        return false;
      }
      return subset_accepts();
    }
    for (size_t i = start; i < rules.size() && !out_of_time; ++i) {
      if (rules[i].cost > remaining) continue;
      ids.push_back(i);
      chosen.push_back(rules[i].rule);
      bool hit = search(i + 1, remaining - rules[i].cost);
      if (hit) return true;
      ids.pop_back();
      chosen.pop_back();
    }
    return false;
  };

  for (int s = 0; s <= task.config.max_penalty && !out_of_time; ++s) {
    if (search(0, s)) {
      result.hypothesis = Hypothesis{ids, s};
      return result;
    }
  }
  result.timed_out = out_of_time;
  return result;
}

struct LearnState {
  LearningTask task;
  std::optional<Hypothesis> current;
};

enum class LearnOutcome { unchanged, relearned, failed };

// Adds fresh examples.  If the current hypothesis already accepts
// them all, no search runs.  Examples accumulate across calls either
// way.
inline LearnOutcome incremental_learn(LearnState& state, const std::vector<CDPI>& fresh,
                                      const LearnOptions& opts = {}) {
  state.task.examples.insert(state.task.examples.end(), fresh.begin(), fresh.end());
  if (state.current) {
    std::vector<Rule> rules = state.current->rules(state.task.space);
    bool all_ok = true;
    try {
      for (const CDPI& ex : fresh) {
        if (!accepts(state.task.background, rules, ex, opts.solve)) {
          all_ok = false;
          break;
        }
      }
    } catch (const SolveLimitError&) {
      all_ok = false;
    } catch (const GroundLimitError&) {
      all_ok = false;
    }
    if (all_ok) return LearnOutcome::unchanged;
  }
  LearnResult res = solve_task(state.task, opts);
  if (res.hypothesis) {
    state.current = res.hypothesis;
    return LearnOutcome::relearned;
  }
  state.current.reset();
  return LearnOutcome::failed;
}

// Everything a reference implementation of the learner would need,
// in its native input syntax.
inline std::string export_task(const LearningTask& task) {
  std::ostringstream os;
  os << "% background\n";
  for (const Rule& r : task.background.rules()) os << r.str() << "\n";
  os << "\n% bias\n";
  for (const ModeDecl& d : task.decls) os << d.str() << "\n";
  os << "#maxv(" << task.config.maxv << ").\n";
  for (const auto& [type, values] : task.config.constants) {
    for (const std::string& v : values) {
      os << "#constant(" << type << "," << v << ").\n";
    }
  }
  os << "\n% examples\n";
  for (const CDPI& ex : task.examples) os << ex.str() << "\n";
  return os.str();
}

// Inputs for building the CDPIs of one answered question.
struct ExampleSpec {
  bool has_choice = false;         // some statement left alternatives open
  Atom query;                      // ground for yes/no, one variable for wh
  std::string query_var;           // empty for yes/no questions
  std::vector<std::string> gold;   // gold tokens: values, or yes|no|maybe
  std::vector<std::string> wrong_values;     // the reasoner's wrong wh values
  std::vector<std::string> distractor_pool;  // story constants of the query type
  Program context;
};

inline std::vector<CDPI> make_examples(const ExampleSpec& spec, std::mt19937& rng,
                                       int* next_id) {
  auto fresh_id = [&] { return "ex" + std::to_string((*next_id)++); };
  auto bind = [&](const std::string& value) {
    Subst s;
    s[spec.query_var] = Term::constant(value);
    return spec.query.substitute(s);
  };
  std::vector<CDPI> out;
  auto push = [&](bool positive, std::vector<Atom> inc, std::vector<Atom> exc) {
    out.push_back(CDPI{fresh_id(), positive, {std::move(inc), std::move(exc)}, spec.context});
  };

  bool truth_question = spec.query_var.empty();
  if (truth_question) {
    const std::string& g = spec.gold.at(0);
    if (g == "maybe") {
      push(true, {spec.query}, {});
      push(true, {}, {spec.query});
    } else if (g == "yes") {
      if (spec.has_choice) {
        push(false, {}, {spec.query});
      } else {
        push(true, {spec.query}, {});
      }
    } else if (g == "no") {
      if (spec.has_choice) {
        push(false, {spec.query}, {});
      } else {
        push(true, {}, {spec.query});
      }
    } else {
      throw UnsupportedError("expected yes/no/maybe answer, got '" + g + "'");
    }
    return out;
  }

  std::set<std::string> gold(spec.gold.begin(), spec.gold.end());
  if (spec.has_choice) {
    for (const std::string& v : spec.gold) push(false, {}, {bind(v)});
    for (const std::string& w : spec.wrong_values) {
      if (!gold.count(w)) push(false, {bind(w)}, {});
    }
    return out;
  }

  std::vector<Atom> inc;
  for (const std::string& v : spec.gold) inc.push_back(bind(v));
  std::vector<Atom> exc;
  std::string distractor;
  for (const std::string& w : spec.wrong_values) {
    if (!gold.count(w)) {
      distractor = w;
      break;
    }
  }
  if (distractor.empty()) {
    std::vector<std::string> pool;
    for (const std::string& c : spec.distractor_pool) {
      if (!gold.count(c)) pool.push_back(c);
    }
    if (!pool.empty()) distractor = pool[rng() % pool.size()];
  }
  if (!distractor.empty()) exc.push_back(bind(distractor));
  push(true, std::move(inc), std::move(exc));
  return out;
}

}  // namespace fabula
