#pragma once

// End-to-end question answering over stories.
//
// A Session owns the vocabulary, the accumulated mode declarations,
// the growing background (frame axioms plus type facts for every
// constant seen), the learned hypothesis and the example set.
//
// Training walks the stories in order.  Each question is answered
// with the current hypothesis; a wrong answer is turned into CDPIs
// and the learner runs, reusing cached hypothesis spaces.  Testing
// answers questions with the hypothesis frozen.
//
// Representation of a story prefix (event-calculus mode):
//   statement, "be" fluent, negated  -> terminatedAt(F,t) fact
//   statement, "be" fluent           -> initiatedAt(F,t) fact
//   statement, other fluent          -> happensAt(F,t) fact
//   disjunctive statement            -> one 1{...}k choice over the
//                                       alternatives
//   question                         -> holdsAt(F,t) query at t =
//                                       last statement time + 1
// Statements are clocked 1,2,3,... in story order; questions do not
// advance the clock.  Without the event calculus fluents are bare
// timeless facts and the query is the bare fluent atom.

#include <algorithm>
#include <chrono>
#include <map>
#include <optional>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "babi.hpp"
#include "event_calculus.hpp"
#include "ground.hpp"
#include "hypothesis_space.hpp"
#include "learner.hpp"
#include "lexicon.hpp"
#include "mode_bias.hpp"
#include "normalize.hpp"
#include "parse_backend.hpp"
#include "program.hpp"
#include "solver.hpp"
#include "term.hpp"

namespace fabula {

inline std::string number_word(long long n) {
  static const char* words[] = {"none", "one", "two",   "three", "four", "five",
                                "six",  "seven", "eight", "nine",  "ten"};
  if (n >= 0 && n <= 10) return words[n];
  return std::to_string(n);
}

struct Answer {
  enum class Kind { yes, no, maybe, values, count };
  Kind kind = Kind::no;
  std::vector<std::string> values;  // sorted, deduplicated
  long long count = 0;

  static Answer truth(Entailment e) {
    Answer a;
    a.kind = e == Entailment::all ? Kind::yes : (e == Entailment::some ? Kind::maybe : Kind::no);
    return a;
  }

  std::string str() const {
    switch (kind) {
      case Kind::yes: return "yes";
      case Kind::no: return "no";
      case Kind::maybe: return "maybe";
      case Kind::count: return number_word(count);
      default: {
        std::string out;
        for (size_t i = 0; i < values.size(); ++i) {
          if (i) out += ',';
          out += values[i];
        }
        return out;
      }
    }
  }

  bool matches(const std::vector<std::string>& gold) const {
    if (kind == Kind::values) {
      std::set<std::string> want(gold.begin(), gold.end());
      std::set<std::string> got(values.begin(), values.end());
      return want == got;
    }
    return gold.size() == 1 && gold[0] == str();
  }
};

struct PipelineConfig {
  bool ec = true;
  int maxv = 0;  // 0 picks the default: 4 with the event calculus, 3 without
  int max_rule_size = 2;
  int max_penalty = 50;
  size_t space_cap = 20000;
  bool allow_constraints = false;
  unsigned seed = 0;
  std::string space_cache_dir;
  double learn_budget_seconds = 60.0;
};

struct QuestionOutcome {
  std::string question;
  std::string gold;
  std::string predicted;
  bool correct = false;
};

struct Report {
  size_t train_questions = 0;
  size_t train_correct = 0;
  size_t test_questions = 0;
  size_t test_correct = 0;
  size_t learn_invocations = 0;  // searches actually run
  std::vector<std::string> failures;
  std::vector<std::string> warnings;
  std::vector<std::string> learned_rules;
  int hypothesis_score = 0;
  SpaceCache::Stats space_stats;
  double train_seconds = 0;
  double test_seconds = 0;
  std::vector<QuestionOutcome> test_outcomes;

  double test_accuracy() const {
    return test_questions == 0
               ? 0.0
               : static_cast<double>(test_correct) / static_cast<double>(test_questions);
  }
};

class Session {
 public:
  Session(const Lexicon& lex, PipelineConfig cfg, ParserBackend& backend,
          ParseCache* parse_cache = nullptr)
      : lex_(lex),
        cfg_(std::move(cfg)),
        backend_(backend),
        parse_cache_(parse_cache),
        space_cache_(cfg_.space_cache_dir),
        rng_(cfg_.seed) {
    if (cfg_.ec) background_.add_all(frame_axioms());
    learn_.task.background = background_;
    learn_.task.config = bias_config();
  }

  struct StoryData {
    Story story;  // normalized
    std::vector<FluentRep> reps;
  };

  BiasConfig bias_config() const {
    BiasConfig b;
    b.maxv = cfg_.maxv > 0 ? cfg_.maxv : (cfg_.ec ? 4 : 3);
    b.max_rule_size = cfg_.max_rule_size;
    b.max_penalty = cfg_.max_penalty;
    b.allow_constraints = cfg_.allow_constraints;
    b.space_cap = cfg_.space_cap;
    b.constants = bias_constants(lex_);
    return b;
  }

  StoryData prepare(const Story& raw) {
    StoryData sd;
    sd.story = normalize(raw, lex_, &report_.warnings);
    for (const Sentence& s : sd.story.sentences) {
      sd.reps.push_back(parse_sentence(backend_, s, lex_, parse_cache_));
      register_constants(sd.reps.back());
    }
    return sd;
  }

  // Narrative program for the statements before sentence q_idx.
  Program context_for(const StoryData& sd, size_t q_idx, bool* has_choice) const {
    if (has_choice) *has_choice = false;
    if (cfg_.ec) {
      std::vector<EventRecord> records;
      int group = 0;
      for (size_t i = 0; i < q_idx; ++i) {
        const Sentence& s = sd.story.sentences[i];
        if (s.is_question) continue;
        const FluentRep& rep = sd.reps[i];
        int this_group = 0;
        if (rep.disjunctive) {
          this_group = ++group;
          if (has_choice) *has_choice = true;
        }
        for (const Atom& a : rep.atoms) {
          EventRecord r;
          r.kind = be_rooted(a.predicate)
                       ? (s.negated ? EventKind::terminated : EventKind::initiated)
                       : EventKind::happens;
          r.fluent = fluent_term(a);
          r.time = s.index;
          r.choice_group = this_group;
          records.push_back(std::move(r));
        }
      }
      return reify(records, sd.story.sentences[q_idx].index);
    }
    Program p;
    for (size_t i = 0; i < q_idx; ++i) {
      const Sentence& s = sd.story.sentences[i];
      if (s.is_question) continue;
      const FluentRep& rep = sd.reps[i];
      if (rep.disjunctive) {
        if (has_choice) *has_choice = true;
        p.add(Rule::choice(1, rep.atoms, rep.atoms.size(), {}));
      } else {
        for (const Atom& a : rep.atoms) p.add(Rule::fact(a));
      }
    }
    return p;
  }

  Atom query_atom(const StoryData& sd, size_t q_idx) const {
    const Atom& a = sd.reps[q_idx].atoms.front();
    if (!cfg_.ec) return a;
    return Atom{"holdsAt",
                {fluent_term(a), Term::integer(sd.story.sentences[q_idx].index)}};
  }

  Answer answer_question(const StoryData& sd, size_t q_idx) {
    const Sentence& q = sd.story.sentences[q_idx];
    Program p = background_;
    for (const Rule& r : hypothesis_rules()) p.add(r);
    p.add_all(context_for(sd, q_idx, nullptr));
    SolveResult res = answer_sets(p);
    Atom query = query_atom(sd, q_idx);

    if (sd.reps[q_idx].query_var.empty()) {
      if (res.answer_sets.empty()) return Answer::truth(Entailment::none);
      size_t holding = 0;
      for (const AtomSet& a : res.answer_sets) holding += a.count(query) ? 1 : 0;
      Entailment e = holding == res.answer_sets.size()
                         ? Entailment::all
                         : (holding > 0 ? Entailment::some : Entailment::none);
      return Answer::truth(e);
    }

    const std::string& var = sd.reps[q_idx].query_var;
    if (q.wh == "how_many") {
      Answer ans;
      ans.kind = Answer::Kind::count;
      std::optional<std::set<std::string>> common;
      for (const AtomSet& a : res.answer_sets) {
        std::set<std::string> here;
        for (const Atom& ga : a) {
          if (auto s = unify(query, ga)) here.insert(s->at(var).str());
        }
        if (!common) {
          common = std::move(here);
        } else {
          std::set<std::string> merged;
          std::set_intersection(common->begin(), common->end(), here.begin(), here.end(),
                                std::inserter(merged, merged.begin()));
          *common = std::move(merged);
        }
      }
      ans.count = common ? static_cast<long long>(common->size()) : 0;
      return ans;
    }

    Answer ans;
    ans.kind = Answer::Kind::values;
    std::set<std::string> vals;
    for (const AtomSet& a : res.answer_sets) {
      for (const Atom& ga : a) {
        if (auto s = unify(query, ga)) vals.insert(s->at(var).str());
      }
    }
    ans.values.assign(vals.begin(), vals.end());
    return ans;
  }

  void train(const std::vector<Story>& stories) {
    auto t0 = std::chrono::steady_clock::now();
    for (const Story& raw : stories) {
      StoryData sd;
      try {
        sd = prepare(raw);
      } catch (const std::exception& e) {
        report_.failures.push_back(std::string("story skipped: ") + e.what());
        continue;
      }
      for (size_t i = 0; i < sd.story.sentences.size(); ++i) {
        if (!sd.story.sentences[i].is_question) continue;
        ++report_.train_questions;
        train_question(sd, i);
      }
    }
    report_.train_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    snapshot_hypothesis();
  }

  void test(const std::vector<Story>& stories) {
    auto t0 = std::chrono::steady_clock::now();
    for (const Story& raw : stories) {
      StoryData sd;
      try {
        sd = prepare(raw);
      } catch (const std::exception& e) {
        report_.failures.push_back(std::string("story skipped: ") + e.what());
        continue;
      }
      for (size_t i = 0; i < sd.story.sentences.size(); ++i) {
        const Sentence& s = sd.story.sentences[i];
        if (!s.is_question) continue;
        ++report_.test_questions;
        QuestionOutcome qo;
        qo.question = s.text;
        qo.gold = join(s.answer.answers);
        try {
          Answer ans = answer_question(sd, i);
          qo.predicted = ans.str();
          qo.correct = ans.matches(s.answer.answers);
        } catch (const std::exception& e) {
          qo.predicted = std::string("error: ") + e.what();
          report_.failures.push_back("test '" + s.text + "': " + e.what());
        }
        if (qo.correct) ++report_.test_correct;
        report_.test_outcomes.push_back(std::move(qo));
      }
    }
    report_.test_seconds +=
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    report_.space_stats = space_cache_.stats();
  }

  std::vector<Rule> hypothesis_rules() const {
    return learn_.current ? learn_.current->rules(learn_.task.space) : std::vector<Rule>{};
  }

  const LearnState& learn_state() const { return learn_; }
  const std::vector<ModeDecl>& declarations() const { return decls_; }
  const Program& background() const { return background_; }
  const SpaceCache& space_cache() const { return space_cache_; }
  Report& report() { return report_; }

  // Exposed so a caller can rebuild one question's CDPIs.
  std::vector<CDPI> question_examples(const StoryData& sd, size_t q_idx, const Answer& predicted) {
    ExampleSpec spec = example_spec(sd, q_idx, predicted);
    return make_examples(spec, rng_, &next_example_id_);
  }

 private:
  static std::string join(const std::vector<std::string>& v) {
    std::string out;
    for (size_t i = 0; i < v.size(); ++i) {
      if (i) out += ',';
      out += v[i];
    }
    return out;
  }

  static Term fluent_term(const Atom& a) {
    return a.args.empty() ? Term::constant(a.predicate) : Term::compound(a.predicate, a.args);
  }

  void register_constants(const FluentRep& rep) {
    for (const Atom& a : rep.atoms) {
      for (const Term& arg : a.args) {
        if (arg.kind() != Term::Kind::constant) continue;
        auto it = lex_.tags.find(arg.name());
        if (it == lex_.tags.end()) continue;
        std::string fact = it->second + "(" + arg.name() + ")";
        if (type_facts_.insert(fact).second) {
          background_.add(Rule::fact(Atom{it->second, {arg}}));
        }
      }
    }
  }

  ExampleSpec example_spec(const StoryData& sd, size_t q_idx, const Answer& predicted) {
    const Sentence& q = sd.story.sentences[q_idx];
    ExampleSpec spec;
    spec.query = query_atom(sd, q_idx);
    spec.query_var = sd.reps[q_idx].query_var;
    spec.gold = q.answer.answers;
    spec.context = context_for(sd, q_idx, &spec.has_choice);
    if (q.wh == "how_many") {
      throw UnsupportedError(
          "how-many questions need aggregate rules (aggregates unsupported)");
    }
    if (!spec.query_var.empty()) {
      if (predicted.kind == Answer::Kind::values) spec.wrong_values = predicted.values;
      spec.distractor_pool = distractor_pool(sd, q_idx);
    }
    return spec;
  }

  // Constants of the query's type seen in the prefix, preferring
  // those mentioned alongside the question's subject.
  std::vector<std::string> distractor_pool(const StoryData& sd, size_t q_idx) const {
    const Sentence& q = sd.story.sentences[q_idx];
    static const std::map<std::string, std::string> wh_type = {
        {"where", "nn"}, {"what", "nn"}, {"when", "nn"}, {"who", "nnp"}, {"why", "jj"}};
    auto it = wh_type.find(q.wh);
    if (it == wh_type.end()) return {};
    const std::string& type = it->second;
    std::string subject;
    for (const Term& arg : sd.reps[q_idx].atoms.front().args) {
      if (arg.kind() == Term::Kind::constant) {
        subject = arg.name();
        break;
      }
    }
    std::set<std::string> scoped, all;
    for (size_t i = 0; i < q_idx; ++i) {
      if (sd.story.sentences[i].is_question) continue;
      for (const Atom& a : sd.reps[i].atoms) {
        bool mentions = false;
        for (const Term& arg : a.args) {
          if (arg.kind() == Term::Kind::constant && arg.name() == subject) mentions = true;
        }
        for (const Term& arg : a.args) {
          if (arg.kind() != Term::Kind::constant) continue;
          if (!lex_.has_tag(arg.name(), type)) continue;
          all.insert(arg.name());
          if (mentions) scoped.insert(arg.name());
        }
      }
    }
    const std::set<std::string>& pick = scoped.empty() ? all : scoped;
    return {pick.begin(), pick.end()};
  }

  void train_question(const StoryData& sd, size_t q_idx) {
    const Sentence& q = sd.story.sentences[q_idx];
    Answer predicted;
    bool answered = false;
    try {
      predicted = answer_question(sd, q_idx);
      answered = true;
    } catch (const std::exception& e) {
      report_.failures.push_back("train '" + q.text + "': " + e.what());
    }
    if (answered && predicted.matches(q.answer.answers)) {
      ++report_.train_correct;
      return;
    }
    std::vector<CDPI> examples;
    try {
      examples = question_examples(sd, q_idx, predicted);
    } catch (const UnsupportedError& e) {
      report_.failures.push_back("learning failed on '" + q.text + "': " + e.what());
      return;
    }
    try {
      refresh_task(sd, q_idx);
    } catch (const SpaceLimitError& e) {
      report_.failures.push_back("learning failed on '" + q.text + "': " + e.what());
      return;
    }
    LearnOptions lo;
    lo.budget_seconds = cfg_.learn_budget_seconds;
    LearnOutcome outcome;
    try {
      outcome = incremental_learn(learn_, examples, lo);
    } catch (const std::exception& e) {
      report_.failures.push_back("learning failed on '" + q.text + "': " + e.what());
      return;
    }
    if (outcome != LearnOutcome::unchanged) ++report_.learn_invocations;
    if (outcome == LearnOutcome::failed) {
      report_.failures.push_back("learning failed on '" + q.text + "'");
    }
  }

  // Folds the story's sentences into the declaration set and swaps in
  // the (cached) space for the grown bias; the current hypothesis is
  // remapped onto the new space by rule text.
  void refresh_task(const StoryData& sd, size_t q_idx) {
    std::vector<std::pair<Sentence, ModeFluent>> items;
    for (size_t i = 0; i <= q_idx && i < sd.story.sentences.size(); ++i) {
      const Sentence& s = sd.story.sentences[i];
      if (s.is_question && i != q_idx) continue;
      items.emplace_back(s, mode_fluent(s, sd.reps[i], lex_));
    }
    for (const ModeDecl& d : generate_declarations(items, cfg_.ec)) {
      if (decl_seen_.insert(d.str()).second) {
        (d.head ? head_decls_ : body_decls_).push_back(d);
      }
    }
    decls_ = body_decls_;
    decls_.insert(decls_.end(), head_decls_.begin(), head_decls_.end());

    const HypothesisSpace& space = space_cache_.lookup(decls_, learn_.task.config);
    learn_.task.background = background_;
    learn_.task.decls = decls_;
    if (space.key != learn_.task.space.key) {
      std::optional<Hypothesis> remapped;
      if (learn_.current) {
        std::map<std::string, size_t> by_text;
        for (size_t i = 0; i < space.rules.size(); ++i) {
          by_text[space.rules[i].rule.str()] = i;
        }
        Hypothesis h;
        h.score = learn_.current->score;
        bool ok = true;
        for (size_t id : learn_.current->ids) {
          auto it = by_text.find(learn_.task.space.rules[id].rule.str());
          if (it == by_text.end()) {
            ok = false;
            break;
          }
          h.ids.push_back(it->second);
        }
        if (ok) remapped = h;
      }
      learn_.task.space = space;
      learn_.current = remapped;
    }
  }

  void snapshot_hypothesis() {
    report_.learned_rules.clear();
    report_.hypothesis_score = learn_.current ? learn_.current->score : 0;
    for (const Rule& r : hypothesis_rules()) report_.learned_rules.push_back(r.str());
    report_.space_stats = space_cache_.stats();
  }

  Lexicon lex_;
  PipelineConfig cfg_;
  ParserBackend& backend_;
  ParseCache* parse_cache_;
  SpaceCache space_cache_;
  std::mt19937 rng_;
  Program background_;
  std::set<std::string> type_facts_;
  std::vector<ModeDecl> body_decls_, head_decls_, decls_;
  std::set<std::string> decl_seen_;
  LearnState learn_;
  int next_example_id_ = 1;
  Report report_;
};

// Convenience wrapper: train on one corpus, test on another.
inline Report run_task(const std::vector<Story>& train, const std::vector<Story>& test,
                       const Lexicon& lex, const PipelineConfig& cfg, ParserBackend& backend,
                       ParseCache* parse_cache = nullptr) {
  Session session(lex, cfg, backend, parse_cache);
  session.train(train);
  session.test(test);
  return session.report();
}

}  // namespace fabula
