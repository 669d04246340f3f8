#include <random>
#include <set>

#include "catch_amalgamated.hpp"
#include "fabula/parse.hpp"
#include "fabula/solver.hpp"

using namespace fabula;
using Catch::Matchers::ContainsSubstring;

namespace {

std::set<std::string> rule_set(const Program& p) {
  std::set<std::string> out;
  for (const Rule& r : p.rules()) out.insert(r.str());
  return out;
}

std::vector<std::vector<std::string>> names(const SolveResult& r) {
  std::vector<std::vector<std::string>> out;
  for (const AtomSet& s : r.answer_sets) {
    std::vector<std::string> row;
    for (const Atom& a : s) row.push_back(a.str());
    out.push_back(row);
  }
  return out;
}

AtomSet interp(std::initializer_list<const char*> atoms) {
  AtomSet s;
  for (const char* a : atoms) s.insert(Atom{a, {}});
  return s;
}

}  // namespace

TEST_CASE("the reduct deletes rules blocked by the interpretation") {
  Program p = parse_program("a :- not b. b :- not a.");
  CHECK(rule_set(reduct(p, interp({"a"}))) == std::set<std::string>{"a."});
  CHECK(rule_set(reduct(p, interp({"b"}))) == std::set<std::string>{"b."});
  CHECK(rule_set(reduct(p, interp({}))) == std::set<std::string>{"a.", "b."});
}

TEST_CASE("the reduct strips surviving negative literals") {
  Program p = parse_program("p :- q, not r. q.");
  CHECK(rule_set(reduct(p, interp({"q"}))) == std::set<std::string>{"p :- q.", "q."});
}

TEST_CASE("the reduct turns constraints into bottom rules") {
  Program p = parse_program(":- a, b.");
  std::set<std::string> got = rule_set(reduct(p, interp({})));
  REQUIRE(got.size() == 1);
  CHECK_THAT(*got.begin(), ContainsSubstring(":- a,b."));
  // blocked constraints disappear entirely
  Program q = parse_program(":- a, not b.");
  CHECK(rule_set(reduct(q, interp({"b"}))).empty());
}

TEST_CASE("the reduct keeps satisfied choice picks and rejects violations") {
  Program p = parse_program("1{a;b}1.");
  CHECK(rule_set(reduct(p, interp({"a"}))) == std::set<std::string>{"a."});
  CHECK(rule_set(reduct(p, interp({"b"}))) == std::set<std::string>{"b."});
  // zero picks violate the lower bound, two picks the upper
  for (const AtomSet& bad : {interp({}), interp({"a", "b"})}) {
    std::set<std::string> got = rule_set(reduct(p, bad));
    REQUIRE(got.size() == 1);
    CHECK_THAT(*got.begin(), !ContainsSubstring(":-"));  // bare bottom fact
  }
}

TEST_CASE("least model is the closure of positive rules") {
  auto [model, ok] = least_model(parse_program("p. q :- p. r :- q, s."));
  CHECK(ok);
  std::vector<std::string> got;
  for (const Atom& a : model) got.push_back(a.str());
  CHECK(got == std::vector<std::string>{"p", "q"});
}

TEST_CASE("least model flags fired bottom rules") {
  Program p = parse_program("p. :- p.");
  auto [model, ok] = least_model(reduct(p, interp({"p"})));
  CHECK(model == interp({"p"}));
  CHECK_FALSE(ok);
}

TEST_CASE("least model rejects non-positive input") {
  CHECK_THROWS_AS(least_model(parse_program("a :- not b.")), ValidationError);
  CHECK_THROWS_AS(least_model(parse_program("1{a}1.")), ValidationError);
}

TEST_CASE("an even negation cycle has both answer sets in canonical order") {
  SolveResult r = answer_sets(parse_program("a :- not b. b :- not a."));
  CHECK(names(r) == std::vector<std::vector<std::string>>{{"a"}, {"b"}});
  CHECK(r.complete);
}

TEST_CASE("an odd negation cycle has no answer set") {
  CHECK(answer_sets(parse_program("p :- not p.")).answer_sets.empty());
}

TEST_CASE("unfounded positive loops stay false") {
  SolveResult r = answer_sets(parse_program("a :- b. b :- a."));
  REQUIRE(r.answer_sets.size() == 1);
  CHECK(r.answer_sets[0].empty());
}

TEST_CASE("choice rules enumerate within bounds") {
  CHECK(names(answer_sets(parse_program("0{a}1."))) ==
        std::vector<std::vector<std::string>>{{}, {"a"}});
  CHECK(names(answer_sets(parse_program("1{a;b}1."))) ==
        std::vector<std::vector<std::string>>{{"a"}, {"b"}});
  CHECK(names(answer_sets(parse_program("1{a;b}2."))) ==
        std::vector<std::vector<std::string>>{{"a"}, {"a", "b"}, {"b"}});
}

TEST_CASE("constraints prune stable models") {
  CHECK(names(answer_sets(parse_program("a :- not b. b :- not a. :- a."))) ==
        std::vector<std::vector<std::string>>{{"b"}});
  CHECK(answer_sets(parse_program("a :- not b. b :- not a. :- a. :- b.")).answer_sets.empty());
}

TEST_CASE("derived atoms follow the guess") {
  SolveResult r = answer_sets(parse_program("p :- not q. q :- not p. r :- p. r :- q."));
  CHECK(names(r) == std::vector<std::vector<std::string>>{{"p", "r"}, {"q", "r"}});
}

TEST_CASE("mixed support and negation settle correctly") {
  SolveResult r = answer_sets(parse_program("a :- b. b :- a. a :- not c. c :- not a."));
  CHECK(names(r) == std::vector<std::vector<std::string>>{{"a", "b"}, {"c"}});
}

TEST_CASE("stratified programs have exactly one answer set") {
  SolveResult r = answer_sets(parse_program(
      "e(1,2). e(2,3). path(X,Y) :- e(X,Y). path(X,Z) :- path(X,Y), e(Y,Z)."));
  REQUIRE(r.answer_sets.size() == 1);
  CHECK(r.answer_sets[0].count(parse_atom("path(1,3)")));
  CHECK(r.answer_sets[0].count(parse_atom("path(2,3)")));
  CHECK_FALSE(r.answer_sets[0].count(parse_atom("path(3,1)")));
}

TEST_CASE("results are deterministic across repeated solves") {
  const char* text = "1{a;b;c}2. d :- a, not c. :- b, d.";
  SolveResult first = answer_sets(parse_program(text));
  SolveResult second = answer_sets(parse_program(text));
  CHECK(names(first) == names(second));
}

TEST_CASE("entailment classifies queries across answer sets") {
  Program p = parse_program("1{be(john,park);be(john,garden)}1. sunny.");
  CHECK(entailment(p, parse_atom("be(john,park)")) == Entailment::some);
  CHECK(entailment(p, parse_atom("sunny")) == Entailment::all);
  CHECK(entailment(p, parse_atom("be(john,school)")) == Entailment::none);
  // inconsistent programs entail nothing
  CHECK(entailment(parse_program("p :- not p."), parse_atom("p")) == Entailment::none);
}

TEST_CASE("the answer-set bound throws unless truncation is allowed") {
  SolveOptions tight;
  tight.bound = 3;
  CHECK_THROWS_WITH(answer_sets(parse_program("0{a;b;c}3."), tight),
                    ContainsSubstring("more than 3 answer sets"));
  tight.allow_incomplete = true;
  SolveResult r = answer_sets(parse_program("0{a;b;c}3."), tight);
  CHECK_FALSE(r.complete);
  CHECK(r.answer_sets.size() == 3);
}

TEST_CASE("wide open programs are refused rather than guessed forever") {
  std::string text;
  for (int i = 0; i < 13; ++i) {
    std::string a = "a" + std::to_string(i);
    std::string b = "b" + std::to_string(i);
    text += a + " :- not " + b + ". " + b + " :- not " + a + ".\n";
  }
  CHECK_THROWS_WITH(answer_sets(parse_program(text)), ContainsSubstring("open atoms"));

  std::string five;
  for (int i = 0; i < 5; ++i) {
    std::string a = "a" + std::to_string(i);
    std::string b = "b" + std::to_string(i);
    five += a + " :- not " + b + ". " + b + " :- not " + a + ".\n";
  }
  SolveResult r = answer_sets(parse_program(five));
  CHECK(r.answer_sets.size() == 32);  // 2^5 independent cycles

  SolveOptions brute;
  brute.strategy = SolveStrategy::brute;
  CHECK_THROWS_WITH(answer_sets(parse_program(text + "c.\n"), brute),
                    ContainsSubstring("brute enumeration infeasible"));
}

namespace {

// Random ground propositional programs over a small alphabet.
// with_choice admits choice rules; without them the programs stay in
// the fragment whose answer sets form an antichain.
std::string random_program(std::mt19937& rng, int atom_count, bool with_choice = true) {
  auto atom = [&](int i) { return "x" + std::to_string(i); };
  std::uniform_int_distribution<int> natoms(1, atom_count);
  std::uniform_int_distribution<int> nrules(1, 7);
  std::uniform_int_distribution<int> body_len(0, 3);
  std::uniform_int_distribution<int> coin(0, 1);
  std::uniform_int_distribution<int> kind(0, with_choice ? 9 : 7);
  std::string text;
  int rules = nrules(rng);
  for (int r = 0; r < rules; ++r) {
    int k = kind(rng);
    std::uniform_int_distribution<int> pick(0, atom_count - 1);
    std::string body;
    int blen = body_len(rng);
    for (int i = 0; i < blen; ++i) {
      if (!body.empty()) body += ", ";
      if (coin(rng)) body += "not ";
      body += atom(pick(rng));
    }
    if (k < 6) {
      text += atom(pick(rng));
      if (!body.empty()) text += " :- " + body;
      text += ".\n";
    } else if (k < 8) {
      if (body.empty()) continue;
      text += ":- " + body + ".\n";
    } else {
      std::set<std::string> heads;
      int hn = 1 + coin(rng);
      for (int i = 0; i < hn; ++i) heads.insert(atom(pick(rng)));
      std::string hs;
      for (const std::string& h : heads) {
        if (!hs.empty()) hs += ";";
        hs += h;
      }
      int lower = coin(rng);
      size_t upper = lower + coin(rng);
      if (upper > heads.size()) upper = heads.size();
      if (static_cast<size_t>(lower) > upper) lower = static_cast<int>(upper);
      text += std::to_string(lower) + "{" + hs + "}" + std::to_string(upper);
      if (!body.empty()) text += " :- " + body;
      text += ".\n";
    }
  }
  if (text.empty()) text = atom(0) + ".\n";
  return text;
}

}  // namespace

TEST_CASE("guided and brute enumeration agree on random programs") {
  std::mt19937 rng(424242);
  for (int round = 0; round < 120; ++round) {
    std::string text = random_program(rng, 6);
    INFO("program:\n" << text);
    SolveOptions guided;
    guided.strategy = SolveStrategy::guided;
    guided.max_open = 62;
    SolveOptions brute;
    brute.strategy = SolveStrategy::brute;
    SolveResult a = answer_sets(parse_program(text), guided);
    SolveResult b = answer_sets(parse_program(text), brute);
    CHECK(names(a) == names(b));
  }
}

TEST_CASE("answer sets of choice-free programs form an antichain") {
  std::mt19937 rng(77);
  for (int round = 0; round < 60; ++round) {
    std::string text = random_program(rng, 5, false);
    INFO("program:\n" << text);
    SolveResult r = answer_sets(parse_program(text), SolveOptions{});
    for (size_t i = 0; i < r.answer_sets.size(); ++i) {
      for (size_t j = 0; j < r.answer_sets.size(); ++j) {
        if (i == j) continue;
        const AtomSet& small = r.answer_sets[i];
        const AtomSet& big = r.answer_sets[j];
        bool subset = std::all_of(small.begin(), small.end(),
                                  [&](const Atom& a) { return big.count(a) > 0; });
        CHECK_FALSE((subset && small.size() < big.size()));
      }
    }
  }
}
