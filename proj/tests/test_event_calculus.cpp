#include <random>

#include "catch_amalgamated.hpp"
#include "fabula/event_calculus.hpp"
#include "fabula/parse.hpp"
#include "fabula/solver.hpp"

using namespace fabula;
using Catch::Matchers::ContainsSubstring;

TEST_CASE("the frame axioms print in canonical form") {
  const Program& p = frame_axioms();
  REQUIRE(p.rules().size() == 2);
  CHECK(p.rules()[0].str() == "holdsAt(F,T+1) :- initiatedAt(F,T),time(T).");
  CHECK(p.rules()[1].str() ==
        "holdsAt(F,T+1) :- holdsAt(F,T),not terminatedAt(F,T),time(T).");
}

TEST_CASE("wrapper names cover the three event predicates") {
  CHECK(wrapper_name(EventKind::initiated) == "initiatedAt");
  CHECK(wrapper_name(EventKind::terminated) == "terminatedAt");
  CHECK(wrapper_name(EventKind::happens) == "happensAt");
}

TEST_CASE("event records render as wrapped atoms") {
  EventRecord r;
  r.kind = EventKind::happens;
  r.fluent = Term::compound("go_to", {Term::constant("mary"), Term::constant("garden")});
  r.time = 2;
  CHECK(r.atom().str() == "happensAt(go_to(mary,garden),2)");
}

TEST_CASE("reify lays out time facts then narrative facts") {
  std::vector<EventRecord> records;
  EventRecord a;
  a.kind = EventKind::initiated;
  a.fluent = Term::compound("carry", {Term::constant("john"), Term::constant("football")});
  a.time = 1;
  records.push_back(a);
  EventRecord b;
  b.kind = EventKind::happens;
  b.fluent = Term::compound("go_to", {Term::constant("john"), Term::constant("kitchen")});
  b.time = 2;
  records.push_back(b);

  Program p = reify(records, 3);
  std::vector<std::string> got;
  for (const Rule& r : p.rules()) got.push_back(r.str());
  CHECK(got == std::vector<std::string>{
                   "time(1).", "time(2).", "time(3).",
                   "initiatedAt(carry(john,football),1).",
                   "happensAt(go_to(john,kitchen),2).",
               });
}

TEST_CASE("choice groups reify as one choice rule in first-appearance order") {
  std::vector<EventRecord> records;
  for (const char* place : {"park", "garden"}) {
    EventRecord r;
    r.kind = EventKind::initiated;
    r.fluent = Term::compound("be", {Term::constant("john"), Term::constant(place)});
    r.time = 1;
    r.choice_group = 1;
    records.push_back(r);
  }
  Program p = reify(records, 1);
  REQUIRE(p.rules().size() == 2);
  CHECK(p.rules()[1].str() ==
        "1{initiatedAt(be(john,park),1);initiatedAt(be(john,garden),1)}2.");
}

TEST_CASE("reify validates its inputs") {
  EventRecord bad;
  bad.fluent = Term::compound("be", {Term::variable("X"), Term::constant("park")});
  bad.time = 1;
  CHECK_THROWS_WITH(reify({bad}, 2), ContainsSubstring("must be ground"));

  EventRecord late;
  late.fluent = Term::constant("rain");
  late.time = 5;
  CHECK_THROWS_WITH(reify({late}, 2), ContainsSubstring("outside 1..2"));
  CHECK_THROWS_AS(reify({}, 0), ValidationError);
}

namespace {

Term carry(const char* person, const char* object) {
  return Term::compound("carry", {Term::constant(person), Term::constant(object)});
}

}  // namespace

TEST_CASE("a carried-object narrative has exactly the expected timeline") {
  Program p = parse_program(
      "time(1..7)."
      "initiatedAt(carry(john,football),1)."
      "happensAt(go_to(john,kitchen),2)."
      "happensAt(got(john,apple),3)."
      "happensAt(go_to(john,park),4)."
      "happensAt(got(john,baseball),5)."
      "happensAt(drop(john,football),6)."
      "initiatedAt(carry(P,O),T) :- happensAt(got(P,O),T)."
      "terminatedAt(carry(P,O),T) :- happensAt(drop(P,O),T).");
  p.add_all(frame_axioms());

  SolveResult res = answer_sets(p);
  REQUIRE(res.answer_sets.size() == 1);
  Timeline tl = timeline(res.answer_sets[0], 7);

  const Term football = carry("john", "football");
  const Term apple = carry("john", "apple");
  const Term baseball = carry("john", "baseball");

  for (int t = 2; t <= 6; ++t) CHECK(tl.query(football, t));
  CHECK_FALSE(tl.query(football, 1));
  CHECK_FALSE(tl.query(football, 7));
  for (int t = 4; t <= 7; ++t) CHECK(tl.query(apple, t));
  CHECK_FALSE(tl.query(apple, 3));
  for (int t = 6; t <= 7; ++t) CHECK(tl.query(baseball, t));
  CHECK_FALSE(tl.query(baseball, 5));

  CHECK(tl.at(1) == std::set<Term>{});
  CHECK(tl.at(7) == std::set<Term>{apple, baseball});
  CHECK(tl.at(6) == std::set<Term>{football, apple, baseball});
}

TEST_CASE("the timeline reader keeps holdsAt atoms within the horizon") {
  AtomSet set;
  set.insert(parse_atom("holdsAt(f,1)"));
  set.insert(parse_atom("holdsAt(f,4)"));   // one step past horizon 3: kept
  set.insert(parse_atom("holdsAt(f,9)"));   // beyond: dropped
  set.insert(parse_atom("happensAt(e,2)")); // wrong wrapper: dropped
  Timeline tl = timeline(set, 3);
  CHECK(tl.query(Term::constant("f"), 1));
  CHECK(tl.query(Term::constant("f"), 4));
  CHECK_FALSE(tl.query(Term::constant("f"), 9));
  CHECK(tl.at(2).empty());
}

TEST_CASE("inertia holds on random narratives") {
  std::mt19937 rng(991);
  std::uniform_int_distribution<int> kind(0, 2);
  const Term fluent = Term::compound("be", {Term::constant("mary"), Term::constant("garden")});
  for (int round = 0; round < 40; ++round) {
    int horizon = 6;
    std::vector<EventRecord> records;
    std::vector<bool> initiated(horizon + 1, false), terminated(horizon + 1, false);
    for (int t = 1; t <= horizon; ++t) {
      int k = kind(rng);
      if (k == 0) continue;
      EventRecord r;
      r.kind = k == 1 ? EventKind::initiated : EventKind::terminated;
      r.fluent = fluent;
      r.time = t;
      records.push_back(r);
      (k == 1 ? initiated : terminated)[t] = true;
    }
    Program p = reify(records, horizon);
    p.add_all(frame_axioms());
    SolveResult res = answer_sets(p);
    REQUIRE(res.answer_sets.size() == 1);
    Timeline tl = timeline(res.answer_sets[0], horizon);

    // holdsAt(f, t+1) iff initiatedAt(f, t), or holdsAt(f, t) and not terminatedAt(f, t)
    CHECK_FALSE(tl.query(fluent, 1));
    for (int t = 1; t <= horizon; ++t) {
      bool next = initiated[t] || (tl.query(fluent, t) && !terminated[t]);
      INFO("round " << round << " at t=" << t);
      CHECK(tl.query(fluent, t + 1) == next);
    }
  }
}
