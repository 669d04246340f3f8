#include <random>

#include "catch_amalgamated.hpp"
#include "fabula/term.hpp"

using namespace fabula;

TEST_CASE("term printing") {
  CHECK(Term::constant("mary").str() == "mary");
  CHECK(Term::integer(7).str() == "7");
  CHECK(Term::integer(-3).str() == "-3");
  CHECK(Term::variable("V1").str() == "V1");
  CHECK(Term::compound("be", {Term::constant("mary"), Term::variable("L")}).str() ==
        "be(mary,L)");
  CHECK(Term::compound("f", {Term::compound("g", {Term::integer(1)})}).str() == "f(g(1))");
  CHECK(Term::plus(Term::variable("T"), 1).str() == "T+1");
}

TEST_CASE("term kinds and groundness") {
  CHECK(Term::constant("a").kind() == Term::Kind::constant);
  CHECK(Term::integer(0).kind() == Term::Kind::integer);
  CHECK(Term::variable("X").kind() == Term::Kind::variable);
  CHECK(Term::compound("f", {Term::constant("a")}).kind() == Term::Kind::compound);
  CHECK(Term::plus(Term::variable("T"), 1).kind() == Term::Kind::plus);

  CHECK(Term::constant("a").is_ground());
  CHECK(Term::integer(2).is_ground());
  CHECK_FALSE(Term::variable("X").is_ground());
  CHECK(Term::compound("f", {Term::constant("a"), Term::integer(1)}).is_ground());
  CHECK_FALSE(Term::compound("f", {Term::variable("X")}).is_ground());
  CHECK_FALSE(Term::plus(Term::variable("T"), 1).is_ground());
}

TEST_CASE("substitution folds time offsets") {
  Term next = Term::plus(Term::variable("T"), 1);

  Subst to_int;
  to_int["T"] = Term::integer(2);
  Term folded = next.substitute(to_int);
  CHECK(folded.kind() == Term::Kind::integer);
  CHECK(folded.value() == 3);

  Subst to_var;
  to_var["T"] = Term::variable("U");
  CHECK(next.substitute(to_var).str() == "U+1");

  Subst unrelated;
  unrelated["X"] = Term::integer(9);
  CHECK(next.substitute(unrelated).str() == "T+1");
}

TEST_CASE("substitution reaches nested arguments") {
  Term t = Term::compound("carry", {Term::variable("P"), Term::compound("box", {Term::variable("O")})});
  Subst s;
  s["P"] = Term::constant("john");
  s["O"] = Term::constant("apple");
  CHECK(t.substitute(s).str() == "carry(john,box(apple))");
}

TEST_CASE("atom printing and groundness") {
  Atom a{"holdsAt", {Term::compound("be", {Term::constant("mary"), Term::constant("garden")}),
                     Term::integer(3)}};
  CHECK(a.str() == "holdsAt(be(mary,garden),3)");
  CHECK(a.is_ground());

  Atom open{"p", {Term::variable("X")}};
  CHECK_FALSE(open.is_ground());

  Atom prop{"rained", {}};
  CHECK(prop.str() == "rained");
}

TEST_CASE("literal printing marks negation") {
  Atom a{"p", {Term::constant("x")}};
  CHECK(Literal{a, false}.str() == "p(x)");
  CHECK(Literal{a, true}.str() == "not p(x)");
}

TEST_CASE("atoms order by printed text inside sets") {
  AtomSet set;
  set.insert(Atom{"b", {}});
  set.insert(Atom{"a", {Term::integer(2)}});
  set.insert(Atom{"a", {Term::integer(1)}});
  std::vector<std::string> order;
  for (const Atom& a : set) order.push_back(a.str());
  CHECK(order == std::vector<std::string>{"a(1)", "a(2)", "b"});
}

TEST_CASE("unification binds pattern variables") {
  auto subst = unify(Atom{"p", {Term::variable("X"), Term::compound("f", {Term::variable("Y")})}},
                     Atom{"p", {Term::constant("a"), Term::compound("f", {Term::constant("b")})}});
  REQUIRE(subst.has_value());
  CHECK((*subst)["X"].str() == "a");
  CHECK((*subst)["Y"].str() == "b");
}

TEST_CASE("unification failures") {
  CHECK_FALSE(unify(Atom{"p", {Term::constant("a")}}, Atom{"q", {Term::constant("a")}}));
  CHECK_FALSE(unify(Atom{"p", {Term::constant("a")}}, Atom{"p", {Term::constant("b")}}));
  CHECK_FALSE(unify(Atom{"p", {Term::constant("a")}}, Atom{"p", {}}));
  CHECK_FALSE(unify(Atom{"p", {Term::variable("X"), Term::variable("X")}},
                    Atom{"p", {Term::constant("a"), Term::constant("b")}}));
}

TEST_CASE("repeated variables must agree") {
  auto subst = unify(Atom{"p", {Term::variable("X"), Term::variable("X")}},
                     Atom{"p", {Term::constant("a"), Term::constant("a")}});
  REQUIRE(subst.has_value());
  CHECK((*subst)["X"].str() == "a");
}

TEST_CASE("time offsets unify against integers") {
  Subst s;
  REQUIRE(unify_term(Term::plus(Term::variable("T"), 1), Term::integer(3), s));
  CHECK(s["T"].str() == "2");

  Subst s2;
  CHECK_FALSE(unify_term(Term::plus(Term::variable("T"), 1), Term::constant("kitchen"), s2));

  Subst s3;
  s3["T"] = Term::integer(5);
  CHECK_FALSE(unify_term(Term::plus(Term::variable("T"), 1), Term::integer(3), s3));
  Subst s4;
  s4["T"] = Term::integer(2);
  CHECK(unify_term(Term::plus(Term::variable("T"), 1), Term::integer(3), s4));
}

namespace {

Term random_ground(std::mt19937& rng, int depth) {
  std::uniform_int_distribution<int> pick(0, depth > 0 ? 3 : 1);
  switch (pick(rng)) {
    case 0: {
      std::uniform_int_distribution<int> c(0, 3);
      static const char* names[] = {"a", "b", "kitchen", "mary"};
      return Term::constant(names[c(rng)]);
    }
    case 1: {
      std::uniform_int_distribution<int> v(0, 9);
      return Term::integer(v(rng));
    }
    default: {
      std::uniform_int_distribution<int> n(1, 2);
      std::vector<Term> args;
      int count = n(rng);
      for (int i = 0; i < count; ++i) args.push_back(random_ground(rng, depth - 1));
      static const char* fns[] = {"f", "g", "be"};
      std::uniform_int_distribution<int> fi(0, 2);
      return Term::compound(fns[fi(rng)], args);
    }
  }
}

// Replaces random subtrees of a ground term with fresh variables.
Term generalize(const Term& t, std::mt19937& rng, int* next_var, Subst* expected) {
  std::uniform_int_distribution<int> coin(0, 3);
  if (coin(rng) == 0) {
    std::string name = "V" + std::to_string((*next_var)++);
    (*expected)[name] = t;
    return Term::variable(name);
  }
  if (t.kind() == Term::Kind::compound) {
    std::vector<Term> args;
    for (const Term& a : t.args()) args.push_back(generalize(a, rng, next_var, expected));
    return Term::compound(t.name(), args);
  }
  return t;
}

}  // namespace

TEST_CASE("unifying a generalized pattern recovers the subject") {
  std::mt19937 rng(20260816);
  for (int round = 0; round < 300; ++round) {
    Term subject = random_ground(rng, 3);
    int next_var = 1;
    Subst expected;
    Term pattern = generalize(subject, rng, &next_var, &expected);
    Atom ps{"p", {pattern}};
    Atom ss{"p", {subject}};
    auto got = unify(ps, ss);
    REQUIRE(got.has_value());
    CHECK(ps.substitute(*got).str() == ss.str());
    for (const auto& [name, value] : expected) {
      REQUIRE(got->count(name) == 1);
      CHECK((*got)[name].str() == value.str());
    }
  }
}

TEST_CASE("unification of ground atoms is equality") {
  std::mt19937 rng(7);
  for (int round = 0; round < 100; ++round) {
    Atom a{"p", {random_ground(rng, 2)}};
    Atom b{"p", {random_ground(rng, 2)}};
    auto got = unify(a, b);
    CHECK(got.has_value() == (a.str() == b.str()));
    if (got) CHECK(got->empty());
  }
}

TEST_CASE("collected variables cover every occurrence") {
  Atom a{"initiatedAt",
         {Term::compound("be", {Term::variable("P"), Term::variable("L")}), Term::variable("T")}};
  std::vector<std::string> vars;
  a.collect_vars(vars);
  CHECK(vars == std::vector<std::string>{"P", "L", "T"});
}
