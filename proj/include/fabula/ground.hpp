#pragma once

// Bottom-up grounder. Rule instances are produced by joining the
// positive body literals, left to right, against the set of possibly
// derivable ground atoms: facts plus heads of instances found so far,
// iterated to a fixpoint. Safety guarantees the join binds every
// variable. This over-approximates derivability (negation is read as
// always true here), so every stable model's instances are present,
// and atoms never derivable simply produce no instances.
//
// Successor terms `T+1` are evaluated during substitution; instances
// where the base is not an integer are dropped as type-inconsistent.

#include <functional>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "fabula/program.hpp"
#include "fabula/term.hpp"

namespace fabula {

class GroundLimitError : public std::runtime_error {
public:
  explicit GroundLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct GroundOptions {
  size_t max_rules = 1'000'000;
};

namespace detail {

inline bool atom_resolved(const Atom& a) {
  struct {
    bool ok = true;
    void walk(const Term& t) {
      if (t.kind() == Term::Kind::plus || t.kind() == Term::Kind::variable) ok = false;
      for (const Term& x : t.args()) walk(x);
    }
  } chk;
  for (const Term& t : a.args) chk.walk(t);
  return chk.ok;
}

inline bool rule_resolved(const Rule& r) {
  if (r.kind() == RuleKind::normal && !atom_resolved(r.head())) return false;
  for (const Atom& h : r.choice_heads())
    if (!atom_resolved(h)) return false;
  for (const Literal& l : r.body())
    if (!atom_resolved(l.atom)) return false;
  return true;
}

// Extends `s` so that `pattern` matches the ground atom `subject`.
inline bool match_atom(const Atom& pattern, const Atom& subject, Subst& s) {
  if (pattern.predicate != subject.predicate) return false;
  if (pattern.args.size() != subject.args.size()) return false;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!unify_term(pattern.args[i], subject.args[i], s)) return false;
  return true;
}

}  // namespace detail

inline Program ground(const Program& p, const GroundOptions& opts = {}) {
  std::map<std::string, std::vector<Atom>> index;  // possibly derivable, by predicate
  std::set<Atom> known;
  auto add_atom = [&](const Atom& a) {
    if (known.insert(a).second) index[a.predicate].push_back(a);
  };

  std::vector<Rule> out;
  std::set<std::string> emitted;
  auto emit = [&](Rule inst) {
    if (!detail::rule_resolved(inst)) return;
    if (!emitted.insert(inst.str()).second) return;
    if (inst.kind() == RuleKind::normal) add_atom(inst.head());
    for (const Atom& h : inst.choice_heads()) add_atom(h);
    out.push_back(std::move(inst));
    if (out.size() > opts.max_rules)
      throw GroundLimitError("grounding exceeds " + std::to_string(opts.max_rules) + " rules");
  };

  size_t last = 0;
  while (true) {
    for (const Rule& r : p.rules()) {
      std::vector<const Atom*> pos;
      for (const Literal& l : r.body())
        if (!l.negated) pos.push_back(&l.atom);

      Subst subst;
      // Depth-first join over the positive body.
      std::function<void(size_t)> walk = [&](size_t i) {
        if (i == pos.size()) {
          emit(r.substitute(subst));
          return;
        }
        auto it = index.find(pos[i]->predicate);
        if (it == index.end()) return;
        // The candidate list may grow while iterating; matches against
        // atoms added later are picked up by the next outer round.
        size_t limit = it->second.size();
        for (size_t c = 0; c < limit; ++c) {
          Subst saved = subst;
          if (detail::match_atom(*pos[i], it->second[c], subst)) walk(i + 1);
          subst = std::move(saved);
        }
      };
      walk(0);
    }
    size_t size = known.size() + out.size();
    if (size == last) break;
    last = size;
  }
  return Program(std::move(out));
}

}  // namespace fabula
