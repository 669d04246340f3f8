#pragma once

// Simplified discrete event calculus.
//
// Fluents are reified as ground terms inside three wrapper predicates:
//
//   initiatedAt(F,T)   fluent F starts holding after time T
//   terminatedAt(F,T)  fluent F stops holding after time T
//   happensAt(E,T)     event E occurs at time T
//   holdsAt(F,T)       fluent F holds at time T
//
// The two frame axioms below propagate fluents forward one step at a
// time.  Initiation wins over termination at the same time point: the
// first axiom fires regardless of terminatedAt.
//
// A narrative is a list of EventRecords.  reify() turns the records
// into a ground program together with time(1..horizon) facts so that
// the axioms can be grounded over the story's clock.  Records sharing
// a positive choice_group are emitted as a single choice rule, which
// models sentences that leave several alternatives open.

#include <map>
#include <set>
#include <string>
#include <vector>

#include "parse.hpp"
#include "program.hpp"
#include "term.hpp"

namespace fabula {

inline const char* kFrameAxiomText =
    "holdsAt(F,T+1) :- initiatedAt(F,T),time(T).\n"
    "holdsAt(F,T+1) :- holdsAt(F,T),not terminatedAt(F,T),time(T).\n";

// The two frame axioms, parsed once.
inline const Program& frame_axioms() {
  static const Program p = parse_program(kFrameAxiomText);
  return p;
}

enum class EventKind { initiated, terminated, happens };

inline std::string wrapper_name(EventKind k) {
  switch (k) {
    case EventKind::initiated: return "initiatedAt";
    case EventKind::terminated: return "terminatedAt";
    default: return "happensAt";
  }
}

// One narrative fact: wrapper(fluent, time).  Records with the same
// choice_group > 0 form one choice rule (exactly-one-or-more of the
// group holds, see reify).
struct EventRecord {
  EventKind kind = EventKind::happens;
  Term fluent = Term::constant("nothing");
  int time = 0;
  int choice_group = 0;

  Atom atom() const {
    return Atom{wrapper_name(kind), {fluent, Term::integer(time)}};
  }
};

// Builds the ground narrative program: time(1..horizon) facts first,
// then one fact per free record and one 1{...}k choice rule per
// group, in first-appearance order.
inline Program reify(const std::vector<EventRecord>& records, int horizon) {
  if (horizon < 1) throw ValidationError("reify: horizon must be at least 1");
  Program p;
  for (int t = 1; t <= horizon; ++t) {
    p.add(Rule::fact(Atom{"time", {Term::integer(t)}}));
  }
  std::set<int> done;
  for (size_t i = 0; i < records.size(); ++i) {
    const EventRecord& r = records[i];
    if (!r.fluent.is_ground()) {
      throw ValidationError("reify: fluent must be ground: " + r.fluent.str());
    }
    if (r.time < 1 || r.time > horizon) {
      throw ValidationError("reify: time " + std::to_string(r.time) +
                            " outside 1.." + std::to_string(horizon));
    }
    if (r.choice_group <= 0) {
      p.add(Rule::fact(r.atom()));
      continue;
    }
    if (done.count(r.choice_group)) continue;
    done.insert(r.choice_group);
    std::vector<Atom> heads;
    for (size_t j = i; j < records.size(); ++j) {
      if (records[j].choice_group == r.choice_group) {
        heads.push_back(records[j].atom());
      }
    }
    p.add(Rule::choice(1, heads, heads.size(), {}));
  }
  p.validate();
  return p;
}

// What holds when, read off one answer set.  Time points run from 1
// to horizon + 1: the axioms project one step past the last time fact.
struct Timeline {
  int horizon = 0;
  std::map<int, std::set<Term>> holds;

  bool query(const Term& fluent, int t) const {
    auto it = holds.find(t);
    return it != holds.end() && it->second.count(fluent) > 0;
  }

  std::set<Term> at(int t) const {
    auto it = holds.find(t);
    return it == holds.end() ? std::set<Term>{} : it->second;
  }

  std::string str() const {
    std::string out;
    for (const auto& [t, fs] : holds) {
      out += std::to_string(t) + ":";
      for (const Term& f : fs) out += " " + f.str();
      out += "\n";
    }
    return out;
  }
};

inline Timeline timeline(const AtomSet& answer_set, int horizon) {
  Timeline tl;
  tl.horizon = horizon;
  for (const Atom& a : answer_set) {
    if (a.predicate != "holdsAt" || a.args.size() != 2) continue;
    const Term& at = a.args[1];
    if (at.kind() != Term::Kind::integer) continue;
    long long t = at.value();
    if (t < 1 || t > horizon + 1) continue;
    tl.holds[static_cast<int>(t)].insert(a.args[0]);
  }
  return tl;
}

}  // namespace fabula
