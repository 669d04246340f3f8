#pragma once

// Mode declarations: the syntactic bias that defines which rules the
// learner may consider.  A mode fluent is a predicate with typed
// slots, each either a variable slot var(t) or a constant slot
// const(t), e.g.
//
//   be(var(nnp),var(nn))
//   go_to(var(nnp),var(nn),const(jj))
//
// Declarations place a fluent in rule heads (#modeh) or bodies
// (#modeb).  In event-calculus mode fluents are wrapped:
//
//   statements           -> #modeb(happensAt(F,var(time)))      events
//                           #modeb(initiatedAt(F,var(time)))    "be" fluents
//                           #modeb(holdsAt(F,var(time)))        "be" fluents
//   questions            -> #modeh(initiatedAt(F,var(time)))
//                           #modeh(terminatedAt(F,var(time)))
//                           #modeb(holdsAt(F,var(time)))
//
// Without the event calculus, questions contribute #modeh(F) and
// "be" statements #modeb(F).
//
// Slot typing: proper nouns and nouns type as var slots of their
// tag; adjectives and temporal tokens become constant slots const(jj)
// and const(time); the query variable of a why question becomes
// const(jj), other query variables type by the wh word.

#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "babi.hpp"
#include "lexicon.hpp"
#include "parse.hpp"
#include "parse_backend.hpp"

namespace fabula {

struct Slot {
  bool is_const = false;
  std::string type;

  std::string str() const { return (is_const ? "const(" : "var(") + type + ")"; }
  friend bool operator==(const Slot& a, const Slot& b) {
    return a.is_const == b.is_const && a.type == b.type;
  }
  friend bool operator<(const Slot& a, const Slot& b) {
    if (a.is_const != b.is_const) return a.is_const < b.is_const;
    return a.type < b.type;
  }
};

struct ModeFluent {
  std::string predicate;
  std::vector<Slot> slots;

  std::string str() const {
    std::string out = predicate;
    if (!slots.empty()) {
      out += '(';
      for (size_t i = 0; i < slots.size(); ++i) {
        if (i) out += ',';
        out += slots[i].str();
      }
      out += ')';
    }
    return out;
  }
  friend bool operator==(const ModeFluent& a, const ModeFluent& b) {
    return a.predicate == b.predicate && a.slots == b.slots;
  }
  friend bool operator<(const ModeFluent& a, const ModeFluent& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.slots < b.slots;
  }
};

struct ModeDecl {
  bool head = false;
  std::string wrapper;  // empty, or initiatedAt|terminatedAt|holdsAt|happensAt
  ModeFluent fluent;

  std::string str() const {
    std::string inner =
        wrapper.empty() ? fluent.str() : wrapper + "(" + fluent.str() + ",var(time))";
    return (head ? "#modeh(" : "#modeb(") + inner + ").";
  }
  friend bool operator==(const ModeDecl& a, const ModeDecl& b) {
    return a.head == b.head && a.wrapper == b.wrapper && a.fluent == b.fluent;
  }
  friend bool operator<(const ModeDecl& a, const ModeDecl& b) {
    if (a.head != b.head) return a.head < b.head;
    if (a.wrapper != b.wrapper) return a.wrapper < b.wrapper;
    return a.fluent < b.fluent;
  }
};

inline bool be_rooted(const std::string& predicate) {
  return predicate == "be" || predicate.rfind("be_", 0) == 0;
}

// Typed slot pattern of one representation atom.
inline ModeFluent mode_fluent(const Sentence& s, const FluentRep& rep, const Lexicon& lex) {
  static const std::map<std::string, std::string> wh_type = {
      {"where", "nn"}, {"what", "nn"},      {"when", "nn"},
      {"who", "nnp"},  {"why", "jj"},       {"how_many", "number"},
  };
  if (rep.atoms.empty()) throw ParseBackendError("mode_fluent: empty representation");
  const Atom& a = rep.atoms.front();
  ModeFluent mf;
  mf.predicate = a.predicate;
  for (const Term& arg : a.args) {
    Slot slot;
    if (arg.kind() == Term::Kind::variable) {
      auto it = wh_type.find(s.wh);
      if (it == wh_type.end()) {
        throw ParseBackendError("mode_fluent: variable in non-wh sentence '" + s.text + "'");
      }
      slot.type = it->second;
      slot.is_const = s.wh == "why";
    } else if (arg.kind() == Term::Kind::integer) {
      slot.type = "number";
    } else if (lex.temporal.count(arg.name())) {
      slot.type = "time";
      slot.is_const = true;
    } else {
      slot.type = lex.pos_tag(arg.name());
      // adjectives describe transient states; they are bias constants,
      // not joinable variables
      slot.is_const = slot.type == "jj";
    }
    mf.slots.push_back(slot);
  }
  return mf;
}

// Declarations for one story's sentences, body declarations first,
// each in first-appearance order.
inline std::vector<ModeDecl> generate_declarations(
    const std::vector<std::pair<Sentence, ModeFluent>>& items, bool ec) {
  std::vector<ModeDecl> body, heads;
  std::set<std::string> seen;
  auto add = [&](bool head, const std::string& wrapper, const ModeFluent& mf) {
    ModeDecl d{head, wrapper, mf};
    if (seen.insert(d.str()).second) (head ? heads : body).push_back(d);
  };
  for (const auto& [s, mf] : items) {
    if (ec) {
      if (s.is_question) {
        add(true, "initiatedAt", mf);
        add(true, "terminatedAt", mf);
        add(false, "holdsAt", mf);
      } else if (be_rooted(mf.predicate)) {
        add(false, "initiatedAt", mf);
        add(false, "holdsAt", mf);
      } else {
        add(false, "happensAt", mf);
      }
    } else {
      if (s.is_question) {
        add(true, "", mf);
      } else if (be_rooted(mf.predicate)) {
        add(false, "", mf);
      }
    }
  }
  body.insert(body.end(), heads.begin(), heads.end());
  return body;
}

// Bias knobs shared by space enumeration and learning.
struct BiasConfig {
  int maxv = 3;
  int max_rule_size = 3;  // non-guard literals per rule, head included
  int max_penalty = 50;   // iterative deepening ceiling on hypothesis score
  bool allow_constraints = true;
  size_t space_cap = 20000;
  std::map<std::string, std::vector<std::string>> constants;  // type -> values

  // Stable digest text; part of the space cache key.
  std::string key() const {
    std::string out = "maxv=" + std::to_string(maxv) +
                      ";size=" + std::to_string(max_rule_size) +
                      ";constraints=" + (allow_constraints ? "1" : "0") +
                      ";cap=" + std::to_string(space_cap);
    for (const auto& [type, values] : constants) {
      out += ";" + type + "=";
      for (size_t i = 0; i < values.size(); ++i) {
        if (i) out += ',';
        out += values[i];
      }
    }
    return out;
  }
};

// The typed constant pools referenced by const(t) slots, drawn from
// the lexicon so that cache keys do not depend on any single story.
inline std::map<std::string, std::vector<std::string>> bias_constants(const Lexicon& lex) {
  std::map<std::string, std::vector<std::string>> out;
  std::set<std::string> jj = lex.constants_of("jj");
  if (!jj.empty()) out["jj"] = {jj.begin(), jj.end()};
  if (!lex.temporal.empty()) out["time"] = {lex.temporal.begin(), lex.temporal.end()};
  return out;
}

// Declarations plus config knobs read back from exported task text.
struct ParsedBias {
  std::vector<ModeDecl> decls;
  BiasConfig config;
};

namespace detail {

inline Slot slot_from_term(const Term& t) {
  if (t.kind() == Term::Kind::compound && t.args().size() == 1 &&
      (t.name() == "var" || t.name() == "const") &&
      t.args()[0].kind() == Term::Kind::constant) {
    return Slot{t.name() == "const", t.args()[0].name()};
  }
  throw ValidationError("mode declaration argument must be var(type) or const(type), got '" +
                        t.str() + "'");
}

inline ModeDecl decl_from_atom(bool head, const Atom& a) {
  ModeDecl d;
  d.head = head;
  bool wrapped = (a.predicate == "initiatedAt" || a.predicate == "terminatedAt" ||
                  a.predicate == "holdsAt" || a.predicate == "happensAt") &&
                 a.args.size() == 2 && a.args[1].kind() == Term::Kind::compound &&
                 a.args[1].name() == "var" && a.args[1].args().size() == 1 &&
                 a.args[1].args()[0].name() == "time";
  if (wrapped) {
    d.wrapper = a.predicate;
    const Term& inner = a.args[0];
    if (inner.kind() == Term::Kind::compound) {
      d.fluent.predicate = inner.name();
      for (const Term& arg : inner.args()) d.fluent.slots.push_back(slot_from_term(arg));
    } else if (inner.kind() == Term::Kind::constant) {
      d.fluent.predicate = inner.name();
    } else {
      throw ValidationError("mode declaration fluent must be a compound or constant, got '" +
                            inner.str() + "'");
    }
  } else {
    d.fluent.predicate = a.predicate;
    for (const Term& arg : a.args) d.fluent.slots.push_back(slot_from_term(arg));
  }
  return d;
}

}  // namespace detail

// Parses #modeh/#modeb/#maxv/#constant lines.  The format is exactly
// what ModeDecl::str and task export produce; % comments and blank
// lines are skipped.
inline ParsedBias parse_bias(const std::string& text) {
  ParsedBias out;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto fail = [&](const std::string& what) {
    throw ValidationError("bias line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '%') continue;
    auto inner_of = [&](const std::string& prefix) {
      if (line.size() < prefix.size() + 2 || line.substr(line.size() - 2) != ").") {
        fail("expected '" + prefix + "...).'");
      }
      return line.substr(prefix.size(), line.size() - prefix.size() - 2);
    };
    if (line.rfind("#modeh(", 0) == 0) {
      out.decls.push_back(detail::decl_from_atom(true, parse_atom(inner_of("#modeh("))));
    } else if (line.rfind("#modeb(", 0) == 0) {
      out.decls.push_back(detail::decl_from_atom(false, parse_atom(inner_of("#modeb("))));
    } else if (line.rfind("#maxv(", 0) == 0) {
      out.config.maxv = std::stoi(inner_of("#maxv("));
    } else if (line.rfind("#max_penalty(", 0) == 0) {
      out.config.max_penalty = std::stoi(inner_of("#max_penalty("));
    } else if (line.rfind("#constant(", 0) == 0) {
      std::string inner = inner_of("#constant(");
      size_t comma = inner.find(',');
      if (comma == std::string::npos) fail("expected #constant(type,value).");
      out.config.constants[detail::trim(inner.substr(0, comma))].push_back(
          detail::trim(inner.substr(comma + 1)));
    } else {
      fail("unrecognized directive '" + line + "'");
    }
  }
  return out;
}

}  // namespace fabula
