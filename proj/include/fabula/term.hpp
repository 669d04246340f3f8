#pragma once

// Terms, atoms and literals of the rule language.
//
// Terms are immutable value trees: constants, integers, variables,
// compounds, and the restricted arithmetic term `X+1` used on time
// arguments. Atoms pair a predicate symbol with argument terms.

#include <algorithm>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <set>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

namespace fabula {

class Term;
using Subst = std::map<std::string, Term>;

class Term {
public:
  enum class Kind { constant, integer, variable, compound, plus };

  Term() : kind_(Kind::constant), value_(0) {}

  static Term constant(std::string name) {
    Term t;
    t.kind_ = Kind::constant;
    t.name_ = std::move(name);
    return t;
  }
  static Term integer(long long v) {
    Term t;
    t.kind_ = Kind::integer;
    t.value_ = v;
    return t;
  }
  static Term variable(std::string name) {
    Term t;
    t.kind_ = Kind::variable;
    t.name_ = std::move(name);
    return t;
  }
  static Term compound(std::string functor, std::vector<Term> args) {
    Term t;
    t.kind_ = Kind::compound;
    t.name_ = std::move(functor);
    t.args_ = std::move(args);
    return t;
  }
  // Successor term `base+n`; the grammar only admits n == 1.
  static Term plus(Term base, long long n) {
    Term t;
    t.kind_ = Kind::plus;
    t.value_ = n;
    t.args_.push_back(std::move(base));
    return t;
  }

  Kind kind() const { return kind_; }
  const std::string& name() const { return name_; }
  long long value() const { return value_; }
  const std::vector<Term>& args() const { return args_; }

  bool is_ground() const {
    switch (kind_) {
      case Kind::constant:
      case Kind::integer: return true;
      case Kind::variable: return false;
      case Kind::compound:
      case Kind::plus:
        for (const Term& a : args_)
          if (!a.is_ground()) return false;
        return true;
    }
    return false;
  }

  void collect_vars(std::vector<std::string>& out) const {
    switch (kind_) {
      case Kind::variable:
        if (std::find(out.begin(), out.end(), name_) == out.end()) out.push_back(name_);
        break;
      case Kind::compound:
      case Kind::plus:
        for (const Term& a : args_) a.collect_vars(out);
        break;
      default: break;
    }
  }

  // Applies a substitution and evaluates `i+n` to an integer when the
  // base resolves to one. A plus term over a non-integer stays symbolic;
  // the grounder discards such instances.
  Term substitute(const Subst& s) const {
    switch (kind_) {
      case Kind::constant:
      case Kind::integer: return *this;
      case Kind::variable: {
        auto it = s.find(name_);
        return it == s.end() ? *this : it->second;
      }
      case Kind::compound: {
        std::vector<Term> as;
        as.reserve(args_.size());
        for (const Term& a : args_) as.push_back(a.substitute(s));
        return compound(name_, std::move(as));
      }
      case Kind::plus: {
        Term base = args_[0].substitute(s);
        if (base.kind() == Kind::integer) return integer(base.value() + value_);
        return plus(std::move(base), value_);
      }
    }
    return *this;
  }

  void print(std::ostream& os) const {
    switch (kind_) {
      case Kind::constant: os << name_; break;
      case Kind::integer: os << value_; break;
      case Kind::variable: os << name_; break;
      case Kind::compound: {
        os << name_ << '(';
        for (size_t i = 0; i < args_.size(); ++i) {
          if (i) os << ',';
          args_[i].print(os);
        }
        os << ')';
        break;
      }
      case Kind::plus:
        args_[0].print(os);
        os << '+' << value_;
        break;
    }
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  friend bool operator==(const Term& a, const Term& b) {
    return a.kind_ == b.kind_ && a.name_ == b.name_ && a.value_ == b.value_ &&
           a.args_ == b.args_;
  }
  friend bool operator!=(const Term& a, const Term& b) { return !(a == b); }
  friend bool operator<(const Term& a, const Term& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (a.name_ != b.name_) return a.name_ < b.name_;
    if (a.value_ != b.value_) return a.value_ < b.value_;
    return a.args_ < b.args_;
  }

private:
  Kind kind_;
  std::string name_;
  long long value_ = 0;
  std::vector<Term> args_;
};

struct Atom {
  std::string predicate;
  std::vector<Term> args;

  Atom() = default;
  Atom(std::string p, std::vector<Term> a = {}) : predicate(std::move(p)), args(std::move(a)) {}

  size_t arity() const { return args.size(); }

  bool is_ground() const {
    for (const Term& a : args)
      if (!a.is_ground()) return false;
    return true;
  }

  void collect_vars(std::vector<std::string>& out) const {
    for (const Term& a : args) a.collect_vars(out);
  }

  Atom substitute(const Subst& s) const {
    std::vector<Term> as;
    as.reserve(args.size());
    for (const Term& a : args) as.push_back(a.substitute(s));
    return Atom(predicate, std::move(as));
  }

  void print(std::ostream& os) const {
    os << predicate;
    if (!args.empty()) {
      os << '(';
      for (size_t i = 0; i < args.size(); ++i) {
        if (i) os << ',';
        args[i].print(os);
      }
      os << ')';
    }
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  friend bool operator==(const Atom& a, const Atom& b) {
    return a.predicate == b.predicate && a.args == b.args;
  }
  friend bool operator!=(const Atom& a, const Atom& b) { return !(a == b); }
  friend bool operator<(const Atom& a, const Atom& b) {
    if (a.predicate != b.predicate) return a.predicate < b.predicate;
    return a.args < b.args;
  }
};

using AtomSet = std::set<Atom>;

struct Literal {
  Atom atom;
  bool negated = false;

  Literal() = default;
  Literal(Atom a, bool neg = false) : atom(std::move(a)), negated(neg) {}

  void print(std::ostream& os) const {
    if (negated) os << "not ";
    atom.print(os);
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  friend bool operator==(const Literal& a, const Literal& b) {
    return a.negated == b.negated && a.atom == b.atom;
  }
  friend bool operator!=(const Literal& a, const Literal& b) { return !(a == b); }
  friend bool operator<(const Literal& a, const Literal& b) {
    if (a.negated != b.negated) return a.negated < b.negated;
    return a.atom < b.atom;
  }
};

// Structural match of a pattern term against a ground term. Bindings are
// accumulated in `subst`; a repeated variable must bind consistently.
inline bool unify_term(const Term& pattern, const Term& subject, Subst& subst) {
  switch (pattern.kind()) {
    case Term::Kind::variable: {
      auto it = subst.find(pattern.name());
      if (it != subst.end()) return it->second == subject;
      subst.emplace(pattern.name(), subject);
      return true;
    }
    case Term::Kind::constant:
    case Term::Kind::integer:
      return pattern == subject;
    case Term::Kind::compound: {
      if (subject.kind() != Term::Kind::compound) return false;
      if (pattern.name() != subject.name()) return false;
      if (pattern.args().size() != subject.args().size()) return false;
      for (size_t i = 0; i < pattern.args().size(); ++i)
        if (!unify_term(pattern.args()[i], subject.args()[i], subst)) return false;
      return true;
    }
    case Term::Kind::plus: {
      if (subject.kind() != Term::Kind::integer) return false;
      return unify_term(pattern.args()[0], Term::integer(subject.value() - pattern.value()),
                        subst);
    }
  }
  return false;
}

// Matches a (possibly non-ground) atom pattern against a ground atom.
// Returns the witnessing substitution, or nullopt if they do not unify.
inline std::optional<Subst> unify(const Atom& pattern, const Atom& subject) {
  if (pattern.predicate != subject.predicate) return std::nullopt;
  if (pattern.args.size() != subject.args.size()) return std::nullopt;
  Subst s;
  for (size_t i = 0; i < pattern.args.size(); ++i)
    if (!unify_term(pattern.args[i], subject.args[i], s)) return std::nullopt;
  return s;
}

}  // namespace fabula
