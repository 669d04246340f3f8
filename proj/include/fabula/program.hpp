#pragma once

// Rules and programs: facts, normal rules, hard constraints, and choice
// rules `l{h1;...;hk}u :- body`. Programs are immutable after
// construction; validation enforces safety, arity consistency and choice
// bounds.

#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "fabula/term.hpp"

namespace fabula {

// Reserved head marker for constraints inside reducts. Not lexable, so it
// can never appear in user input.
inline const std::string kBottom = "⊥";

inline Atom bottom_atom() { return Atom(kBottom); }

class ValidationError : public std::runtime_error {
public:
  explicit ValidationError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class RuleKind { normal, constraint, choice };

class Rule {
public:
  static Rule fact(Atom head) { return normal(std::move(head), {}); }

  static Rule normal(Atom head, std::vector<Literal> body) {
    Rule r;
    r.kind_ = RuleKind::normal;
    r.head_ = std::move(head);
    r.body_ = std::move(body);
    return r;
  }

  static Rule constraint(std::vector<Literal> body) {
    Rule r;
    r.kind_ = RuleKind::constraint;
    r.body_ = std::move(body);
    return r;
  }

  static Rule choice(long long lower, std::vector<Atom> heads, long long upper,
                     std::vector<Literal> body = {}) {
    Rule r;
    r.kind_ = RuleKind::choice;
    r.lower_ = lower;
    r.upper_ = upper;
    r.choice_heads_ = std::move(heads);
    r.body_ = std::move(body);
    return r;
  }

  RuleKind kind() const { return kind_; }
  bool is_fact() const { return kind_ == RuleKind::normal && body_.empty(); }
  const Atom& head() const { return head_; }
  const std::vector<Atom>& choice_heads() const { return choice_heads_; }
  long long lower() const { return lower_; }
  long long upper() const { return upper_; }
  const std::vector<Literal>& body() const { return body_; }

  bool is_ground() const {
    if (kind_ == RuleKind::normal && !head_.is_ground()) return false;
    for (const Atom& h : choice_heads_)
      if (!h.is_ground()) return false;
    for (const Literal& l : body_)
      if (!l.atom.is_ground()) return false;
    return true;
  }

  std::vector<std::string> vars() const {
    std::vector<std::string> out;
    if (kind_ == RuleKind::normal) head_.collect_vars(out);
    for (const Atom& h : choice_heads_) h.collect_vars(out);
    for (const Literal& l : body_) l.atom.collect_vars(out);
    return out;
  }

  Rule substitute(const Subst& s) const {
    Rule r = *this;
    if (kind_ == RuleKind::normal) r.head_ = head_.substitute(s);
    for (Atom& h : r.choice_heads_) h = h.substitute(s);
    for (Literal& l : r.body_) l.atom = l.atom.substitute(s);
    return r;
  }

  // Safety: every variable occurs in some positive body literal;
  // facts must be variable-free.
  void check_safe() const {
    std::vector<std::string> positive;
    for (const Literal& l : body_)
      if (!l.negated) l.atom.collect_vars(positive);
    for (const std::string& v : vars()) {
      if (std::find(positive.begin(), positive.end(), v) == positive.end())
        throw ValidationError("unsafe variable " + v + " in rule: " + str());
    }
  }

  void print(std::ostream& os) const {
    switch (kind_) {
      case RuleKind::normal:
        head_.print(os);
        if (!body_.empty()) {
          os << " :- ";
          print_body(os);
        }
        break;
      case RuleKind::constraint:
        os << ":- ";
        print_body(os);
        break;
      case RuleKind::choice:
        os << lower_ << '{';
        for (size_t i = 0; i < choice_heads_.size(); ++i) {
          if (i) os << ';';
          choice_heads_[i].print(os);
        }
        os << '}' << upper_;
        if (!body_.empty()) {
          os << " :- ";
          print_body(os);
        }
        break;
    }
    os << '.';
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  friend bool operator==(const Rule& a, const Rule& b) {
    return a.kind_ == b.kind_ && a.head_ == b.head_ && a.choice_heads_ == b.choice_heads_ &&
           a.lower_ == b.lower_ && a.upper_ == b.upper_ && a.body_ == b.body_;
  }
  friend bool operator!=(const Rule& a, const Rule& b) { return !(a == b); }
  friend bool operator<(const Rule& a, const Rule& b) {
    if (a.kind_ != b.kind_) return a.kind_ < b.kind_;
    if (!(a.head_ == b.head_)) return a.head_ < b.head_;
    if (a.choice_heads_ != b.choice_heads_) return a.choice_heads_ < b.choice_heads_;
    if (a.lower_ != b.lower_) return a.lower_ < b.lower_;
    if (a.upper_ != b.upper_) return a.upper_ < b.upper_;
    return a.body_ < b.body_;
  }

private:
  void print_body(std::ostream& os) const {
    for (size_t i = 0; i < body_.size(); ++i) {
      if (i) os << ',';
      body_[i].print(os);
    }
  }

  RuleKind kind_ = RuleKind::normal;
  Atom head_;
  std::vector<Atom> choice_heads_;
  long long lower_ = 0, upper_ = 0;
  std::vector<Literal> body_;
};

class Program {
public:
  Program() = default;
  explicit Program(std::vector<Rule> rules) : rules_(std::move(rules)) {}

  const std::vector<Rule>& rules() const { return rules_; }
  bool empty() const { return rules_.empty(); }
  size_t size() const { return rules_.size(); }

  void add(Rule r) { rules_.push_back(std::move(r)); }
  void add_all(const Program& p) {
    rules_.insert(rules_.end(), p.rules_.begin(), p.rules_.end());
  }

  bool is_ground() const {
    for (const Rule& r : rules_)
      if (!r.is_ground()) return false;
    return true;
  }

  // Safety, choice bounds, and per-program predicate arity consistency.
  void validate() const {
    std::map<std::string, size_t> arity;
    auto check_atom = [&](const Atom& a) {
      auto [it, inserted] = arity.emplace(a.predicate, a.arity());
      if (!inserted && it->second != a.arity())
        throw ValidationError("arity clash for predicate " + a.predicate + ": " +
                              std::to_string(it->second) + " vs " +
                              std::to_string(a.arity()));
    };
    for (const Rule& r : rules_) {
      r.check_safe();
      if (r.kind() == RuleKind::normal) check_atom(r.head());
      if (r.kind() == RuleKind::choice) {
        if (r.choice_heads().empty())
          throw ValidationError("choice rule with no heads: " + r.str());
        long long k = static_cast<long long>(r.choice_heads().size());
        if (r.lower() < 0 || r.lower() > r.upper() || r.upper() > k)
          throw ValidationError("bad choice bounds in rule: " + r.str());
        for (const Atom& h : r.choice_heads()) check_atom(h);
      }
      for (const Literal& l : r.body()) check_atom(l.atom);
    }
  }

  std::set<std::string> predicates() const {
    std::set<std::string> out;
    for (const Rule& r : rules_) {
      if (r.kind() == RuleKind::normal) out.insert(r.head().predicate);
      for (const Atom& h : r.choice_heads()) out.insert(h.predicate);
      for (const Literal& l : r.body()) out.insert(l.atom.predicate);
    }
    return out;
  }

  void print(std::ostream& os) const {
    for (const Rule& r : rules_) {
      r.print(os);
      os << '\n';
    }
  }

  std::string str() const {
    std::ostringstream os;
    print(os);
    return os.str();
  }

  friend bool operator==(const Program& a, const Program& b) { return a.rules_ == b.rules_; }
  friend bool operator!=(const Program& a, const Program& b) { return !(a == b); }

private:
  std::vector<Rule> rules_;
};

}  // namespace fabula
