#pragma once

// Answer-set solver over ground normal/constraint/choice programs.
//
// Semantics follow the simplified reduct: (1) drop rules whose body has
// `not a` with a in I; (2) drop remaining negative literals; (3) turn
// constraints and choice rules whose bound check fails into bottom-head
// rules; (4) replace a surviving choice rule by `h :- body` for each
// chosen head. I is an answer set iff it is consistent and equals the
// least model of its reduct.
//
// Search guesses truth only for "open" atoms: choice heads plus atoms
// under negation inside their own dependency component. Programs that
// are stratified modulo choices need one guess per choice combination;
// everything else is completed deterministically stratum by stratum and
// certified by the definitional check above. A full subset enumeration
// is kept as a fallback for small Herbrand bases.

#include <algorithm>
#include <map>
#include <ostream>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "fabula/ground.hpp"
#include "fabula/program.hpp"

namespace fabula {


class SolveLimitError : public std::runtime_error {
public:
  explicit SolveLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

enum class SolveStrategy { automatic, guided, brute };

struct SolveOptions {
  size_t bound = 10'000;          // max answer sets; exceeding is an error
  bool allow_incomplete = false;  // truncate + flag instead of throwing
  SolveStrategy strategy = SolveStrategy::automatic;
  size_t brute_threshold = 12;    // brute fallback only below this Herbrand size
  size_t max_open = 24;           // guess width limit for the guided search
  std::ostream* debug = nullptr;
  GroundOptions ground;
};

struct SolveResult {
  std::vector<AtomSet> answer_sets;
  bool complete = true;
};

enum class Entailment { all, some, none };

// Definitional four-step reduct of a ground program.
inline Program reduct(const Program& p, const AtomSet& interp) {
  std::vector<Rule> out;
  for (const Rule& r : p.rules()) {
    bool dropped = false;
    for (const Literal& l : r.body()) {
      if (l.negated && interp.count(l.atom)) {
        dropped = true;
        break;
      }
    }
    if (dropped) continue;
    std::vector<Literal> body;
    for (const Literal& l : r.body())
      if (!l.negated) body.push_back(l);
    switch (r.kind()) {
      case RuleKind::normal:
        out.push_back(Rule::normal(r.head(), std::move(body)));
        break;
      case RuleKind::constraint:
        out.push_back(Rule::normal(bottom_atom(), std::move(body)));
        break;
      case RuleKind::choice: {
        long long chosen = 0;
        for (const Atom& h : r.choice_heads())
          if (interp.count(h)) ++chosen;
        if (chosen < r.lower() || chosen > r.upper()) {
          out.push_back(Rule::normal(bottom_atom(), std::move(body)));
        } else {
          for (const Atom& h : r.choice_heads())
            if (interp.count(h)) out.push_back(Rule::normal(h, body));
        }
        break;
      }
    }
  }
  return Program(std::move(out));
}

// Least model of a positive program; second result is false when a
// bottom-head rule or constraint fires.
inline std::pair<AtomSet, bool> least_model(const Program& p) {
  for (const Rule& r : p.rules()) {
    if (r.kind() == RuleKind::choice)
      throw ValidationError("least_model requires a choice-free program");
    for (const Literal& l : r.body())
      if (l.negated) throw ValidationError("least_model requires a positive program");
  }
  AtomSet m;
  bool changed = true;
  while (changed) {
    changed = false;
    for (const Rule& r : p.rules()) {
      if (r.kind() != RuleKind::normal) continue;
      if (r.head().predicate != kBottom && m.count(r.head())) continue;
      bool fire = true;
      for (const Literal& l : r.body()) {
        if (!m.count(l.atom)) {
          fire = false;
          break;
        }
      }
      if (fire && r.head().predicate != kBottom && !m.count(r.head())) {
        m.insert(r.head());
        changed = true;
      }
    }
  }
  bool consistent = true;
  for (const Rule& r : p.rules()) {
    bool fire = true;
    for (const Literal& l : r.body()) {
      if (!m.count(l.atom)) {
        fire = false;
        break;
      }
    }
    if (!fire) continue;
    if (r.kind() == RuleKind::constraint ||
        (r.kind() == RuleKind::normal && r.head().predicate == kBottom)) {
      consistent = false;
      break;
    }
  }
  return {std::move(m), consistent};
}

namespace detail {

struct IdRule {
  int head = -1;  // -1: constraint
  std::vector<int> pos, neg;
};

struct IdChoice {
  long long lo = 0, hi = 0;
  std::vector<int> heads;
  std::vector<int> pos, neg;
};

struct IdProgram {
  std::vector<Atom> atoms;  // id -> atom, structurally sorted
  std::map<Atom, int> ids;
  std::vector<IdRule> rules;
  std::vector<IdChoice> choices;

  explicit IdProgram(const Program& g) {
    std::set<Atom> all;
    auto note = [&all](const Atom& a) { all.insert(a); };
    for (const Rule& r : g.rules()) {
      if (r.kind() == RuleKind::normal) note(r.head());
      for (const Atom& h : r.choice_heads()) note(h);
      for (const Literal& l : r.body()) note(l.atom);
    }
    atoms.assign(all.begin(), all.end());
    for (int i = 0; i < static_cast<int>(atoms.size()); ++i) ids.emplace(atoms[i], i);
    for (const Rule& r : g.rules()) {
      if (r.kind() == RuleKind::choice) {
        IdChoice c;
        c.lo = r.lower();
        c.hi = r.upper();
        for (const Atom& h : r.choice_heads()) c.heads.push_back(ids.at(h));
        split_body(r, c.pos, c.neg);
        choices.push_back(std::move(c));
      } else {
        IdRule ir;
        ir.head = r.kind() == RuleKind::normal ? ids.at(r.head()) : -1;
        split_body(r, ir.pos, ir.neg);
        rules.push_back(std::move(ir));
      }
    }
  }

  void split_body(const Rule& r, std::vector<int>& pos, std::vector<int>& neg) const {
    for (const Literal& l : r.body())
      (l.negated ? neg : pos).push_back(ids.at(l.atom));
  }

  size_t n() const { return atoms.size(); }
};

// Least model of the reduct w.r.t. truth vector `interp`, plus the
// consistency verdict. Mirrors the definitional reduct on interned ids.
inline std::pair<std::vector<char>, bool> reduct_model(const IdProgram& p,
                                                       const std::vector<char>& interp) {
  std::vector<char> m(p.n(), 0);
  auto survives = [&](const std::vector<int>& neg) {
    for (int a : neg)
      if (interp[a]) return false;
    return true;
  };
  auto fires = [&](const std::vector<int>& pos) {
    for (int a : pos)
      if (!m[a]) return false;
    return true;
  };
  bool changed = true;
  while (changed) {
    changed = false;
    for (const IdRule& r : p.rules) {
      if (r.head < 0 || m[r.head] || !survives(r.neg)) continue;
      if (fires(r.pos)) {
        m[r.head] = 1;
        changed = true;
      }
    }
    for (const IdChoice& c : p.choices) {
      if (!survives(c.neg) || !fires(c.pos)) continue;
      long long chosen = 0;
      for (int h : c.heads)
        if (interp[h]) ++chosen;
      if (chosen < c.lo || chosen > c.hi) continue;  // bottom rule, checked below
      for (int h : c.heads) {
        if (interp[h] && !m[h]) {
          m[h] = 1;
          changed = true;
        }
      }
    }
  }
  bool consistent = true;
  for (const IdRule& r : p.rules) {
    if (r.head >= 0 || !survives(r.neg)) continue;
    if (fires(r.pos)) {
      consistent = false;
      break;
    }
  }
  if (consistent) {
    for (const IdChoice& c : p.choices) {
      if (!survives(c.neg) || !fires(c.pos)) continue;
      long long chosen = 0;
      for (int h : c.heads)
        if (interp[h]) ++chosen;
      if (chosen < c.lo || chosen > c.hi) {
        consistent = false;
        break;
      }
    }
  }
  return {std::move(m), consistent};
}

inline bool stable(const IdProgram& p, const std::vector<char>& interp) {
  auto [m, consistent] = reduct_model(p, interp);
  return consistent && m == interp;
}

// Tarjan SCC (iterative) over the atom dependency graph.
inline std::vector<int> components(const IdProgram& p,
                                   const std::vector<std::vector<int>>& succ) {
  size_t n = p.n();
  std::vector<int> comp(n, -1), low(n, 0), num(n, -1);
  std::vector<int> stack;
  std::vector<char> on_stack(n, 0);
  int counter = 0, comp_count = 0;
  struct Frame {
    int v;
    size_t i;
  };
  for (size_t root = 0; root < n; ++root) {
    if (num[root] != -1) continue;
    std::vector<Frame> call;
    call.push_back({static_cast<int>(root), 0});
    while (!call.empty()) {
      Frame& f = call.back();
      int v = f.v;
      if (f.i == 0) {
        num[v] = low[v] = counter++;
        stack.push_back(v);
        on_stack[v] = 1;
      }
      bool descended = false;
      while (f.i < succ[v].size()) {
        int w = succ[v][f.i++];
        if (num[w] == -1) {
          call.push_back({w, 0});
          descended = true;
          break;
        }
        if (on_stack[w]) low[v] = std::min(low[v], num[w]);
      }
      if (descended) continue;
      if (low[v] == num[v]) {
        while (true) {
          int w = stack.back();
          stack.pop_back();
          on_stack[w] = 0;
          comp[w] = comp_count;
          if (w == v) break;
        }
        ++comp_count;
      }
      call.pop_back();
      if (!call.empty()) {
        int parent = call.back().v;
        low[parent] = std::min(low[parent], low[v]);
      }
    }
  }
  return comp;
}

}  // namespace detail

// All answer sets of `p`, canonically ordered (lexicographic over each
// set's sorted atom strings). Grounds the program first if needed.
inline SolveResult answer_sets(const Program& p, const SolveOptions& opts = {}) {
  Program g = p.is_ground() ? p : ground(p, opts.ground);
  detail::IdProgram ip(g);
  size_t n = ip.n();

  std::vector<std::vector<char>> found;

  auto emit_candidate = [&](const std::vector<char>& interp) {
    if (detail::stable(ip, interp)) {
      if (opts.debug) {
        *opts.debug << "% stable:";
        for (size_t i = 0; i < n; ++i)
          if (interp[i]) *opts.debug << ' ' << ip.atoms[i].str();
        *opts.debug << '\n';
      }
      found.push_back(interp);
      if (found.size() > opts.bound && !opts.allow_incomplete)
        throw SolveLimitError("more than " + std::to_string(opts.bound) + " answer sets");
    }
  };

  // Open atoms: choice heads plus atoms negated within their own
  // dependency component.
  std::vector<std::vector<int>> succ(n);
  std::vector<std::pair<int, int>> neg_edges;  // (atom, head)
  for (const detail::IdRule& r : ip.rules) {
    if (r.head < 0) continue;
    for (int a : r.pos) succ[a].push_back(r.head);
    for (int a : r.neg) {
      succ[a].push_back(r.head);
      neg_edges.emplace_back(a, r.head);
    }
  }
  for (const detail::IdChoice& c : ip.choices) {
    for (int h : c.heads) {
      for (int a : c.pos) succ[a].push_back(h);
      for (int a : c.neg) {
        succ[a].push_back(h);
        neg_edges.emplace_back(a, h);
      }
    }
  }
  std::vector<int> comp = detail::components(ip, succ);
  std::vector<char> is_open(n, 0);
  for (const detail::IdChoice& c : ip.choices)
    for (int h : c.heads) is_open[h] = 1;
  for (auto [a, h] : neg_edges)
    if (comp[a] == comp[h]) is_open[a] = 1;
  std::vector<int> open;
  for (size_t i = 0; i < n; ++i)
    if (is_open[i]) open.push_back(static_cast<int>(i));

  bool use_brute = false;
  switch (opts.strategy) {
    case SolveStrategy::brute:
      use_brute = true;
      break;
    case SolveStrategy::guided:
      if (open.size() > opts.max_open)
        throw SolveLimitError("guided search over " + std::to_string(open.size()) +
                              " open atoms exceeds limit " + std::to_string(opts.max_open));
      break;
    case SolveStrategy::automatic:
      if (open.size() > opts.max_open) {
        if (n <= opts.brute_threshold)
          use_brute = true;
        else
          throw SolveLimitError("program has " + std::to_string(open.size()) +
                                " open atoms over a Herbrand base of " + std::to_string(n));
      }
      break;
  }

  if (use_brute) {
    if (n > 25)
      throw SolveLimitError("brute enumeration infeasible for Herbrand base of " +
                            std::to_string(n));
    for (unsigned long long mask = 0; mask < (1ull << n); ++mask) {
      std::vector<char> interp(n, 0);
      for (size_t i = 0; i < n; ++i) interp[i] = (mask >> i) & 1ull;
      if (opts.debug) {
        *opts.debug << "% candidate:";
        for (size_t i = 0; i < n; ++i)
          if (interp[i]) *opts.debug << ' ' << ip.atoms[i].str();
        *opts.debug << '\n';
      }
      emit_candidate(interp);
    }
  } else {
    // Stratified completion per guess: process dependency components in
    // topological order; negation reads the guess for open atoms and the
    // settled model for lower components.
    size_t comp_count = 0;
    for (size_t i = 0; i < n; ++i)
      comp_count = std::max(comp_count, static_cast<size_t>(comp[i]) + 1);
    // Tarjan completes sink components first, so along body->head edges
    // heads get lower ids; descending id order evaluates bodies first.
    std::vector<std::vector<size_t>> rules_by_comp(comp_count);
    for (size_t ri = 0; ri < ip.rules.size(); ++ri)
      if (ip.rules[ri].head >= 0)
        rules_by_comp[comp[ip.rules[ri].head]].push_back(ri);
    std::vector<std::vector<std::pair<size_t, int>>> choice_heads_by_comp(comp_count);
    for (size_t ci = 0; ci < ip.choices.size(); ++ci)
      for (int h : ip.choices[ci].heads)
        choice_heads_by_comp[comp[h]].emplace_back(ci, h);

    if (open.size() > 62)
      throw SolveLimitError("open atom count " + std::to_string(open.size()) +
                            " too large to enumerate");
    for (unsigned long long mask = 0; mask < (1ull << open.size()); ++mask) {
      std::vector<char> guess(n, 0);
      for (size_t i = 0; i < open.size(); ++i)
        if ((mask >> i) & 1ull) guess[open[i]] = 1;
      std::vector<char> m(n, 0);
      auto neg_false = [&](const std::vector<int>& neg) {
        for (int a : neg) {
          bool truth = is_open[a] ? guess[a] != 0 : m[a] != 0;
          if (truth) return false;
        }
        return true;
      };
      auto pos_in = [&](const std::vector<int>& pos) {
        for (int a : pos)
          if (!m[a]) return false;
        return true;
      };
      for (size_t c = comp_count; c-- > 0;) {
        bool changed = true;
        while (changed) {
          changed = false;
          for (size_t ri : rules_by_comp[c]) {
            const detail::IdRule& r = ip.rules[ri];
            if (m[r.head] || !neg_false(r.neg) || !pos_in(r.pos)) continue;
            m[r.head] = 1;
            changed = true;
          }
          for (auto [ci, h] : choice_heads_by_comp[c]) {
            if (!guess[h] || m[h]) continue;
            const detail::IdChoice& ch = ip.choices[ci];
            if (!neg_false(ch.neg) || !pos_in(ch.pos)) continue;
            m[h] = 1;
            changed = true;
          }
        }
      }
      bool matches = true;
      for (int a : open) {
        if ((m[a] != 0) != (guess[a] != 0)) {
          matches = false;
          break;
        }
      }
      if (opts.debug) {
        *opts.debug << "% candidate:";
        for (size_t i = 0; i < n; ++i)
          if (m[i]) *opts.debug << ' ' << ip.atoms[i].str();
        *opts.debug << (matches ? "" : " (guess mismatch)") << '\n';
      }
      if (matches) emit_candidate(m);
    }
  }

  // Canonical order: lexicographic over each set's sorted atom strings.
  std::vector<std::pair<std::vector<std::string>, AtomSet>> keyed;
  keyed.reserve(found.size());
  for (const std::vector<char>& interp : found) {
    AtomSet s;
    std::vector<std::string> key;
    for (size_t i = 0; i < n; ++i) {
      if (interp[i]) {
        s.insert(ip.atoms[i]);
        key.push_back(ip.atoms[i].str());
      }
    }
    std::sort(key.begin(), key.end());
    keyed.emplace_back(std::move(key), std::move(s));
  }
  std::sort(keyed.begin(), keyed.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  SolveResult res;
  for (auto& [key, s] : keyed) {
    if (res.answer_sets.size() == opts.bound) {
      res.complete = false;
      break;
    }
    res.answer_sets.push_back(std::move(s));
  }
  return res;
}

// Query status across all answer sets.
inline Entailment entailment(const Program& p, const Atom& query,
                             const SolveOptions& opts = {}) {
  SolveResult r = answer_sets(p, opts);
  if (r.answer_sets.empty()) return Entailment::none;
  size_t hits = 0;
  for (const AtomSet& s : r.answer_sets)
    if (s.count(query)) ++hits;
  if (hits == 0) return Entailment::none;
  return hits == r.answer_sets.size() ? Entailment::all : Entailment::some;
}

}  // namespace fabula
