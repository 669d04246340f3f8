#pragma once

// Hypothesis space: every rule the learner may use, enumerated from
// the mode declarations.
//
// A candidate rule picks one #modeh instantiation as head (or no
// head, giving a constraint) and a set of #modeb instantiations as
// body, each positive or negated.  Variable slots range over V1..Vmaxv,
// constant slots over the typed constant pools.  Each variable gets a
// type guard atom t(V) appended to the body; guards do not count
// toward the rule's cost, which is the number of head plus non-guard
// body literals.
//
// Excluded shapes:
//   * a variable used at two different types
//   * the head atom occurring in the body, either polarity
//   * an atom occurring in the body both positively and negated
//   * constraints with an empty body
//   * headless duplicates (alpha-variants collapse to one rule)
//   * rules with no non-guard body literal and a non-ground head,
//     which would blanket-assert every instance of the head
//
// Rules are kept in canonical form: body literals ordered to
// minimize the printed rule, variables renamed in first-occurrence
// order.  The space is sorted by (cost, text) and rule ids are the
// positions in that order, so search order is reproducible.

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "mode_bias.hpp"
#include "parse.hpp"
#include "program.hpp"
#include "term.hpp"

namespace fabula {

struct SpaceLimitError : std::runtime_error {
  explicit SpaceLimitError(const std::string& msg) : std::runtime_error(msg) {}
};

struct CandidateRule {
  Rule rule;  // guards included in the body
  int cost = 0;
};

inline uint64_t fnv1a64(const std::string& s) {
  uint64_t h = 1469598103934665603ull;
  for (unsigned char c : s) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

inline uint64_t space_key(const std::vector<ModeDecl>& decls, const BiasConfig& config) {
  std::string text;
  for (const ModeDecl& d : decls) text += d.str() + "\n";
  text += config.key();
  return fnv1a64(text);
}

struct HypothesisSpace {
  uint64_t key = 0;
  std::vector<CandidateRule> rules;  // sorted by (cost, rule text)

  std::string serialize() const {
    std::ostringstream os;
    os << "% space " << std::hex << key << std::dec << " rules " << rules.size() << "\n";
    for (const CandidateRule& c : rules) {
      os << c.cost << " ~ " << c.rule.str() << "\n";
    }
    return os.str();
  }

  static HypothesisSpace deserialize(const std::string& text) {
    std::istringstream in(text);
    std::string line;
    if (!std::getline(in, line)) throw ValidationError("space file is empty");
    std::istringstream head(line);
    std::string pct, word;
    uint64_t key = 0;
    size_t count = 0;
    head >> pct >> word >> std::hex >> key >> std::dec;
    if (pct != "%" || word != "space" || !(head >> word) || word != "rules" ||
        !(head >> count)) {
      throw ValidationError("bad space file header: " + line);
    }
    HypothesisSpace space;
    space.key = key;
    while (std::getline(in, line)) {
      if (detail::trim(line).empty()) continue;
      size_t tilde = line.find('~');
      if (tilde == std::string::npos) throw ValidationError("bad space line: " + line);
      CandidateRule c;
      c.cost = std::stoi(line.substr(0, tilde));
      Program p = parse_program(line.substr(tilde + 1));
      if (p.rules().size() != 1) throw ValidationError("bad space line: " + line);
      c.rule = p.rules()[0];
      space.rules.push_back(std::move(c));
    }
    if (space.rules.size() != count) {
      throw ValidationError("space file rule count mismatch");
    }
    return space;
  }
};

namespace detail {

struct LitPattern {
  Atom atom;
  std::map<std::string, std::string> var_types;  // V name -> type
};

// All instantiations of one declaration: variable slots run over
// V1..Vmaxv, constant slots over their typed pool.  Instantiations
// typing one variable at two types are dropped.
inline std::vector<LitPattern> instantiate(const ModeDecl& decl, const BiasConfig& config) {
  std::vector<Slot> slots = decl.fluent.slots;
  if (!decl.wrapper.empty()) slots.push_back(Slot{false, "time"});

  std::vector<std::vector<Term>> choices;
  std::vector<std::string> types;
  for (const Slot& s : slots) {
    std::vector<Term> opts;
    if (s.is_const) {
      auto it = config.constants.find(s.type);
      if (it == config.constants.end()) return {};
      for (const std::string& v : it->second) opts.push_back(Term::constant(v));
    } else {
      for (int v = 1; v <= config.maxv; ++v) {
        opts.push_back(Term::variable("V" + std::to_string(v)));
      }
    }
    if (opts.empty()) return {};
    choices.push_back(std::move(opts));
    types.push_back(s.type);
  }

  std::vector<LitPattern> out;
  std::vector<size_t> idx(choices.size(), 0);
  while (true) {
    LitPattern pat;
    bool ok = true;
    std::vector<Term> filled;
    for (size_t i = 0; i < choices.size(); ++i) {
      const Term& t = choices[i][idx[i]];
      filled.push_back(t);
      if (t.kind() == Term::Kind::variable) {
        auto [it, fresh] = pat.var_types.emplace(t.name(), types[i]);
        if (!fresh && it->second != types[i]) {
          ok = false;
          break;
        }
      }
    }
    if (ok) {
      size_t n = decl.fluent.slots.size();
      std::vector<Term> fluent_args(filled.begin(), filled.begin() + n);
      if (decl.wrapper.empty()) {
        pat.atom = Atom{decl.fluent.predicate, fluent_args};
      } else {
        Term inner = fluent_args.empty() ? Term::constant(decl.fluent.predicate)
                                         : Term::compound(decl.fluent.predicate, fluent_args);
        pat.atom = Atom{decl.wrapper, {inner, filled.back()}};
      }
      out.push_back(std::move(pat));
    }
    size_t k = choices.size();
    while (k > 0 && ++idx[k - 1] == choices[k - 1].size()) idx[--k] = 0;
    if (k == 0) break;
  }
  return out;
}

// Minimal printed form over body permutations, with variables
// renamed in first-occurrence order (head first).
struct CanonicalRule {
  Rule rule;
  std::string text;
};

inline CanonicalRule canonicalize(const std::optional<Atom>& head,
                                  const std::vector<Literal>& body,
                                  const std::map<std::string, std::string>& var_types) {
  std::vector<size_t> order(body.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = i;
  CanonicalRule best;
  bool first = true;
  do {
    std::vector<std::string> vars;
    if (head) head->collect_vars(vars);
    for (size_t i : order) body[i].atom.collect_vars(vars);
    Subst rename;
    std::map<std::string, std::string> new_types;
    for (size_t i = 0; i < vars.size(); ++i) {
      std::string nv = "V" + std::to_string(i + 1);
      rename[vars[i]] = Term::variable(nv);
      new_types[nv] = var_types.at(vars[i]);
    }
    std::vector<Literal> renamed;
    for (size_t i : order) {
      renamed.push_back(Literal{body[i].atom.substitute(rename), body[i].negated});
    }
    for (const auto& [v, type] : new_types) {
      renamed.push_back(Literal{Atom{type, {Term::variable(v)}}, false});
    }
    Rule r = head ? Rule::normal(head->substitute(rename), renamed)
                  : Rule::constraint(renamed);
    std::string text = r.str();
    if (first || text < best.text) {
      best.rule = std::move(r);
      best.text = std::move(text);
      first = false;
    }
  } while (std::next_permutation(order.begin(), order.end()));
  return best;
}

}  // namespace detail

inline HypothesisSpace enumerate_space(const std::vector<ModeDecl>& decls,
                                       const BiasConfig& config) {
  std::vector<detail::LitPattern> heads;
  std::vector<detail::LitPattern> pool_atoms;
  for (const ModeDecl& d : decls) {
    auto pats = detail::instantiate(d, config);
    auto& dst = d.head ? heads : pool_atoms;
    dst.insert(dst.end(), pats.begin(), pats.end());
  }
  struct PoolLit {
    Literal lit;
    const std::map<std::string, std::string>* var_types;
  };
  std::vector<PoolLit> pool;
  for (const detail::LitPattern& p : pool_atoms) {
    pool.push_back({Literal{p.atom, false}, &p.var_types});
    pool.push_back({Literal{p.atom, true}, &p.var_types});
  }

  const size_t cap = config.space_cap;
  const size_t raw_limit = std::max<size_t>(cap * 64, size_t{1} << 20);
  size_t raw = 0;
  std::map<std::string, CandidateRule> found;

  auto overflow = [&](const std::string& what) -> SpaceLimitError {
    return SpaceLimitError("hypothesis space too large: " + what + " (cap " +
                           std::to_string(cap) + " rules)");
  };

  std::vector<Literal> body;
  std::map<std::string, std::string> var_types;

  auto emit = [&](const detail::LitPattern* head) {
    if (++raw > raw_limit) {
      throw overflow("enumeration passed " + std::to_string(raw_limit) + " candidates");
    }
    std::optional<Atom> head_atom;
    if (head) head_atom = head->atom;
    if (!head && body.empty()) return;
    if (head && body.empty() && !head->atom.is_ground()) return;
    detail::CanonicalRule canon = detail::canonicalize(head_atom, body, var_types);
    int cost = static_cast<int>(body.size()) + (head ? 1 : 0);
    auto [it, fresh] = found.emplace(canon.text, CandidateRule{std::move(canon.rule), cost});
    if (fresh && found.size() > cap) {
      throw overflow("more than " + std::to_string(cap) + " rules for this bias");
    }
  };

  // Depth-first over body subsets in pool order; type conflicts,
  // complementary literals and head repetition prune the branch.
  auto merge_types = [&](const std::map<std::string, std::string>& add,
                         std::vector<std::string>* added) {
    for (const auto& [v, t] : add) {
      auto [it, fresh] = var_types.emplace(v, t);
      if (fresh) {
        added->push_back(v);
      } else if (it->second != t) {
        for (const std::string& u : *added) var_types.erase(u);
        return false;
      }
    }
    return true;
  };

  std::function<void(const detail::LitPattern*, size_t, size_t)> grow =
      [&](const detail::LitPattern* head, size_t start, size_t budget) {
        emit(head);
        if (budget == 0) return;
        for (size_t i = start; i < pool.size(); ++i) {
          const PoolLit& cand = pool[i];
          if (head && cand.lit.atom == head->atom) continue;
          bool clash = false;
          for (const Literal& b : body) {
            if (b.atom == cand.lit.atom) {
              clash = true;
              break;
            }
          }
          if (clash) continue;
          std::vector<std::string> added;
          if (!merge_types(*cand.var_types, &added)) continue;
          body.push_back(cand.lit);
          grow(head, i + 1, budget - 1);
          body.pop_back();
          for (const std::string& v : added) var_types.erase(v);
        }
      };

  size_t max_size = static_cast<size_t>(std::max(config.max_rule_size, 0));
  if (config.allow_constraints && max_size > 0) {
    grow(nullptr, 0, max_size);
  }
  for (const detail::LitPattern& h : heads) {
    if (max_size == 0) break;
    std::vector<std::string> added;
    if (!merge_types(h.var_types, &added)) continue;
    grow(&h, 0, max_size - 1);
    for (const std::string& v : added) var_types.erase(v);
  }

  HypothesisSpace space;
  space.key = space_key(decls, config);
  for (auto& [text, cand] : found) space.rules.push_back(std::move(cand));
  std::stable_sort(space.rules.begin(), space.rules.end(),
                   [](const CandidateRule& a, const CandidateRule& b) {
                     if (a.cost != b.cost) return a.cost < b.cost;
                     return a.rule.str() < b.rule.str();
                   });
  return space;
}

// Disk-backed store of enumerated spaces, keyed by declarations and
// bias.  Unreadable or mismatched files are rebuilt in place.
class SpaceCache {
 public:
  explicit SpaceCache(std::string dir = "") : dir_(std::move(dir)) {
    if (!dir_.empty()) std::filesystem::create_directories(dir_);
  }

  struct Stats {
    size_t lookups = 0;
    size_t memory_hits = 0;
    size_t disk_hits = 0;
    size_t builds = 0;

    double hit_rate() const {
      return lookups == 0 ? 0.0
                          : static_cast<double>(lookups - builds) / static_cast<double>(lookups);
    }
  };

  const HypothesisSpace& lookup(const std::vector<ModeDecl>& decls, const BiasConfig& config) {
    ++stats_.lookups;
    uint64_t key = space_key(decls, config);
    auto it = mem_.find(key);
    if (it != mem_.end()) {
      ++stats_.memory_hits;
      return it->second;
    }
    if (!dir_.empty()) {
      std::ifstream in(file_for(key));
      if (in) {
        std::ostringstream buf;
        buf << in.rdbuf();
        try {
          HypothesisSpace space = HypothesisSpace::deserialize(buf.str());
          if (space.key == key) {
            ++stats_.disk_hits;
            return mem_.emplace(key, std::move(space)).first->second;
          }
        } catch (const ValidationError&) {
          // fall through and rebuild
        }
      }
    }
    ++stats_.builds;
    HypothesisSpace space = enumerate_space(decls, config);
    if (!dir_.empty()) {
      std::ofstream out(file_for(key));
      out << space.serialize();
    }
    return mem_.emplace(key, std::move(space)).first->second;
  }

  const Stats& stats() const { return stats_; }

 private:
  std::string file_for(uint64_t key) const {
    std::ostringstream os;
    os << dir_ << "/space-" << std::hex << key << ".txt";
    return os.str();
  }

  std::string dir_;
  Stats stats_;
  std::map<uint64_t, HypothesisSpace> mem_;
};

}  // namespace fabula
