#pragma once

// Hand-written vocabulary that drives the deterministic sentence
// parser and the typing of mode declarations.  Tab-separated file,
// one entry per line, '#' starts a comment:
//
//   nnp<TAB>mary              proper noun (actor)
//   nn<TAB>kitchen            common noun (place, object)
//   jj<TAB>thirsty            adjective
//   pronoun<TAB>she
//   negation<TAB>no longer    multi-word markers allowed
//   time<TAB>yesterday        temporal token, typed const(time)
//   stop<TAB>the              dropped before matching
//   verb<TAB>went to<TAB>go_to
//   alias<TAB>be_in<TAB>be    predicate spelling canonicalization
//
// Verb phrases are matched longest-first against the token stream.
// The default negation markers {not, no longer, n't} are always
// present; file entries add to them.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "babi.hpp"

namespace fabula {

struct LexiconError : std::runtime_error {
  explicit LexiconError(const std::string& msg) : std::runtime_error(msg) {}
};

struct Lexicon {
  std::map<std::string, std::string> tags;  // token -> nnp | nn | jj
  std::set<std::string> pronouns;
  std::set<std::string> plural_pronouns = {"they", "them"};
  std::vector<std::vector<std::string>> negations = {{"not"}, {"no", "longer"}, {"n't"}};
  std::set<std::string> temporal;
  std::set<std::string> stopwords;
  // verb phrase tokens -> predicate name, kept sorted longest-first
  std::vector<std::pair<std::vector<std::string>, std::string>> verbs;
  std::map<std::string, std::string> aliases;

  static Lexicon load(const std::string& text);
  static Lexicon load_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw LexiconError("cannot open " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return load(buf.str());
  }

  // nnp | nn | jj | number
  std::string pos_tag(const std::string& token) const {
    if (!token.empty() &&
        std::all_of(token.begin(), token.end(),
                    [](unsigned char c) { return std::isdigit(c); })) {
      return "number";
    }
    auto it = tags.find(token);
    if (it == tags.end()) throw LexiconError("unknown token '" + token + "'");
    return it->second;
  }

  bool has_tag(const std::string& token, const std::string& tag) const {
    auto it = tags.find(token);
    return it != tags.end() && it->second == tag;
  }

  std::string canonical(const std::string& predicate) const {
    auto it = aliases.find(predicate);
    return it == aliases.end() ? predicate : it->second;
  }

  // Longest verb phrase starting at tokens[i]; returns its length and
  // sets predicate, or returns 0.
  size_t match_verb(const std::vector<std::string>& tokens, size_t i,
                    std::string* predicate) const {
    for (const auto& [phrase, pred] : verbs) {
      if (phrase.size() > tokens.size() - i) continue;
      bool ok = true;
      for (size_t k = 0; k < phrase.size(); ++k) {
        if (tokens[i + k] != phrase[k]) {
          ok = false;
          break;
        }
      }
      if (ok) {
        *predicate = pred;
        return phrase.size();
      }
    }
    return 0;
  }

  std::vector<std::string> predicates() const {
    std::set<std::string> seen;
    for (const auto& [phrase, pred] : verbs) seen.insert(canonical(pred));
    return {seen.begin(), seen.end()};
  }

  std::set<std::string> constants_of(const std::string& tag) const {
    std::set<std::string> out;
    for (const auto& [tok, t] : tags) {
      if (t == tag) out.insert(tok);
    }
    return out;
  }
};

inline Lexicon Lexicon::load(const std::string& text) {
  Lexicon lex;
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  auto words = [](const std::string& s) {
    std::istringstream ss(s);
    std::vector<std::string> out;
    std::string w;
    while (ss >> w) out.push_back(detail::lower(w));
    return out;
  };
  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = detail::trim(raw);
    if (line.empty() || line[0] == '#') continue;
    std::vector<std::string> f = detail::split(line, '\t');
    for (std::string& part : f) part = detail::trim(part);
    const std::string& kind = f[0];
    auto need = [&](size_t n) {
      if (f.size() != n || f.back().empty()) {
        throw LexiconError("line " + std::to_string(line_no) + ": '" + kind + "' needs " +
                           std::to_string(n - 1) + " field(s)");
      }
    };
    if (kind == "nnp" || kind == "nn" || kind == "jj") {
      need(2);
      std::string tok = detail::lower(f[1]);
      auto it = lex.tags.find(tok);
      if (it != lex.tags.end() && it->second != kind) {
        throw LexiconError("line " + std::to_string(line_no) + ": token '" + tok +
                           "' already tagged " + it->second);
      }
      lex.tags[tok] = kind;
    } else if (kind == "pronoun") {
      need(2);
      lex.pronouns.insert(detail::lower(f[1]));
    } else if (kind == "negation") {
      need(2);
      lex.negations.push_back(words(f[1]));
    } else if (kind == "time") {
      need(2);
      lex.temporal.insert(detail::lower(f[1]));
    } else if (kind == "stop") {
      need(2);
      lex.stopwords.insert(detail::lower(f[1]));
    } else if (kind == "verb") {
      need(3);
      lex.verbs.emplace_back(words(f[1]), detail::lower(f[2]));
    } else if (kind == "alias") {
      need(3);
      lex.aliases[detail::lower(f[1])] = detail::lower(f[2]);
    } else {
      throw LexiconError("line " + std::to_string(line_no) + ": unknown entry kind '" + kind +
                         "'");
    }
  }
  std::stable_sort(lex.verbs.begin(), lex.verbs.end(),
                   [](const auto& a, const auto& b) { return a.first.size() > b.first.size(); });
  return lex;
}

}  // namespace fabula
