#pragma once

// Sentence -> fluent representation.
//
// A FluentRep is one or more atoms extracted from a sentence:
// conjunctive atoms all hold ("Mary and John went home"), disjunctive
// atoms are open alternatives ("Bill is either in the school or the
// park").  Questions carry a single query variable.
//
// Backends produce the representation as text so that every backend
// shares one cache and one validation path:
//
//   go_to(mary,bathroom)            single atom
//   got(john,apple) & got(john,pie) conjunction
//   be(bill,school) | be(bill,park) alternatives
//
// DeterministicBackend is a small lexicon-driven grammar.
// HttpBackend posts the sentence to a remote parser (an LLM behind a
// JSON endpoint) and validates the reply against the lexicon.
// ParseCache is an append-only sentence -> parse TSV so repeated runs
// never re-query a backend.

#include <algorithm>
#include <cctype>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "babi.hpp"
#include "lexicon.hpp"
#include "normalize.hpp"
#include "parse.hpp"
#include "term.hpp"

namespace fabula {

struct ParseBackendError : std::runtime_error {
  explicit ParseBackendError(const std::string& msg) : std::runtime_error(msg) {}
};

struct FluentRep {
  std::vector<Atom> atoms;
  bool disjunctive = false;
  std::string query_var;  // empty for statements

  std::string str() const {
    std::string out;
    for (size_t i = 0; i < atoms.size(); ++i) {
      if (i) out += disjunctive ? " | " : " & ";
      out += atoms[i].str();
    }
    return out;
  }
};

// Parses backend output into a representation and checks it against
// the vocabulary.  expects_var is true for wh questions, which need
// exactly one variable; all other sentences admit none.
inline FluentRep parse_fluent_text(const std::string& text, const Lexicon& lex,
                                   bool expects_var) {
  char sep = 0;
  if (text.find('|') != std::string::npos) sep = '|';
  if (text.find('&') != std::string::npos) {
    if (sep) throw ParseBackendError("mixed '&' and '|' in parse: " + text);
    sep = '&';
  }
  FluentRep rep;
  rep.disjunctive = sep == '|';
  std::vector<std::string> parts = sep ? detail::split(text, sep) : std::vector<std::string>{text};
  for (const std::string& part : parts) {
    std::string t = detail::trim(part);
    if (t.empty()) throw ParseBackendError("empty alternative in parse: " + text);
    Atom a;
    try {
      a = parse_atom(t);
    } catch (const ParseError& e) {
      throw ParseBackendError("bad parse '" + t + "': " + e.what());
    }
    a.predicate = lex.canonical(a.predicate);
    rep.atoms.push_back(std::move(a));
  }
  if (rep.disjunctive && rep.atoms.size() < 2) {
    throw ParseBackendError("disjunction with a single alternative: " + text);
  }
  for (const Atom& a : rep.atoms) {
    for (const Term& arg : a.args) {
      if (arg.kind() == Term::Kind::variable) {
        if (!expects_var) {
          throw ParseBackendError("unexpected variable in parse: " + text);
        }
        if (rep.query_var.empty()) rep.query_var = arg.name();
        if (rep.query_var != arg.name()) {
          throw ParseBackendError("multiple variables in parse: " + text);
        }
      } else if (arg.kind() == Term::Kind::constant) {
        if (!lex.tags.count(arg.name())) {
          throw ParseBackendError("unknown constant '" + arg.name() + "' in parse: " + text);
        }
      } else if (arg.kind() != Term::Kind::integer) {
        throw ParseBackendError("unsupported argument '" + arg.str() + "' in parse: " + text);
      }
    }
  }
  if (expects_var && rep.query_var.empty()) {
    throw ParseBackendError("question parse has no query variable: " + text);
  }
  return rep;
}

class ParserBackend {
 public:
  virtual ~ParserBackend() = default;
  virtual std::string parse(const Sentence& s) = 0;
  virtual int retries() const { return 0; }
};

// Lexicon-driven grammar.  Tokens are lowercased and stopwords
// dropped; the sentence is then
//
//   subjects  verb-phrase  arguments
//
// where subjects are leading proper nouns joined by "and", the verb
// phrase is the longest lexicon match, and arguments split on "or"
// (alternatives) or "and" (conjuncts).  Questions are reordered
// first: the wh word is removed, a fronted auxiliary moves back
// behind the subject, and the query variable V1 is placed in the
// subject slot for "who", appended otherwise.
class DeterministicBackend : public ParserBackend {
 public:
  explicit DeterministicBackend(const Lexicon& lex) : lex_(lex) {}

  std::string parse(const Sentence& s) override {
    std::vector<std::string> toks;
    for (const detail::Word& t : detail::tokenize(s.text)) {
      if (t.low.empty() || lex_.stopwords.count(t.low)) continue;
      toks.push_back(t.low);
    }
    auto fail = [&](const std::string& why) -> ParseBackendError {
      return ParseBackendError("cannot parse '" + s.text + "': " + why);
    };
    if (toks.empty()) throw fail("no tokens");

    bool who = false;
    bool count = false;
    if (s.is_question) {
      if (!s.wh.empty()) {
        who = s.wh == "who";
        count = s.wh == "how_many";
        size_t drop = count ? 2 : 1;  // "how many" is two tokens
        if (toks.size() < drop) throw fail("missing wh words");
        toks.erase(toks.begin(), toks.begin() + drop);
        // "how many apples ..." measures a noun; drop it
        if (count && !toks.empty() && lex_.tags.count(toks[0]) &&
            !lex_.has_tag(toks[0], "nnp")) {
          toks.erase(toks.begin());
        }
      }
      // move a fronted auxiliary behind the subject run
      if (!toks.empty() && !lex_.has_tag(toks[0], "nnp")) {
        size_t run = 1;
        while (run < toks.size() && lex_.has_tag(toks[run], "nnp")) {
          if (run + 2 < toks.size() && toks[run + 1] == "and" &&
              lex_.has_tag(toks[run + 2], "nnp")) {
            run += 2;
          } else {
            ++run;
            break;
          }
        }
        if (run > 1) {
          std::string aux = toks[0];
          toks.erase(toks.begin());
          if (aux != "did" && aux != "does" && aux != "do") {
            toks.insert(toks.begin() + (run - 1), aux);
          }
        }
      }
    }

    std::vector<std::string> subjects;
    size_t i = 0;
    while (i < toks.size() && lex_.has_tag(toks[i], "nnp")) {
      subjects.push_back(toks[i]);
      ++i;
      if (i + 1 < toks.size() && toks[i] == "and" && lex_.has_tag(toks[i + 1], "nnp")) {
        ++i;
      } else {
        break;
      }
    }

    std::string pred;
    size_t vlen = lex_.match_verb(toks, i, &pred);
    if (vlen == 0) throw fail("no verb found");
    pred = lex_.canonical(pred);
    i += vlen;

    std::vector<std::vector<std::string>> groups = {{}};
    bool disjunctive = false;
    for (; i < toks.size(); ++i) {
      if (toks[i] == "or") {
        disjunctive = true;
        groups.push_back({});
      } else if (toks[i] == "and") {
        groups.push_back({});
      } else {
        bool numeric = std::all_of(toks[i].begin(), toks[i].end(), [](unsigned char c) {
          return std::isdigit(c);
        });
        if (!lex_.tags.count(toks[i]) && !numeric) {
          throw fail("unknown word '" + toks[i] + "'");
        }
        groups.back().push_back(toks[i]);
      }
    }

    std::vector<std::vector<std::string>> object_lists;
    for (const auto& g : groups) {
      if (!g.empty()) object_lists.push_back(g);
    }
    if (disjunctive && object_lists.size() < 2) throw fail("dangling 'or'");

    // who-questions bind the subject slot
    if (who) {
      if (!subjects.empty()) throw fail("who-question already has a subject");
      subjects.push_back("V1");
    } else if (subjects.empty()) {
      throw fail("no subject found");
    }

    std::vector<std::string> atom_texts;
    if (object_lists.empty()) object_lists.push_back({});
    for (const std::string& subj : subjects) {
      for (const auto& objs : object_lists) {
        std::string args = subj;
        for (const std::string& o : objs) args += "," + o;
        if (s.is_question && !s.wh.empty() && !who) {
          args += ",V1";
        }
        atom_texts.push_back(pred + "(" + args + ")");
      }
    }
    std::string out;
    for (size_t k = 0; k < atom_texts.size(); ++k) {
      if (k) out += disjunctive ? " | " : " & ";
      out += atom_texts[k];
    }
    return out;
  }

 private:
  const Lexicon& lex_;
};

// Append-only sentence -> parse store, one tab-separated pair per
// line.  Malformed lines are ignored.
class ParseCache {
 public:
  explicit ParseCache(std::string path) : path_(std::move(path)) {
    std::ifstream in(path_);
    std::string line;
    while (std::getline(in, line)) {
      size_t tab = line.find('\t');
      if (tab == std::string::npos || tab == 0) continue;
      entries_[line.substr(0, tab)] = line.substr(tab + 1);
    }
  }

  const std::string* lookup(const std::string& sentence) const {
    auto it = entries_.find(sentence);
    return it == entries_.end() ? nullptr : &it->second;
  }

  void store(const std::string& sentence, const std::string& parse) {
    if (entries_.count(sentence)) return;
    entries_[sentence] = parse;
    std::ofstream out(path_, std::ios::app);
    out << sentence << '\t' << parse << '\n';
  }

  size_t size() const { return entries_.size(); }

 private:
  std::string path_;
  std::map<std::string, std::string> entries_;
};

// Few-shot prompt for a remote parser.  The {{sentence}} placeholder
// marks where the sentence goes.
inline std::string parser_prompt(
    const std::vector<std::string>& predicates,
    const std::vector<std::pair<std::string, std::string>>& exemplars,
    const std::string& sentence = "{{sentence}}") {
  std::string out = "Please parse the sentence provided below into a first-order logic predicate form.\n";
  out += "The available predicates names are: ";
  for (size_t i = 0; i < predicates.size(); ++i) {
    if (i) out += ", ";
    out += predicates[i];
  }
  out += ".\n";
  for (const auto& [text, parse] : exemplars) {
    out += "Sentence: " + text + "\n";
    out += "Semantic parse: " + parse + "\n";
  }
  out += "\nPlease, provide just the parsing data using the examples format.\n";
  out += "The sentence to parse is:\n";
  out += "Sentence: " + sentence + "\n";
  out += "Semantic parse:";
  return out;
}

// Cache wrapper and validation loop shared by all backends.
inline FluentRep parse_sentence(ParserBackend& backend, const Sentence& s, const Lexicon& lex,
                                ParseCache* cache = nullptr) {
  bool expects_var = s.is_question && !s.wh.empty();
  if (cache) {
    if (const std::string* hit = cache->lookup(s.text)) {
      return parse_fluent_text(*hit, lex, expects_var);
    }
  }
  int attempts = backend.retries() + 1;
  std::string last_error;
  for (int k = 0; k < attempts; ++k) {
    std::string text;
    try {
      text = backend.parse(s);
      FluentRep rep = parse_fluent_text(text, lex, expects_var);
      if (cache) cache->store(s.text, text);
      return rep;
    } catch (const ParseBackendError& e) {
      last_error = e.what();
    }
  }
  throw ParseBackendError("giving up on '" + s.text + "' after " + std::to_string(attempts) +
                          " attempt(s): " + last_error);
}

}  // namespace fabula
